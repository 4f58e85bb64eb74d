#include "charlab/charstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace charlab {

namespace {

void check_coefficients(std::uint64_t N, const std::vector<cplx>& alpha) {
  if (alpha.size() < N) throw std::invalid_argument("need N coefficients");
  for (std::uint64_t n = 0; n < N; ++n)
    if (std::abs(alpha[n]) > 1.0 + 1e-12) throw std::invalid_argument("coefficients must satisfy |alpha_n| <= 1");
}

// alpha folded onto discrete logs: w[ind(n)] += alpha_n for n <= N, q not dividing n
std::vector<cplx> fold(const ModulusContext& ctx, std::uint64_t N, const std::vector<cplx>& alpha) {
  std::vector<cplx> w(ctx.order(), 0.0);
  for (std::uint64_t n = 1; n <= N; ++n)
    if (n % ctx.q() != 0) w[ctx.ind(n)] += alpha[n - 1];
  return w;
}

cplx twist(const ModulusContext& ctx, std::uint64_t e, const std::vector<cplx>& w) {
  const std::uint64_t n = ctx.order();
  std::uint64_t idx = 0;
  cplx acc = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    acc += ctx.root(idx) * w[k];
    idx += e;
    if (idx >= n) idx -= n;
  }
  return acc;
}

// position of r among g^1, ..., g^{q-1}
std::uint64_t power_position(const ModulusContext& ctx, std::uint64_t r) {
  const std::uint64_t k = ctx.ind(r);
  return k == 0 ? ctx.order() : k;
}

std::vector<char> membership(const ModulusContext& ctx, std::uint64_t N) {
  std::vector<char> in(ctx.q(), 0);
  for (std::uint64_t r = 1; r < ctx.q(); ++r) in[r] = power_position(ctx, r) <= N ? 1 : 0;
  return in;
}

void check_window_args(const ModulusContext& ctx, std::uint64_t Hlen, std::uint64_t N) {
  if (Hlen < 1 || Hlen > ctx.q()) throw std::invalid_argument("window length must lie in [1, q]");
  if (N < 1 || N > ctx.order()) throw std::invalid_argument("N must lie in [1, q-1]");
}

}  // namespace

MeanValueReport mean_value_M(const ModulusContext& ctx, const CharacterSet& A, std::uint64_t N,
                             const std::vector<cplx>& alpha) {
  if (A.empty()) throw std::invalid_argument("mean_value_M: empty character set");
  if (N < 1) throw std::invalid_argument("mean_value_M: needs N >= 1");
  if (N > ctx.q()) throw std::invalid_argument("mean_value_M: N must not exceed q");
  check_coefficients(N, alpha);

  const auto w = fold(ctx, N, alpha);
  double acc = 0.0;
  for (auto e : A.exponents) acc += std::abs(twist(ctx, e, w));

  MeanValueReport rep;
  rep.A = A.size();
  rep.N = N;
  rep.M = acc / static_cast<double>(A.size());
  rep.K = product_set(A).K;
  const double Ad = static_cast<double>(A.size()), Nd = static_cast<double>(N);
  const double qd = static_cast<double>(ctx.q());
  rep.envelope = std::sqrt(rep.K) * (std::sqrt(Nd) + Nd / std::sqrt(Ad) + std::pow(Ad, -0.375) * std::sqrt(Nd) * std::pow(qd, 0.25));
  rep.ratio = rep.M / rep.envelope;
  return rep;
}

HbReport hb_double_sum(const ModulusContext& ctx, const std::vector<Character>& chars, std::uint64_t N,
                       const std::vector<cplx>& alpha) {
  if (chars.empty()) throw std::invalid_argument("hb_double_sum: needs at least one character");
  if (N < 1 || N > ctx.q()) throw std::invalid_argument("hb_double_sum: N must lie in [1, q]");
  check_coefficients(N, alpha);
  std::vector<std::uint64_t> es;
  for (const auto& c : chars) {
    if (c.ctx == nullptr || c.ctx->q() != ctx.q()) throw std::invalid_argument("hb_double_sum: foreign character");
    es.push_back(c.e);
  }
  auto sorted = es;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("hb_double_sum: characters must be distinct");

  const auto w = fold(ctx, N, alpha);
  const std::uint64_t n = ctx.order();
  std::vector<double> by_diff(n, -1.0);
  double acc = 0.0;
  for (auto a : es)
    for (auto b : es) {
      const std::uint64_t d = (a + n - b) % n;
      if (by_diff[d] < 0.0) by_diff[d] = std::norm(twist(ctx, d, w));
      acc += by_diff[d];
    }

  HbReport rep;
  rep.R = es.size();
  rep.N = N;
  rep.value = acc;
  const double R = static_cast<double>(es.size()), Nd = static_cast<double>(N);
  rep.envelope = Nd * Nd * R + Nd * R * R + Nd * std::pow(R, 1.25) * std::sqrt(static_cast<double>(ctx.q()));
  return rep;
}

double zero_density_envelope(double q, double H, double sigma) {
  if (!(sigma > 0.5 && sigma < 1.5)) throw std::invalid_argument("zero_density_envelope: sigma out of range");
  if (H >= std::pow(q, 2.0 / 3.0)) return std::pow(H, (7.0 - 6.0 * sigma) / (6.0 - 4.0 * sigma));
  return std::pow(H, (4.0 - 3.0 * sigma) / (6.0 - 4.0 * sigma)) * std::pow(q, (1.0 - sigma) / (3.0 - 2.0 * sigma));
}

ZeroDensityAggregate zero_density_aggregate(const ModulusContext& ctx, const CharacterSet& H, double sigma, double T) {
  if (!(sigma > 0.5)) throw std::invalid_argument("zero_density_aggregate: needs sigma > 1/2");
  if (!(T > 0.0 && T <= 10.0)) throw std::invalid_argument("zero_density_aggregate: needs 0 < T <= 10");
  if (ctx.q() > 500) throw std::invalid_argument("zero_density_aggregate: q above 500 is out of range");
  ZeroDensityAggregate out;
  out.sigma = sigma;
  out.T = T;
  out.min_margin = std::numeric_limits<double>::infinity();
  ZeroCounter counter(ctx);
  for (auto e : H.exponents) {
    const auto rep = counter.count(Character(ctx, e), sigma, T);
    out.exponents.push_back(e);
    out.per_char.push_back(rep.count);
    out.total += rep.count;
    out.min_margin = std::min(out.min_margin, rep.contour_margin);
  }
  out.bound_envelope = zero_density_envelope(static_cast<double>(ctx.q()), static_cast<double>(H.size()), sigma);
  return out;
}

std::uint64_t window_count_f(const ModulusContext& ctx, std::uint64_t a, std::uint64_t Hlen, std::uint64_t N) {
  check_window_args(ctx, Hlen, N);
  if (a >= ctx.q()) throw std::invalid_argument("window_count_f: a must lie in [0, q)");
  std::uint64_t f = 0;
  for (std::uint64_t h = 1; h <= Hlen; ++h) {
    const std::uint64_t r = (a + h) % ctx.q();
    if (r != 0 && power_position(ctx, r) <= N) ++f;
  }
  return f;
}

std::vector<std::uint64_t> window_counts(const ModulusContext& ctx, std::uint64_t Hlen, std::uint64_t N) {
  check_window_args(ctx, Hlen, N);
  const std::uint64_t q = ctx.q();
  const auto in = membership(ctx, N);
  std::vector<std::uint64_t> f(q, 0);
  std::uint64_t cur = 0;
  for (std::uint64_t h = 1; h <= Hlen; ++h) cur += in[h % q];
  f[0] = cur;
  for (std::uint64_t a = 1; a < q; ++a) {
    // window moves from {a, ..., a+Hlen-1} to {a+1, ..., a+Hlen}
    cur -= in[a % q];
    cur += in[(a + Hlen) % q];
    f[a] = cur;
  }
  return f;
}

VarianceReport variance_V(const ModulusContext& ctx, std::uint64_t Hlen, std::uint64_t N) {
  const auto f = window_counts(ctx, Hlen, N);
  VarianceReport rep;
  rep.q = ctx.q();
  rep.g = ctx.g();
  rep.N = N;
  rep.Hlen = Hlen;
  for (auto v : f) {
    rep.sum_f += v;
    rep.sum_f2 += v * v;
  }
  const auto q = static_cast<std::int64_t>(ctx.q());
  const auto HN = static_cast<std::int64_t>(Hlen * N);
  rep.numerator = q * static_cast<std::int64_t>(rep.sum_f2) - HN * HN;
  rep.V = static_cast<double>(rep.numerator) / (static_cast<double>(q) * static_cast<double>(q));
  rep.reference = static_cast<double>(HN);
  return rep;
}

PairCorrelationReport pair_correlation_R2(const ModulusContext& ctx, std::uint64_t N, std::uint64_t Hscale,
                                          double alpha_window, double gamma) {
  if (N < 1 || N > ctx.order()) throw std::invalid_argument("pair_correlation_R2: N must lie in [1, q-1]");
  if (Hscale < 1) throw std::invalid_argument("pair_correlation_R2: Hscale must be positive");
  if (!(alpha_window >= 0.0 && gamma >= 0.0)) throw std::invalid_argument("pair_correlation_R2: bad window");
  const std::uint64_t q = ctx.q();
  const double scale = static_cast<double>(q) / static_cast<double>(Hscale);

  PairCorrelationReport rep;
  rep.q = q;
  rep.g = ctx.g();
  rep.N = N;
  rep.Hscale = Hscale;
  rep.alpha = alpha_window;
  rep.gamma = gamma;
  const double left = std::floor(alpha_window * scale);
  const double right = std::floor((alpha_window + gamma) * scale);
  rep.lo = static_cast<std::uint64_t>(std::max(left, 0.0));
  rep.hi = static_cast<std::uint64_t>(std::min(right, static_cast<double>(q - 1)));
  if (rep.hi <= rep.lo) {
    rep.degenerate = true;
    return rep;
  }
  const std::uint64_t width = rep.hi - rep.lo;

  std::vector<std::uint64_t> pw(N + 1);
  for (std::uint64_t n = 1; n <= N; ++n) pw[n] = ctx.power(n);
  if (width < N) {
    // for each m, look for n with g^n = g^m - h, h in the window
    for (std::uint64_t m = 1; m <= N; ++m)
      for (std::uint64_t h = rep.lo + 1; h <= rep.hi; ++h) {
        const std::uint64_t r = (pw[m] + q - h % q) % q;
        if (r != 0 && power_position(ctx, r) <= N) ++rep.pairs;
      }
  } else {
    for (std::uint64_t m = 1; m <= N; ++m)
      for (std::uint64_t n = 1; n <= N; ++n) {
        if (m == n) continue;
        const std::uint64_t d = (pw[m] + q - pw[n]) % q;
        if (d > rep.lo && d <= rep.hi) ++rep.pairs;
      }
  }
  rep.value = static_cast<double>(rep.pairs) / static_cast<double>(N);
  return rep;
}

}  // namespace charlab
