#include "charlab/lfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace charlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;
// primes below this stay individual in EulerProductTable
constexpr std::uint64_t kSmallPrimeLimit = 1000;
constexpr int kFoldedPowers = 6;

void same_modulus(const ModulusContext& ctx, const Character& chi) {
  if (chi.ctx == nullptr || chi.ctx->q() != ctx.q())
    throw std::invalid_argument("character belongs to a different modulus");
}

// sum_k chi(g^k) w[k] for a character given by exponent e
template <class T>
cplx twist(const ModulusContext& ctx, std::uint64_t e, const std::vector<T>& w) {
  const std::uint64_t n = ctx.order();
  const std::uint64_t step = e % n;
  std::uint64_t idx = 0;
  cplx acc = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    acc += ctx.root(idx) * w[k];
    idx += step;
    if (idx >= n) idx -= n;
  }
  return acc;
}

std::uint64_t floor_u64(double X) {
  if (!(X >= 0.0)) return 0;
  return static_cast<std::uint64_t>(std::floor(X));
}

}  // namespace

const char* to_string(LMethod m) {
  switch (m) {
    case LMethod::oracle: return "oracle";
    case LMethod::euler_product: return "euler_product";
    case LMethod::afe: return "afe";
    case LMethod::prime_sum: return "prime_sum";
  }
  return "unknown";
}

HurwitzRow::HurwitzRow(const ModulusContext& ctx, cplx s) : ctx_(&ctx), s_(s) {
  const std::uint64_t q = ctx.q();
  const auto qd = static_cast<double>(q);
  by_index_.resize(ctx.order());
  at_one_ = (s == cplx(1.0, 0.0));
  for (std::uint64_t k = 0; k < ctx.order(); ++k) {
    const double a = static_cast<double>(ctx.power(k)) / qd;
    if (at_one_) {
      const double psi = digamma(a);
      by_index_[k] = -psi;
      err_sum_ += 4.0 * kEps * std::abs(psi);
      mag_sum_ += std::abs(psi);
    } else {
      const auto h = hurwitz_zeta(s, a);
      by_index_[k] = h.value;
      err_sum_ += h.est_error;
      mag_sum_ += std::abs(h.value);
    }
  }
}

LValue HurwitzRow::evaluate(const Character& chi) const {
  same_modulus(*ctx_, chi);
  if (at_one_ && chi.is_principal()) throw PoleError("L(s, chi_0) has a pole at s = 1");
  const double logq = std::log(static_cast<double>(ctx_->q()));
  const cplx scale = std::exp(-s_ * logq);
  const cplx sum = twist(*ctx_, chi.e, by_index_);
  LValue out;
  out.s = s_;
  out.value = scale * sum;
  out.method = LMethod::oracle;
  out.est_error = std::abs(scale) * (err_sum_ + 4.0 * kEps * mag_sum_);
  return out;
}

LValue l_oracle(const Character& chi, cplx s) {
  if (chi.ctx == nullptr) throw std::invalid_argument("l_oracle: unbound character");
  if (!(s.real() > 0.0)) throw std::invalid_argument("l_oracle: needs Re s > 0");
  if (chi.is_principal() && s == cplx(1.0, 0.0)) throw PoleError("L(s, chi_0) has a pole at s = 1");
  HurwitzRow row(*chi.ctx, s);
  auto v = row.evaluate(chi);
  if (chi.ctx->q() <= 10000 && v.est_error > kOracleTarget)
    throw PrecisionError("l_oracle: error bound " + std::to_string(v.est_error) + " exceeds target");
  return v;
}

LValue finite_euler_product(const Character& chi, double X, double sigma) {
  if (chi.ctx == nullptr) throw std::invalid_argument("finite_euler_product: unbound character");
  const std::uint64_t q = chi.ctx->q();
  cplx prod = 1.0;
  std::uint64_t count = 0;
  for_each_prime(2, floor_u64(X), [&](std::uint64_t p) {
    if (p == q) return;
    const double w = std::pow(static_cast<double>(p), -sigma);
    prod /= 1.0 - chi(p) * w;
    ++count;
  });
  LValue out;
  out.s = sigma;
  out.value = prod;
  out.method = LMethod::euler_product;
  out.est_error = 4.0 * kEps * static_cast<double>(count + 1) * std::abs(prod);
  return out;
}

EulerProductTable::EulerProductTable(const ModulusContext& ctx, double X, double sigma)
    : ctx_(&ctx), X_(X), sigma_(sigma), folded_(kFoldedPowers, std::vector<double>(ctx.order(), 0.0)) {
  const std::uint64_t q = ctx.q();
  for_each_prime(2, floor_u64(X), [&](std::uint64_t p) {
    if (p == q) return;
    const double w = std::pow(static_cast<double>(p), -sigma);
    const std::uint64_t k = ctx.ind(p);
    if (p < kSmallPrimeLimit) {
      small_.emplace_back(k, w);
      return;
    }
    double wj = w;
    for (int j = 1; j <= kFoldedPowers; ++j) {
      folded_[j - 1][k] += wj / j;
      wj *= w;
    }
    // sum_{j > 6} w^j / j <= w^7 / (7 (1 - w))
    tail_bound_ += wj / (7.0 * (1.0 - w));
  });
}

cplx EulerProductTable::log_value(const Character& chi) const {
  same_modulus(*ctx_, chi);
  cplx acc = 0.0;
  for (const auto& [k, w] : small_) acc -= std::log(1.0 - ctx_->root(chi.e * k) * w);
  for (int j = 1; j <= kFoldedPowers; ++j) acc += twist(*ctx_, chi.e * static_cast<std::uint64_t>(j), folded_[j - 1]);
  return acc;
}

LValue EulerProductTable::value(const Character& chi) const {
  const cplx lg = log_value(chi);
  LValue out;
  out.s = sigma_;
  out.value = std::exp(lg);
  out.method = LMethod::euler_product;
  const double abs_v = std::abs(out.value);
  out.est_error = abs_v * (std::expm1(tail_bound_) + 8.0 * kEps * static_cast<double>(small_.size() + ctx_->order()));
  return out;
}

cplx prime_sum_S(const Character& chi, double sigma, double X) {
  if (chi.ctx == nullptr) throw std::invalid_argument("prime_sum_S: unbound character");
  const std::uint64_t q = chi.ctx->q();
  cplx acc = 0.0;
  for_each_prime(2, floor_u64(X), [&](std::uint64_t p) {
    if (p == q) return;
    acc += chi(p) * std::pow(static_cast<double>(p), -sigma);
  });
  return acc;
}

PrimeSumTable::PrimeSumTable(const ModulusContext& ctx, double sigma, double X, double X_low)
    : ctx_(&ctx), folded_(ctx.order(), 0.0) {
  const std::uint64_t q = ctx.q();
  const std::uint64_t lo = floor_u64(X_low) + 1;
  for_each_prime(std::max<std::uint64_t>(lo, 2), floor_u64(X), [&](std::uint64_t p) {
    if (p == q) return;
    folded_[ctx.ind(p)] += std::pow(static_cast<double>(p), -sigma);
  });
}

cplx PrimeSumTable::value(const Character& chi) const {
  same_modulus(*ctx_, chi);
  return twist(*ctx_, chi.e, folded_);
}

cplx lambda_sum(const Character& chi, double sigma, double t, double X) {
  if (chi.ctx == nullptr) throw std::invalid_argument("lambda_sum: unbound character");
  const std::uint64_t q = chi.ctx->q();
  const std::uint64_t lim = floor_u64(X);
  const cplx s(sigma, t);
  cplx acc = 0.0;
  for_each_prime(2, lim, [&](std::uint64_t p) {
    if (p == q) return;
    const cplx base = chi(p) * std::exp(-s * std::log(static_cast<double>(p)));
    cplx term = base;
    std::uint64_t pk = p;
    for (int k = 1;; ++k) {
      acc += term / static_cast<double>(k);
      if (pk > lim / p) break;
      pk *= p;
      term *= base;
    }
  });
  return acc;
}

cplx gauss_sum(const Character& chi) {
  if (chi.ctx == nullptr) throw std::invalid_argument("gauss_sum: unbound character");
  const std::uint64_t q = chi.ctx->q();
  cplx acc = 0.0;
  for (std::uint64_t n = 1; n < q; ++n)
    acc += chi(n) * std::polar(1.0, 2.0 * kPi * static_cast<double>(n) / static_cast<double>(q));
  return acc;
}

// ---------------------------------------------------------------------------
// approximate functional equation

namespace {

cplx log_gamma_factor(cplx s, int kappa) {
  return -0.5 * s * std::log(kPi) + log_gamma(0.5 * (s + static_cast<double>(kappa)));
}

void validate(const AfeConfig& cfg) {
  if (cfg.A < 2) throw std::invalid_argument("AfeConfig: A must be >= 2");
  if (!(cfg.series_cutoff >= 1.0)) throw std::invalid_argument("AfeConfig: series_cutoff must be >= 1");
  if (!(cfg.contour_height > 0.0) || !(cfg.step > 0.0))
    throw std::invalid_argument("AfeConfig: contour height and step must be positive");
}

constexpr double kWeightTolerance = 1e-9;

}  // namespace

AfeWeight::AfeWeight(cplx s, int parity, const AfeConfig& cfg) : s_(s), parity_(parity), cfg_(cfg) {
  validate(cfg_);
  right_ = make_line(3.0);
  left_ = make_line(-0.25);
}

AfeWeight::Line AfeWeight::make_line(double c) const {
  Line line;
  line.c = c;
  const auto M = static_cast<long>(std::ceil(cfg_.contour_height / cfg_.step / 2.0)) * 2;
  const double h = cfg_.contour_height / static_cast<double>(M);
  const cplx base = log_gamma_factor(s_, parity_);
  const double Ad = cfg_.A;
  line.v.reserve(2 * M + 1);
  line.kernel.reserve(2 * M + 1);
  for (long j = -M; j <= M; ++j) {
    const double v = h * static_cast<double>(j);
    const cplx u(c, v);
    const cplx G = std::pow(std::cos(kPi * u / (4.0 * Ad)), -4.0 * Ad);
    const cplx ratio = std::exp(log_gamma_factor(s_ + u, parity_) - base);
    line.v.push_back(v);
    line.kernel.push_back(G * ratio / u);
  }
  // |G| decays like exp(-pi |v|); the part beyond the cut is at most the end value over (pi - 1/2)
  line.tail = (std::abs(line.kernel.front()) + std::abs(line.kernel.back())) / (2.0 * kPi * (kPi - 0.5));
  return line;
}

cplx AfeWeight::integrate(const Line& line, double logy, int stride) {
  const std::size_t n = line.v.size();
  const double h = (line.v[1] - line.v[0]) * stride;
  const cplx rot = std::polar(1.0, -h * logy);
  cplx phase;
  cplx acc = 0.0;
  std::size_t step_count = 0;
  for (std::size_t j = 0; j < n; j += static_cast<std::size_t>(stride), ++step_count) {
    if (step_count % 128 == 0)
      phase = std::polar(1.0, -line.v[j] * logy);
    else
      phase *= rot;
    const double w = (j == 0 || j + static_cast<std::size_t>(stride) >= n) ? 0.5 : 1.0;
    acc += w * line.kernel[j] * phase;
  }
  return acc * h / (2.0 * kPi) * std::exp(-line.c * logy);
}

SeriesValue AfeWeight::operator()(double y) const {
  if (!(y > 0.0)) throw std::invalid_argument("AfeWeight: y must be positive");
  const double logy = std::log(y);
  const Line& line = y >= 1.0 ? right_ : left_;
  const cplx fine = integrate(line, logy, 1);
  const cplx coarse = integrate(line, logy, 2);
  const double err = std::abs(fine - coarse) + line.tail * std::exp(-line.c * logy);
  if (!(err <= kWeightTolerance))
    throw PrecisionError("AfeWeight: quadrature did not converge at y = " + std::to_string(y));
  const cplx residue = line.c < 0.0 ? cplx(1.0) : cplx(0.0);
  return {fine + residue, err};
}

AfeEvaluator::AfeEvaluator(const ModulusContext& ctx, double t, int parity, const AfeConfig& cfg)
    : ctx_(&ctx), t_(t), parity_(parity) {
  if (std::abs(t) > 10.0) throw std::invalid_argument("afe: |t| must not exceed 10");
  validate(cfg);
  const auto qd = static_cast<double>(ctx.q());
  const double rq = std::sqrt(qd);
  const cplx s(0.5, t);
  const cplx s1 = 1.0 - s;

  const AfeWeight V1(s, parity, cfg);
  const AfeWeight V2(s1, parity, cfg);

  const auto N = static_cast<std::uint64_t>(std::floor(cfg.series_cutoff * rq));
  c1_.resize(N);
  c2_.resize(N);
  for (std::uint64_t n = 1; n <= N; ++n) {
    const double y = static_cast<double>(n) / rq;
    const double logn = std::log(static_cast<double>(n));
    const auto w1 = V1(y);
    const auto w2 = t == 0.0 ? w1 : V2(y);
    const double mag = std::exp(-0.5 * logn);
    c1_[n - 1] = std::exp(-s * logn) * w1.value;
    c2_[n - 1] = std::exp(-s1 * logn) * w2.value;
    err1_ += mag * w1.est_error;
    err2_ += mag * w2.est_error;
  }

  // tail past N with the t-free decay shape (1 + y)^{-A}
  const double yN = static_cast<double>(N) / rq;
  const double shape = std::pow((1.0 + yN) / yN, cfg.A) * std::sqrt(static_cast<double>(N)) / (cfg.A - 0.5);
  err1_ += std::abs(V1(yN).value) * shape;
  err2_ += std::abs(V2(yN).value) * shape;

  gamma_ratio_ = std::exp((0.5 - s) * std::log(qd) + log_gamma_factor(s1, parity) - log_gamma_factor(s, parity));
}

cplx AfeEvaluator::root_number(const Character& chi) const {
  const cplx ik = parity_ == 0 ? cplx(1.0) : cplx(0.0, 1.0);
  return gauss_sum(chi) / (ik * std::sqrt(static_cast<double>(ctx_->q()))) * gamma_ratio_;
}

LValue AfeEvaluator::evaluate(const Character& chi) const {
  same_modulus(*ctx_, chi);
  if (chi.is_principal()) throw std::invalid_argument("afe: needs a non-principal character");
  if (chi.parity() != parity_) throw std::invalid_argument("afe: character parity does not match the table");
  const std::uint64_t q = ctx_->q();
  const std::uint64_t n_ord = ctx_->order();
  cplx sum1 = 0.0, sum2 = 0.0;
  for (std::uint64_t n = 1; n <= c1_.size(); ++n) {
    const std::uint64_t r = n % q;
    if (r == 0) continue;
    const std::uint64_t k = chi.e * ctx_->ind(r) % n_ord;
    const cplx& z = ctx_->root(k);
    sum1 += z * c1_[n - 1];
    sum2 += std::conj(z) * c2_[n - 1];
  }
  const cplx eps_s = root_number(chi);
  LValue out;
  out.s = cplx(0.5, t_);
  out.value = sum1 + eps_s * sum2;
  out.method = LMethod::afe;
  out.est_error = err1_ + std::abs(eps_s) * err2_ +
                  16.0 * kEps * static_cast<double>(c1_.size()) * (1.0 + std::abs(out.value));
  return out;
}

LValue afe_eval_half(const Character& chi, double t, const AfeConfig& cfg) {
  if (chi.ctx == nullptr) throw std::invalid_argument("afe_eval_half: unbound character");
  if (chi.is_principal()) throw std::invalid_argument("afe_eval_half: needs a non-principal character");
  return AfeEvaluator(*chi.ctx, t, chi.parity(), cfg).evaluate(chi);
}

std::vector<std::int64_t> mollifier_coeffs(std::uint64_t X, std::uint64_t N) {
  if (X < 1 || N < 1) throw std::invalid_argument("mollifier_coeffs: needs X >= 1 and N >= 1");
  std::vector<std::int64_t> a(N + 1, 0);
  const std::uint64_t D = std::min(X, N);
  const auto mu = mobius_table(D);
  for (std::uint64_t d = 1; d <= D; ++d) {
    if (mu[d] == 0) continue;
    for (std::uint64_t n = d; n <= N; n += d) a[n] += mu[d];
  }
  return a;
}

cplx mollifier_poly(const Character& chi, cplx s, std::uint64_t X) {
  if (chi.ctx == nullptr) throw std::invalid_argument("mollifier_poly: unbound character");
  if (X < 1) throw std::invalid_argument("mollifier_poly: needs X >= 1");
  const auto mu = mobius_table(X);
  cplx acc = 0.0;
  for (std::uint64_t n = 1; n <= X; ++n) {
    if (mu[n] == 0) continue;
    acc += static_cast<double>(mu[n]) * chi(n) * std::exp(-s * std::log(static_cast<double>(n)));
  }
  return acc;
}

}  // namespace charlab
