#include "charlab/resonance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <queue>
#include <string>

namespace charlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRelTol = 1e-12;

std::vector<std::uint64_t> primes_up_to(double x) {
  if (!(x >= 2.0)) return {};
  return sieve_primes(static_cast<std::uint64_t>(std::floor(x))).primes;
}

// B_k = resonator mass on the residue g^k (coefficients coprime to q only)
std::vector<double> mass_by_index(const ModulusContext& ctx, const Resonator& R) {
  std::vector<double> B(ctx.order(), 0.0);
  const std::uint64_t q = ctx.q();
  if (R.mode == ResonatorMode::thm13) {
    for (const auto& [m, c] : R.counts)
      if (m % q != 0) B[ctx.ind(m)] += std::sqrt(static_cast<double>(c));
    return B;
  }
  for (std::uint64_t n = 1; n <= R.cutoff; ++n) {
    const double r = R.coeffs[n];
    if (r != 0.0 && n % q != 0) B[ctx.ind(n)] += r;
  }
  return B;
}

cplx twist(const ModulusContext& ctx, std::uint64_t e, const std::vector<double>& w) {
  const std::uint64_t n = ctx.order();
  std::uint64_t idx = 0;
  cplx acc = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] != 0.0) acc += ctx.root(idx) * w[k];
    idx += e;
    if (idx >= n) idx -= n;
  }
  return acc;
}

// R(chi) = prod (1 - r_p chi(p))^{-1} over the listed primes
cplx euler_resonator(const Character& chi, const std::vector<std::pair<std::uint64_t, double>>& weights) {
  cplx prod = 1.0;
  for (const auto& [p, r] : weights) prod /= 1.0 - r * chi(p);
  return prod;
}

void require_subgroup_order(const ModulusContext& ctx, std::uint64_t H) {
  if (H == 0 || ctx.order() % H != 0) throw std::invalid_argument("H must divide q - 1");
}

}  // namespace

const char* to_string(ResonatorMode m) {
  switch (m) {
    case ResonatorMode::thm11: return "thm11";
    case ResonatorMode::thm12: return "thm12";
    case ResonatorMode::thm13: return "thm13";
  }
  return "unknown";
}

const char* to_string(BSigmaForm f) { return f == BSigmaForm::theorem ? "theorem" : "proof"; }

double b_sigma(double sigma, BSigmaForm form) {
  if (!(sigma > 0.5 && sigma < 1.0)) throw std::invalid_argument("b_sigma: needs 1/2 < sigma < 1");
  const double num = form == BSigmaForm::theorem ? 8.0 * (1.0 - sigma) : 8.0;
  return num / (2.0 * sigma - 1.0);
}

double log1_floor(double z) { return std::max(2.0, std::log(z)); }
double log2_floor(double z) { return std::max(2.0, std::log(log1_floor(z))); }

double Resonator::r(std::uint64_t n) const {
  if (mode == ResonatorMode::thm13) throw std::logic_error("Resonator::r is defined for prime-weight modes");
  if (n > cutoff) throw std::out_of_range("Resonator::r beyond the materialized cutoff");
  return coeffs[n];
}

Resonator build_resonator(ResonatorMode mode, double param, std::uint64_t cutoff) {
  if (mode == ResonatorMode::thm13) throw std::invalid_argument("thm13 resonators come from build_set_M");
  if (!(param >= 2.0)) throw std::invalid_argument("resonator length must be at least 2");
  if (cutoff < 1) throw std::invalid_argument("resonator cutoff must be positive");
  if (cutoff > kMaxResonatorCutoff) throw std::length_error("resonator cutoff exceeds the supported maximum");

  Resonator R;
  R.mode = mode;
  R.param = param;
  R.cutoff = cutoff;
  const auto ps = primes_up_to(param);
  const std::uint64_t pmax = ps.empty() ? 1 : ps.back();
  std::vector<double> rp(pmax + 1, 0.0);
  R.full_mass = 1.0;
  for (auto p : ps) {
    const double w = mode == ResonatorMode::thm11 ? 1.0 - static_cast<double>(p) / param : 0.5;
    rp[p] = w;
    R.prime_weights.emplace_back(p, w);
    R.full_mass /= 1.0 - w;
  }

  // smallest prime factor sieve, then r_n = r_p r_{n/p}
  std::vector<std::uint32_t> spf(cutoff + 1, 0);
  for (std::uint64_t i = 2; i <= cutoff; ++i) {
    if (spf[i] != 0) continue;
    for (std::uint64_t j = i; j <= cutoff; j += i)
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
  }
  R.coeffs.assign(cutoff + 1, 0.0);
  R.coeffs[1] = 1.0;
  double kept = 1.0;
  R.support_bound = 1;
  for (std::uint64_t n = 2; n <= cutoff; ++n) {
    const std::uint64_t p = spf[n];
    if (p > pmax) continue;
    const double v = rp[p] * R.coeffs[n / p];
    R.coeffs[n] = v;
    if (v != 0.0) {
      kept += v;
      R.support_bound = n;
    }
  }
  R.tail_bound = std::max(0.0, R.full_mass - kept);
  return R;
}

cplx resonator_value(const ModulusContext& ctx, const Resonator& R, const Character& chi) {
  return twist(ctx, chi.e, mass_by_index(ctx, R));
}

double s2_kernel_form(const ModulusContext& ctx, std::uint64_t H, const Resonator& R) {
  require_subgroup_order(ctx, H);
  const std::uint64_t q = ctx.q();
  std::vector<double> B(q, 0.0);  // by residue
  const auto byk = mass_by_index(ctx, R);
  for (std::uint64_t k = 0; k < ctx.order(); ++k) B[ctx.power(k)] = byk[k];
  double acc = 0.0;
  for (auto h : kernel(ctx, H)) {
    double inner = 0.0;
    for (std::uint64_t a = 1; a < q; ++a)
      if (B[a] != 0.0) inner += B[a] * B[h * a % q];
    acc += inner;
  }
  return static_cast<double>(H) * acc;
}

double s2_character_form(const ModulusContext& ctx, std::uint64_t H, const Resonator& R) {
  require_subgroup_order(ctx, H);
  const auto B = mass_by_index(ctx, R);
  double acc = 0.0;
  for (auto e : subgroup(ctx, H).exponents) acc += std::norm(twist(ctx, e, B));
  return acc;
}

ResonanceConfig ResonanceConfig::resolved() const {
  ResonanceConfig c = *this;
  if (!(c.delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const double kappa_max = c.delta / ((1.0 + c.delta) * std::log(4.0));
  if (c.kappa <= 0.0) c.kappa = 0.9 * kappa_max;
  if (!(c.kappa < kappa_max)) throw std::invalid_argument("kappa must satisfy kappa < delta / ((1 + delta) log 4)");
  const double eta_max = ((1.0 + c.delta) * (1.0 - c.kappa * std::log(4.0)) - 1.0) / 6.0;
  if (!(eta_max > 0.0)) throw std::invalid_argument("no admissible eta for these delta and kappa");
  if (c.eta <= 0.0) c.eta = 0.5 * eta_max;
  if (!(c.eta < eta_max)) throw std::invalid_argument("eta must satisfy 1 + 6 eta < (1 + delta)(1 - kappa log 4)");
  if (!(c.c > 0.0)) throw std::invalid_argument("c must be positive");
  if (!(c.euler_cutoff >= 2.0) || c.resonator_cutoff < 1 || !(c.prime_cutoff >= 2.0))
    throw std::invalid_argument("cutoffs must be positive");
  return c;
}

double ResonanceConfig::B() const { return (1.0 + delta) * std::log(3.0) / delta; }

ResonanceReport resonance_sigma1(const ModulusContext& ctx, std::uint64_t H, const ResonanceConfig& cfg_in,
                                 const EulerProductTable* table) {
  require_subgroup_order(ctx, H);
  const auto cfg = cfg_in.resolved();
  const double lH = log1_floor(static_cast<double>(H));
  const double llH = log2_floor(static_cast<double>(H));
  double X = cfg.kappa * lH * llH;
  if (cfg.length_override > 0.0) {
    if (!(cfg.length_override >= 2.0)) throw std::invalid_argument("resonator length override must be >= 2");
    X = cfg.length_override;
  } else if (X < 3.0) {
    throw SubgroupTooSmall("resonator length X = " + std::to_string(X) + " < 3 for H = " + std::to_string(H));
  }

  std::optional<EulerProductTable> local;
  if (table == nullptr) {
    local.emplace(ctx, cfg.euler_cutoff, 1.0);
    table = &*local;
  } else if (table->cutoff() != cfg.euler_cutoff) {
    throw std::invalid_argument("Euler product table cutoff differs from the configured X_2");
  }

  std::vector<std::pair<std::uint64_t, double>> weights;
  double bound = 1.0;
  for (auto p : primes_up_to(X)) {
    if (p == ctx.q()) continue;
    const double r = 1.0 - static_cast<double>(p) / X;
    weights.emplace_back(p, r);
    bound /= 1.0 - r / static_cast<double>(p);
  }

  ResonanceReport rep;
  rep.mode = ResonatorMode::thm11;
  rep.q = ctx.q();
  rep.H = H;
  rep.param = X;
  rep.lower_bound = bound;
  double est = 0.0;
  double best = -1.0;
  const auto set = subgroup(ctx, H);
  rep.size = set.size();
  for (auto e : set.exponents) {
    const Character chi(ctx, e);
    const auto L = table->value(chi);
    const double w = std::norm(euler_resonator(chi, weights));
    rep.S1 += L.value * w;
    rep.S2 += w;
    est += L.est_error * w;
    if (chi.is_principal()) {
      rep.chi0_term = std::abs(L.value) * w;
    } else if (std::abs(L.value) > best) {
      best = std::abs(L.value);
      rep.witness_e = e;
    }
  }
  rep.ratio = std::abs(rep.S1) / rep.S2;
  rep.witness_value = std::max(best, 0.0);
  rep.truncation_error = rep.ratio * std::expm1(2.0 / cfg.euler_cutoff) + est / rep.S2 + kRelTol * rep.ratio;
  rep.bound_ok = rep.ratio >= rep.lower_bound - rep.truncation_error;
  rep.max_ok = best >= 0.0 && rep.witness_value >= rep.ratio - rep.truncation_error;

  const auto R = build_resonator(ResonatorMode::thm11, X, cfg.resonator_cutoff);
  const double s2k = s2_kernel_form(ctx, H, R);
  const double s2c = s2_character_form(ctx, H, R);
  const double dual = std::abs(s2k - s2c) / std::max(s2k, s2c);
  rep.verified = rep.bound_ok && rep.max_ok && dual <= 1e-8;

  rep.extras = {{"kappa", cfg.kappa},
                {"delta", cfg.delta},
                {"eta", cfg.eta},
                {"log1_H", lH},
                {"log2_H", llH},
                {"euler_cutoff", cfg.euler_cutoff},
                {"chi0_L", table->value(Character(ctx, 0)).value.real()},
                {"s2_kernel", s2k},
                {"s2_character", s2c},
                {"s2_dual_rel_diff", dual},
                {"resonator_cutoff", static_cast<double>(cfg.resonator_cutoff)},
                {"resonator_tail", R.tail_bound}};
  return rep;
}

ResonanceReport resonance_sigma_interior(const ModulusContext& ctx, std::uint64_t H, const ResonanceConfig& cfg_in,
                                         const PrimeSumTable* table, const HurwitzRow* row) {
  require_subgroup_order(ctx, H);
  const auto cfg = cfg_in.resolved();
  const double sigma = cfg.sigma;
  if (!(sigma > 0.5 && sigma < 1.0)) throw std::invalid_argument("sigma must lie in (1/2, 1)");
  const double lH = log1_floor(static_cast<double>(H));
  const double llH = log2_floor(static_cast<double>(H));
  double Y = 0.5 * cfg.kappa * lH * llH;
  if (cfg.length_override > 0.0) {
    if (!(cfg.length_override >= 2.0)) throw std::invalid_argument("resonator length override must be >= 2");
    Y = cfg.length_override;
  } else if (Y < 2.0) {
    throw SubgroupTooSmall("resonator length Y = " + std::to_string(Y) + " < 2 for H = " + std::to_string(H));
  }

  std::optional<PrimeSumTable> local_table;
  if (table == nullptr) {
    local_table.emplace(ctx, sigma, cfg.prime_cutoff);
    table = &*local_table;
  }
  std::optional<HurwitzRow> local_row;
  if (row == nullptr) {
    local_row.emplace(ctx, cplx(sigma, 0.0));
    row = &*local_row;
  } else if (row->s() != cplx(sigma, 0.0)) {
    throw std::invalid_argument("Hurwitz row is not at s = sigma");
  }

  std::vector<std::pair<std::uint64_t, double>> weights;
  double bound = 0.0;
  for (auto p : primes_up_to(Y)) {
    if (p == ctx.q()) continue;
    weights.emplace_back(p, 0.5);
    if (static_cast<double>(p) <= cfg.prime_cutoff) bound += 0.5 * std::pow(static_cast<double>(p), -sigma);
  }

  ResonanceReport rep;
  rep.mode = ResonatorMode::thm12;
  rep.q = ctx.q();
  rep.H = H;
  rep.param = Y;
  rep.lower_bound = bound;
  double best = -1.0, best_logL = -std::numeric_limits<double>::infinity(), witness_logL = 0.0;
  const auto set = subgroup(ctx, H);
  rep.size = set.size();
  for (auto e : set.exponents) {
    const Character chi(ctx, e);
    const cplx S = table->value(chi);
    const double w = std::norm(euler_resonator(chi, weights));
    rep.S1 += S * w;
    rep.S2 += w;
    if (chi.is_principal()) {
      rep.chi0_term = std::abs(S) * w;
      continue;
    }
    const double logL = std::log(std::abs(row->evaluate(chi).value));
    best_logL = std::max(best_logL, logL);
    if (std::abs(S) > best) {
      best = std::abs(S);
      rep.witness_e = e;
      witness_logL = logL;
    }
  }
  rep.ratio = std::abs(rep.S1) / rep.S2;
  rep.witness_value = std::max(best, 0.0);
  rep.truncation_error = kRelTol * (rep.ratio + rep.lower_bound);
  rep.bound_ok = rep.ratio >= rep.lower_bound - rep.truncation_error;
  const Character chi0(ctx, 0);
  const double rest = std::abs(rep.S1 - table->value(chi0) * std::norm(euler_resonator(chi0, weights))) / rep.S2;
  rep.max_ok = best >= 0.0 && rep.witness_value >= rest - rep.truncation_error;

  const auto R = build_resonator(ResonatorMode::thm12, Y, cfg.resonator_cutoff);
  const double s2k = s2_kernel_form(ctx, H, R);
  const double s2c = s2_character_form(ctx, H, R);
  const double dual = std::abs(s2k - s2c) / std::max(s2k, s2c);
  rep.verified = rep.bound_ok && rep.max_ok && dual <= 1e-8;

  const double b = b_sigma(sigma, cfg.b_form);
  const double lq = log1_floor(static_cast<double>(ctx.q()));
  rep.extras = {{"sigma", sigma},
                {"kappa", cfg.kappa},
                {"delta", cfg.delta},
                {"prime_cutoff", cfg.prime_cutoff},
                {"b_sigma", b},
                {"grh_threshold", std::pow(lq, (1.0 + cfg.delta) * b)},
                {"unconditional_threshold",
                 std::pow(static_cast<double>(ctx.q()), (2.0 - 2.0 * sigma) * (2.0 - sigma) + cfg.delta)},
                {"target_shape", std::pow(lH, 1.0 - sigma) * std::pow(llH, -sigma)},
                {"max_log_abs_L", best_logL},
                {"witness_log_abs_L", witness_logL},
                {"max_rest_ratio", rest},
                {"s2_kernel", s2k},
                {"s2_character", s2c},
                {"s2_dual_rel_diff", dual},
                {"resonator_tail", R.tail_bound}};
  return rep;
}

double set_M_prime_bound(double h, const BlockParams& bp) {
  const double l1 = log1_floor(h), l2 = log2_floor(h);
  return std::exp(std::pow(l2, bp.gamma)) * l1 * l2;
}

Resonator build_set_M(std::uint64_t h, const BlockParams& bp, std::uint64_t q) {
  if (h < 1) throw std::invalid_argument("build_set_M: needs h >= 1");
  if (bp.per_block < 1 || !(bp.gamma > 0.0)) throw std::invalid_argument("build_set_M: bad block parameters");
  const double y = set_M_prime_bound(static_cast<double>(h), bp);

  std::vector<std::uint64_t> pool;
  std::map<int, std::uint64_t> taken;
  for (auto p : primes_up_to(y)) {
    const int block = std::bit_width(p - 1) - 1;
    if (taken[block] < bp.per_block) {
      ++taken[block];
      pool.push_back(p);
    }
  }

  // squarefree products of the pool in increasing order: each node extends
  // its product by pool primes with a larger index
  using Node = std::pair<std::uint64_t, std::size_t>;  // (product, next index)
  std::priority_queue<Node, std::vector<Node>, std::greater<>> heap;
  heap.emplace(1, 0);
  Resonator R;
  R.mode = ResonatorMode::thm13;
  R.param = static_cast<double>(h);
  while (!heap.empty() && R.M.size() < h) {
    const auto [x, next] = heap.top();
    heap.pop();
    R.M.push_back(x);
    for (std::size_t j = next; j < pool.size(); ++j) {
      if (x > std::numeric_limits<std::uint64_t>::max() / 2 / pool[j]) break;
      heap.emplace(x * pool[j], j + 1);
    }
  }
  if (R.M.empty()) throw std::runtime_error("build_set_M: empty construction");
  for (auto n : R.M) ++R.counts[n % q];
  R.support_bound = R.M.back();
  R.prime_weights.reserve(pool.size());
  for (auto p : pool) R.prime_weights.emplace_back(p, 1.0);
  return R;
}

ResonanceReport resonance_half_line(const ModulusContext& ctx, std::uint64_t H, std::uint64_t h, const BlockParams& bp,
                                    const HurwitzRow* row) {
  require_subgroup_order(ctx, H);
  if (H % 2 != 0) throw std::invalid_argument("resonance_half_line: H must be even");
  const std::uint64_t q = ctx.q();
  if (h == 0) h = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(H / std::sqrt(static_cast<double>(q)))));
  if (h > q) throw std::invalid_argument("resonance_half_line: h must not exceed q");

  std::optional<HurwitzRow> local_row;
  if (row == nullptr) {
    local_row.emplace(ctx, cplx(0.5, 0.0));
    row = &*local_row;
  } else if (row->s() != cplx(0.5, 0.0)) {
    throw std::invalid_argument("Hurwitz row is not at s = 1/2");
  }

  const auto R = build_set_M(h, bp, q);
  const auto B = mass_by_index(ctx, R);
  const auto plus = even_subgroup_plus(ctx, H);

  ResonanceReport rep;
  rep.mode = ResonatorMode::thm13;
  rep.q = q;
  rep.H = H;
  rep.size = plus.size();
  rep.param = static_cast<double>(h);
  double best = -1.0, est = 0.0, R0 = 0.0;
  for (auto e : plus.exponents) {
    const Character chi(ctx, e);
    const auto L = row->evaluate(chi);
    const double L2 = std::norm(L.value);
    const double w = std::norm(twist(ctx, e, B));
    rep.S1 += w;
    rep.S2 += L2 * w;
    est += (2.0 * std::abs(L.value) + L.est_error) * L.est_error * w;
    if (chi.is_principal()) {
      rep.chi0_term = L2 * w;
      R0 = w;
    } else if (L2 > best) {
      best = L2;
      rep.witness_e = e;
    }
  }
  const double S1 = rep.S1.real();
  rep.ratio = rep.S2 / S1;
  rep.lower_bound = (rep.S2 - rep.chi0_term) / S1;
  rep.witness_value = std::max(best, 0.0);
  rep.truncation_error = est / S1 + kRelTol * rep.ratio;
  rep.max_ok = best >= 0.0 && rep.witness_value >= rep.lower_bound - rep.truncation_error;

  std::uint64_t mass = 0;
  for (const auto& [m, c] : R.counts) mass += c;
  const double hd = static_cast<double>(h);
  const double R0_bound = static_cast<double>(std::min<std::uint64_t>(q - 1, h)) * hd;
  const double S1_bound = static_cast<double>(q - 1) * hd;
  const bool mass_ok = mass == R.M.size() && mass <= h;
  rep.bound_ok = mass_ok && R0 <= R0_bound * (1.0 + kRelTol) && S1 <= S1_bound * (1.0 + kRelTol);
  rep.verified = rep.bound_ok && rep.max_ok;
  rep.extras = {{"h", hd},
                {"M_size", static_cast<double>(R.M.size())},
                {"mass", static_cast<double>(mass)},
                {"y_M", set_M_prime_bound(hd, bp)},
                {"largest_M", static_cast<double>(R.M.back())},
                {"R0_sq", R0},
                {"R0_bound", R0_bound},
                {"S1_bound", S1_bound},
                {"block_gamma", bp.gamma},
                {"block_primes", static_cast<double>(bp.per_block)}};
  return rep;
}

double ProductAsymptotic::relative_deviation() const { return std::abs(exact - main_term) / main_term; }

ProductAsymptotic lemma_q2_product(double X) {
  if (!(X > 1.0)) throw std::invalid_argument("lemma_q2_product: needs X > 1");
  ProductAsymptotic out;
  out.main_term = (2.0 - std::log(4.0)) * X / std::log(X);
  double acc = 0.0;
  for_each_prime(2, static_cast<std::uint64_t>(std::floor(X)), [&](std::uint64_t p) {
    const double r = 1.0 - static_cast<double>(p) / X;
    acc -= std::log1p(-r * r);
  });
  out.exact = acc;
  return out;
}

ExceptionalSetReport exceptional_set(const ModulusContext& ctx, double c, double P1, double P2) {
  if (!(P1 >= 2.0 && P1 < P2)) throw std::invalid_argument("exceptional_set: needs 2 <= P1 < P2");
  if (P2 > 1e8) throw std::invalid_argument("exceptional_set: P2 above 1e8 is out of range");
  if (!(c > 0.0)) throw std::invalid_argument("exceptional_set: c must be positive");
  const auto qd = static_cast<double>(ctx.q());
  ExceptionalSetReport rep;
  rep.threshold = std::pow(log1_floor(qd), -c);
  rep.shape = std::pow(log1_floor(qd), 2.0 * c) * std::pow(log2_floor(qd), 3.0);

  const PrimeSumTable table(ctx, 1.0, P2, P1);
  std::vector<std::uint64_t> first;
  rep.magnitudes.resize(ctx.order());
  for (std::uint64_t e = 0; e < ctx.order(); ++e) {
    rep.magnitudes[e] = std::abs(table.value(Character(ctx, e)));
    if (rep.magnitudes[e] >= rep.threshold) first.push_back(e);
  }

  // second pass: every prime visited per character, Kahan-compensated
  std::vector<std::pair<std::uint64_t, double>> plist;
  for_each_prime(static_cast<std::uint64_t>(std::floor(P1)) + 1, static_cast<std::uint64_t>(std::floor(P2)),
                 [&](std::uint64_t p) {
                   if (p != ctx.q()) plist.emplace_back(ctx.ind(p), 1.0 / static_cast<double>(p));
                 });
  std::vector<std::uint64_t> second;
  for (std::uint64_t e = 0; e < ctx.order(); ++e) {
    double re = 0.0, ce_re = 0.0, im = 0.0, ce_im = 0.0;
    for (const auto& [k, w] : plist) {
      const cplx z = ctx.root(e * k) * w;
      const double yr = z.real() - ce_re;
      const double tr = re + yr;
      ce_re = (tr - re) - yr;
      re = tr;
      const double yi = z.imag() - ce_im;
      const double ti = im + yi;
      ce_im = (ti - im) - yi;
      im = ti;
    }
    if (std::hypot(re, im) >= rep.threshold) second.push_back(e);
  }
  rep.second_pass_agrees = first == second;
  rep.E = CharacterSet::from_exponents(ctx, first);
  return rep;
}

double gcd_lcm_correlation(const std::vector<std::uint64_t>& M, double theta) {
  if (M.empty()) throw std::invalid_argument("gcd_lcm_correlation: empty set");
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("gcd_lcm_correlation: theta must lie in (0, 1]");
  std::vector<double> logs(M.size());
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (M[i] == 0 || M[i] > (std::uint64_t{1} << 63)) throw std::invalid_argument("gcd_lcm_correlation: bad element");
    logs[i] = std::log(static_cast<double>(M[i]));
  }
  // (gcd / lcm) = gcd^2 / (i j)
  double off = 0.0;
  for (std::size_t i = 0; i < M.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < M.size(); ++j) {
      const double lg = std::log(static_cast<double>(std::gcd(M[i], M[j])));
      row += std::exp(theta * (2.0 * lg - logs[i] - logs[j]));
    }
    off += row;
  }
  return static_cast<double>(M.size()) + 2.0 * off;
}

namespace {

struct W0Line {
  double c = 0.0;
  double h = 0.0;
  std::vector<double> v;
  std::vector<cplx> kernel;
  double tail = 0.0;
};

W0Line make_w0_line(double c) {
  constexpr double height = 40.0;
  constexpr long M = 2000;  // step 0.02
  W0Line line;
  line.c = c;
  line.h = height / M;
  const cplx lg0 = 2.0 * log_gamma(0.25);
  for (long j = -M; j <= M; ++j) {
    const double v = line.h * static_cast<double>(j);
    const cplx u(c, v);
    line.v.push_back(v);
    line.kernel.push_back(std::exp(2.0 * log_gamma(0.25 + 0.5 * u) - lg0) / u);
  }
  // Gamma(1/4 + u/2)^2 decays like exp(-pi |v| / 2)
  line.tail = (std::abs(line.kernel.front()) + std::abs(line.kernel.back())) / (2.0 * kPi * (kPi / 2.0 - 0.25));
  return line;
}

cplx w0_integrate(const W0Line& line, double logx, int stride) {
  const std::size_t n = line.v.size();
  const double h = line.h * stride;
  const cplx rot = std::polar(1.0, -h * logx);
  cplx phase, acc = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < n; j += static_cast<std::size_t>(stride), ++count) {
    phase = count % 128 == 0 ? std::polar(1.0, -line.v[j] * logx) : phase * rot;
    const double w = (j == 0 || j + static_cast<std::size_t>(stride) >= n) ? 0.5 : 1.0;
    acc += w * line.kernel[j] * phase;
  }
  return acc * h / (2.0 * kPi) * std::exp(-line.c * logx);
}

const W0Line& w0_right() {
  static const W0Line line = make_w0_line(2.0);
  return line;
}
const W0Line& w0_left() {
  static const W0Line line = make_w0_line(-0.25);
  return line;
}

}  // namespace

SeriesValue w0_weight(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("w0_weight: needs x > 0");
  const double logx = std::log(x);
  const W0Line& line = x >= 1.0 ? w0_right() : w0_left();
  const cplx fine = w0_integrate(line, logx, 1);
  const cplx coarse = w0_integrate(line, logx, 2);
  const double err = std::abs(fine - coarse) + line.tail * std::exp(-line.c * logx);
  if (!(err <= 1e-10)) throw PrecisionError("w0_weight: quadrature did not converge at x = " + std::to_string(x));
  return {fine + (line.c < 0.0 ? 1.0 : 0.0), err};
}

double w0_moment_half(const Character& chi, double tail) {
  if (chi.ctx == nullptr) throw std::invalid_argument("w0_moment_half: unbound character");
  if (chi.is_principal() || !chi.is_even())
    throw std::invalid_argument("w0_moment_half: needs an even non-principal character");
  const auto qd = static_cast<double>(chi.ctx->q());
  double x_max = 1.0;
  while (std::abs(w0_weight(x_max).value) * (1.0 + x_max) > tail) x_max += 0.5;
  const auto M = static_cast<std::uint64_t>(std::ceil(x_max * qd / kPi));

  std::vector<cplx> chis(M + 1), conv(M + 1, 0.0);
  for (std::uint64_t n = 1; n <= M; ++n) chis[n] = chi(n);
  for (std::uint64_t k = 1; k <= M; ++k) {
    if (chis[k] == cplx(0.0)) continue;
    for (std::uint64_t l = 1; k * l <= M; ++l) conv[k * l] += chis[k] * std::conj(chis[l]);
  }
  double acc = 0.0;
  for (std::uint64_t m = 1; m <= M; ++m) {
    if (conv[m] == cplx(0.0)) continue;
    const double w = w0_weight(kPi * static_cast<double>(m) / qd).value.real();
    acc += w * conv[m].real() / std::sqrt(static_cast<double>(m));
  }
  return 2.0 * acc;
}

}  // namespace charlab
