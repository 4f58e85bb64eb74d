#pragma once

#include <cstdint>
#include <vector>

#include "charlab/characters.hpp"
#include "charlab/modarith.hpp"
#include "charlab/special.hpp"

namespace charlab {

enum class LMethod { oracle, euler_product, afe, prime_sum };

const char* to_string(LMethod m);

struct LValue {
  cplx s;
  cplx value;
  LMethod method = LMethod::oracle;
  double est_error = 0.0;
};

/// Absolute accuracy the oracle guarantees for q <= 1e4 (otherwise it throws).
inline constexpr double kOracleTarget = 1e-10;

/// The vector h_a = zeta(s, a/q), a = 1..q-1, shared by every character mod q
/// at a fixed s. At s = 1 it holds -psi(a/q) instead, which gives L(1, chi)
/// for non-principal chi because sum_a chi(a) = 0 removes the pole.
class HurwitzRow {
 public:
  HurwitzRow(const ModulusContext& ctx, cplx s);

  cplx s() const { return s_; }
  const ModulusContext& context() const { return *ctx_; }
  /// L(s, chi) = q^{-s} sum_a chi(a) h_a.
  LValue evaluate(const Character& chi) const;

 private:
  const ModulusContext* ctx_;
  cplx s_;
  bool at_one_ = false;
  std::vector<cplx> by_index_;  // h at a = g^k, indexed by k
  double err_sum_ = 0.0;
  double mag_sum_ = 0.0;
};

/// L(s, chi) through the Hurwitz decomposition. Rejects s = 1 for chi_0 and
/// throws PrecisionError when the error budget is exceeded.
LValue l_oracle(const Character& chi, cplx s);

/// prod_{p <= X, p != q} (1 - chi(p) p^{-sigma})^{-1}, multiplied in prime order.
LValue finite_euler_product(const Character& chi, double X, double sigma = 1.0);

/// Batch version of finite_euler_product for many characters of one modulus:
/// small primes are kept individually, larger ones are folded into per-residue
/// power sums of the log series.
class EulerProductTable {
 public:
  EulerProductTable(const ModulusContext& ctx, double X, double sigma = 1.0);

  cplx log_value(const Character& chi) const;
  LValue value(const Character& chi) const;
  double cutoff() const { return X_; }

 private:
  const ModulusContext* ctx_;
  double X_, sigma_;
  double tail_bound_ = 0.0;  // dropped log-series powers j > 6
  std::vector<std::pair<std::uint64_t, double>> small_;  // (ind(p), p^{-sigma})
  std::vector<std::vector<double>> folded_;  // folded_[j-1][k] = sum_{ind p = k} p^{-j sigma} / j
};

/// S_chi(sigma, X) = sum_{p <= X, p != q} chi(p) p^{-sigma}.
cplx prime_sum_S(const Character& chi, double sigma, double X);

/// Residue-folded prime sums for many characters: sum_k chi(g^k) P_k.
class PrimeSumTable {
 public:
  PrimeSumTable(const ModulusContext& ctx, double sigma, double X, double X_low = 1.0);
  /// sum over X_low < p <= X, p != q
  cplx value(const Character& chi) const;
  /// Per-index totals: folded()[k] = sum of p^{-sigma} over primes with ind(p) = k.
  const std::vector<double>& folded() const { return folded_; }

 private:
  const ModulusContext* ctx_;
  std::vector<double> folded_;  // indexed by ind(p)
};

/// sum_{2 <= n <= X} Lambda(n) chi(n) / (n^{sigma+it} log n).
cplx lambda_sum(const Character& chi, double sigma, double t, double X);

/// tau(chi) = sum_{n=1}^{q-1} chi(n) e^{2 pi i n / q}.
cplx gauss_sum(const Character& chi);

/// Smoothed approximate functional equation at s = 1/2 + it with
/// G(u) = cos(pi u / 4A)^{-4A}.
struct AfeConfig {
  int A = 4;
  double contour_height = 40.0;  // |Im u| cutoff of the weight integral
  double series_cutoff = 100.0;  // series run to series_cutoff * sqrt(q)
  double step = 0.02;            // trapezoid step on the vertical line
};

/// The weight V_s(y) for gamma(s) = pi^{-s/2} Gamma((s + kappa)/2), computed on
/// the vertical line Re u = 3 for y >= 1 and on Re u = -1/4 (plus the residue
/// 1 at u = 0) for y < 1.
class AfeWeight {
 public:
  AfeWeight(cplx s, int parity, const AfeConfig& cfg);
  /// Value and quadrature error estimate (step-halving difference plus tail).
  SeriesValue operator()(double y) const;

 private:
  struct Line {
    double c = 0.0;
    std::vector<double> v;
    std::vector<cplx> kernel;  // G(u) gamma(s+u)/gamma(s)/u at u = c + iv
    double tail = 0.0;
  };
  Line make_line(double c) const;
  static cplx integrate(const Line& line, double logy, int stride);

  cplx s_;
  int parity_;
  AfeConfig cfg_;
  Line right_, left_;
};

/// The two AFE series at s = 1/2 + it with weights tabulated once for a
/// modulus and parity, so that every character of that parity costs O(cutoff sqrt q).
class AfeEvaluator {
 public:
  AfeEvaluator(const ModulusContext& ctx, double t, int parity, const AfeConfig& cfg = {});

  LValue evaluate(const Character& chi) const;
  /// The coefficients n^{-s} V_s(n / sqrt q) and n^{-(1-s)} V_{1-s}(n / sqrt q), n = 1..N.
  const std::vector<cplx>& first_coeffs() const { return c1_; }
  const std::vector<cplx>& second_coeffs() const { return c2_; }
  /// The root number factor eps(chi, s) multiplying the dual series.
  cplx root_number(const Character& chi) const;

 private:
  const ModulusContext* ctx_;
  double t_;
  int parity_;
  std::vector<cplx> c1_, c2_;  // index n - 1
  double err1_ = 0.0, err2_ = 0.0;
  cplx gamma_ratio_;  // q^{1/2 - s} gamma(1 - s) / gamma(s)
};

LValue afe_eval_half(const Character& chi, double t, const AfeConfig& cfg = {});

/// a_n = sum_{d | n, d <= X} mu(d) for n = 1..N (entry 0 unused).
std::vector<std::int64_t> mollifier_coeffs(std::uint64_t X, std::uint64_t N);

/// M_X(s, chi) = sum_{n <= X} mu(n) chi(n) n^{-s}.
cplx mollifier_poly(const Character& chi, cplx s, std::uint64_t X);

}  // namespace charlab
