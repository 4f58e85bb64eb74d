#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "charlab/characters.hpp"
#include "charlab/lfun.hpp"
#include "charlab/modarith.hpp"

namespace charlab {

enum class ResonatorMode { thm11, thm12, thm13 };
const char* to_string(ResonatorMode m);

/// Thrown when the resonator length computed from H is below 3.
class SubgroupTooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Resonator {
  ResonatorMode mode = ResonatorMode::thm11;
  double param = 0.0;              // X (thm11), Y (thm12) or h (thm13)
  std::uint64_t cutoff = 0;        // coefficients materialized for n <= cutoff
  std::uint64_t support_bound = 0; // largest n <= cutoff with r_n != 0
  std::vector<std::pair<std::uint64_t, double>> prime_weights;  // (p, r_p), thm11 / thm12
  std::vector<double> coeffs;      // r_n, n = 0..cutoff (r_0 = 0), thm11 / thm12
  double full_mass = 0.0;          // sum over all n of r_n = prod (1 - r_p)^{-1}
  double tail_bound = 0.0;         // sum_{n > cutoff} r_n
  std::vector<std::uint64_t> M;    // thm13 set, ascending
  std::map<std::uint64_t, std::uint64_t> counts;  // thm13: residue m -> r(m)^2

  /// r_n (thm11 / thm12) for n <= cutoff.
  double r(std::uint64_t n) const;
};

inline constexpr std::uint64_t kMaxResonatorCutoff = 100000000;

/// thm11: r_p = 1 - p/X for p <= X. thm12: r_p = 1/2 for p <= param.
/// Coefficients are extended completely multiplicatively up to cutoff.
Resonator build_resonator(ResonatorMode mode, double param, std::uint64_t cutoff);

/// R(chi) = sum_m r(m) chi(m) from the truncated coefficients (or the residue
/// counts for thm13).
cplx resonator_value(const ModulusContext& ctx, const Resonator& R, const Character& chi);

/// S_2 = H sum_{h in Ker H} sum_a B(a) B(ha), B(a) = sum of r_n over n <= cutoff, n = a mod q.
double s2_kernel_form(const ModulusContext& ctx, std::uint64_t H, const Resonator& R);
/// S_2 = sum_{chi in H} |R(chi)|^2 with the same truncation.
double s2_character_form(const ModulusContext& ctx, std::uint64_t H, const Resonator& R);

enum class BSigmaForm { theorem, proof };
const char* to_string(BSigmaForm f);
/// 8(1 - sigma)/(2 sigma - 1) or 8/(2 sigma - 1).
double b_sigma(double sigma, BSigmaForm form);

struct ResonanceConfig {
  double delta = 1.0;
  double kappa = 0.0;  // <= 0 selects 0.9 delta / ((1 + delta) log 4)
  double eta = 0.0;    // <= 0 selects half of its admissible range
  double c = 1.0;
  double euler_cutoff = 1e6;                // X_2
  std::uint64_t resonator_cutoff = 100000;  // truncation for the dual S_2 evaluation
  double sigma = 0.75;                      // thm12
  double prime_cutoff = 1e5;                // X in S_chi(sigma, X), thm12
  BSigmaForm b_form = BSigmaForm::theorem;
  double length_override = 0.0;  // > 0 replaces the X or Y computed from H

  /// Defaults filled in and the parameter constraints checked.
  ResonanceConfig resolved() const;
  double B() const;  // (1 + delta) log 3 / delta
};

/// log_1 z = max(2, log z), log_2 z = max(2, log log_1 z).
double log1_floor(double z);
double log2_floor(double z);

struct ResonanceReport {
  ResonatorMode mode = ResonatorMode::thm11;
  std::uint64_t q = 0;
  std::uint64_t H = 0;     // order of the subgroup that was passed in
  std::uint64_t size = 0;  // characters in the target set
  double param = 0.0;      // X, Y or h
  cplx S1;
  double S2 = 0.0;
  double ratio = 0.0;        // |S1|/S2 (thm11, thm12) or S2/S1 (thm13)
  double lower_bound = 0.0;  // the value the ratio is compared with
  double chi0_term = 0.0;
  std::uint64_t witness_e = 0;
  double witness_value = 0.0;  // exhaustive max over the target set minus chi_0
  double truncation_error = 0.0;
  bool bound_ok = false;
  bool max_ok = false;
  bool verified = false;
  std::vector<std::pair<std::string, double>> extras;  // mode-specific values, fixed order
};

/// sigma = 1. S1 = sum L(1, chi; X_2) |R(chi)|^2 and S2 = sum |R(chi)|^2 with
/// R(chi) = prod_{p <= X} (1 - r_p chi(p))^{-1}. table may be shared across
/// subgroups of one modulus; it must have cutoff X_2.
ResonanceReport resonance_sigma1(const ModulusContext& ctx, std::uint64_t H, const ResonanceConfig& cfg,
                                 const EulerProductTable* table = nullptr);

/// 1/2 < sigma < 1 with S_chi(sigma, X) in place of log L(sigma, chi).
ResonanceReport resonance_sigma_interior(const ModulusContext& ctx, std::uint64_t H, const ResonanceConfig& cfg,
                                         const PrimeSumTable* table = nullptr, const HurwitzRow* row = nullptr);

struct BlockParams {
  double gamma = 0.5;         // exponent in exp((log_2 h)^gamma)
  std::uint64_t per_block = 2;  // primes taken from each dyadic block
};

/// y_M envelope exp((log_2 h)^gamma) log_1 h log_2 h.
double set_M_prime_bound(double h, const BlockParams& bp);

/// The h smallest squarefree products of the block primes (at most per_block
/// smallest primes from each dyadic block (2^j, 2^{j+1}] up to the envelope).
/// Returns the residue-count resonator for modulus q.
Resonator build_set_M(std::uint64_t h, const BlockParams& bp, std::uint64_t q);

/// s = 1/2 over H+ = the subgroup of order H/2, in the role-swapped naming:
/// S1 = sum |R|^2, S2 = sum |L(1/2, chi)|^2 |R|^2. h = 0 picks max(1, floor(H / sqrt q)).
ResonanceReport resonance_half_line(const ModulusContext& ctx, std::uint64_t H, std::uint64_t h,
                                    const BlockParams& bp = {}, const HurwitzRow* row = nullptr);

struct ProductAsymptotic {
  double exact = 0.0;      // sum_{p <= X} -log(1 - r_p^2), r_p = 1 - p/X
  double main_term = 0.0;  // (2 - log 4) X / log X
  double relative_deviation() const;
};

ProductAsymptotic lemma_q2_product(double X);

struct ExceptionalSetReport {
  CharacterSet E;
  double threshold = 0.0;  // (log q)^{-c}
  double shape = 0.0;      // (log q)^{2c} (log_2 q)^3
  std::vector<double> magnitudes;  // |sum_{P1 < p <= P2} chi(p)/p| by exponent
  bool second_pass_agrees = false;
};

/// E = {chi : |sum_{P1 < p <= P2, p != q} chi(p)/p| >= (log q)^{-c}} over all
/// characters mod q, computed by residue folding and again by a compensated
/// per-character pass.
ExceptionalSetReport exceptional_set(const ModulusContext& ctx, double c, double P1, double P2);

/// sum_{i, j in M} (gcd(i, j) / lcm(i, j))^theta.
double gcd_lcm_correlation(const std::vector<std::uint64_t>& M, double theta);

/// W_0(x) = (1/2 pi i) int Gamma(1/4 + s/2)^2 / (Gamma(1/4)^2 s) x^{-s} ds.
SeriesValue w0_weight(double x);

/// 2 sum_m W_0(pi m / q) m^{-1/2} sum_{kl = m} chi(k) conj(chi(l)) for an even
/// non-principal chi, truncated where W_0 drops below tail.
double w0_moment_half(const Character& chi, double tail = 1e-12);

}  // namespace charlab
