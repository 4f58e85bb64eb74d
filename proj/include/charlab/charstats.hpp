#pragma once

#include <cstdint>
#include <vector>

#include "charlab/characters.hpp"
#include "charlab/modarith.hpp"
#include "charlab/zeros.hpp"

namespace charlab {

struct MeanValueReport {
  std::uint64_t A = 0;
  std::uint64_t N = 0;
  double M = 0.0;
  double K = 1.0;
  double envelope = 0.0;
  double ratio = 0.0;  // M / envelope
};

/// M = (1/A) sum_{chi in A} |sum_{n <= N} alpha_n chi(n)| with alpha[n-1] = alpha_n.
/// The envelope is K^{1/2}(N^{1/2} + N A^{-1/2} + A^{-3/8} N^{1/2} q^{1/4}).
MeanValueReport mean_value_M(const ModulusContext& ctx, const CharacterSet& A, std::uint64_t N,
                             const std::vector<cplx>& alpha);

struct HbReport {
  std::uint64_t R = 0;
  std::uint64_t N = 0;
  double value = 0.0;
  double envelope = 0.0;  // N^2 R + N R^2 + N R^{5/4} q^{1/2}
};

/// sum_{r, s} |sum_{n <= N} alpha_n chi_r(n) conj(chi_s(n))|^2 over distinct characters.
/// Inner sums depend only on e_r - e_s and are computed once per difference.
HbReport hb_double_sum(const ModulusContext& ctx, const std::vector<Character>& chars, std::uint64_t N,
                       const std::vector<cplx>& alpha);

struct ZeroDensityAggregate {
  double sigma = 0.0;
  double T = 0.0;
  std::vector<std::uint64_t> exponents;
  std::vector<std::int64_t> per_char;
  std::int64_t total = 0;
  double bound_envelope = 0.0;
  double min_margin = 0.0;
};

/// H^{(7-6s)/(6-4s)} for H >= q^{2/3}, else H^{(4-3s)/(6-4s)} q^{(1-s)/(3-2s)}.
double zero_density_envelope(double q, double H, double sigma);

ZeroDensityAggregate zero_density_aggregate(const ModulusContext& ctx, const CharacterSet& H, double sigma, double T);

/// f(a, Hlen, N): number of n in [1, N] with g^n = a + h (mod q) for some integer h in [1, Hlen].
std::uint64_t window_count_f(const ModulusContext& ctx, std::uint64_t a, std::uint64_t Hlen, std::uint64_t N);

/// f(a, Hlen, N) for a = 0..q-1 by a sliding window over the circular membership indicator.
std::vector<std::uint64_t> window_counts(const ModulusContext& ctx, std::uint64_t Hlen, std::uint64_t N);

struct VarianceReport {
  std::uint64_t q = 0, g = 0, N = 0, Hlen = 0;
  std::uint64_t sum_f = 0;
  std::uint64_t sum_f2 = 0;
  // V = numerator / q^2 with numerator = q sum f^2 - (Hlen N)^2
  std::int64_t numerator = 0;
  double V = 0.0;
  double reference = 0.0;  // Hlen N
};

VarianceReport variance_V(const ModulusContext& ctx, std::uint64_t Hlen, std::uint64_t N);

struct PairCorrelationReport {
  std::uint64_t q = 0, g = 0, N = 0, Hscale = 0;
  double alpha = 0.0, gamma = 0.0;
  std::uint64_t lo = 0, hi = 0;  // integer window (lo, hi] clipped to [1, q-1]
  bool degenerate = false;       // empty window
  std::uint64_t pairs = 0;
  double value = 0.0;  // pairs / N
};

PairCorrelationReport pair_correlation_R2(const ModulusContext& ctx, std::uint64_t N, std::uint64_t Hscale,
                                          double alpha_window, double gamma);

}  // namespace charlab
