#pragma once

#include <complex>
#include <stdexcept>

namespace charlab {

using cplx = std::complex<double>;

/// Reported when a requested evaluation sits on a pole.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Reported when a numerical integral or series does not reach its target.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SeriesValue {
  cplx value;
  double est_error = 0.0;
};

/// Target absolute accuracy of hurwitz_zeta for moderate |s|.
inline constexpr double kHurwitzTarget = 1e-12;

/// zeta(s, a) = sum_{n>=0} (n+a)^{-s} by Euler-Maclaurin. The direct part is
/// shifted until n + a >= max(20, |s|); correction terms run through B_12 and
/// est_error is the standard remainder bound plus a rounding allowance.
SeriesValue hurwitz_zeta(cplx s, double a);

/// Principal branch-continuous log Gamma for Re z > 0 (Stirling after an
/// upward shift).
cplx log_gamma(cplx z);

/// psi(x) for x > 0.
double digamma(double x);

}  // namespace charlab
