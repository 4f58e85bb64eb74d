#include "charlab/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace charlab {

namespace {

// B_{2k} / (2k)!, k = 1..6
constexpr std::array<double, 6> kEulerMaclaurin = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
};

// B_{2k} / (2k (2k-1)), k = 1..8
constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,         -1.0 / 360.0,        1.0 / 1260.0,      -1.0 / 1680.0,
    1.0 / 1188.0,       -691.0 / 360360.0,   1.0 / 156.0,       -3617.0 / 122400.0,
};

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

SeriesValue hurwitz_zeta(cplx s, double a) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("hurwitz_zeta: a must lie in (0, 1]");
  if (s == cplx(1.0, 0.0)) throw PoleError("hurwitz_zeta: pole at s = 1");

  const double threshold = std::max(20.0, std::abs(s));
  const auto N = static_cast<int>(std::ceil(threshold - a));

  cplx sum = 0.0;
  double mag = 0.0;
  for (int n = 0; n < N; ++n) {
    const cplx t = std::exp(-s * std::log(n + a));
    sum += t;
    mag += std::abs(t);
  }

  const double x = N + a;
  const double logx = std::log(x);
  const cplx base = std::exp(-s * logx);  // x^{-s}
  cplx tail = base * x / (s - 1.0) + 0.5 * base;
  mag += std::abs(tail);

  cplx poch = s;          // (s)_{2k-1}
  cplx power = base / x;  // x^{-s-2k+1}
  for (std::size_t k = 0; k < kEulerMaclaurin.size(); ++k) {
    if (k > 0) {
      const double m = 2.0 * static_cast<double>(k);
      poch *= (s + (m - 1.0)) * (s + m);
      power /= x * x;
    }
    const cplx term = kEulerMaclaurin[k] * poch * power;
    tail += term;
    mag += std::abs(term);
  }

  // remainder after six correction terms (M = 7):
  // 4 |(s)_{14}| / (2 pi)^{14} x^{-sigma-13} / (sigma + 13)
  cplx poch14 = 1.0;
  for (int j = 0; j < 14; ++j) poch14 *= s + static_cast<double>(j);
  const double sigma = s.real();
  const double remainder = 4.0 * std::abs(poch14) / std::pow(2.0 * std::numbers::pi, 14) *
                           std::exp((-sigma - 13.0) * logx) / std::abs(sigma + 13.0);

  return {sum + tail, remainder + 8.0 * kEps * mag * (N + 2)};
}

cplx log_gamma(cplx z) {
  if (z.real() <= 0.0) throw std::domain_error("log_gamma: needs Re z > 0");
  // summing the logs keeps the imaginary part continuous; log of the product would wrap
  cplx shift = 0.0;
  while (z.real() < 10.0 || std::abs(z) < 10.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx p = inv;
  for (double c : kStirling) {
    series += c * p;
    p *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + series - shift;
}

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: needs x > 0");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  const double series =
      inv2 * (-1.0 / 12.0 +
              inv2 * (1.0 / 120.0 +
                      inv2 * (-1.0 / 252.0 + inv2 * (1.0 / 240.0 + inv2 * (-1.0 / 132.0 + inv2 * 691.0 / 32760.0)))));
  return acc + std::log(x) - 0.5 / x + series;
}

}  // namespace charlab
