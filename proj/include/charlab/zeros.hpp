#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "charlab/characters.hpp"
#include "charlab/lfun.hpp"

namespace charlab {

struct ZeroCountReport {
  double sigma = 0.0;  // requested left edge
  double T = 0.0;
  std::int64_t count = 0;
  double contour_margin = 0.0;  // min |L| along the contour that was used
  // the contour actually integrated after nudges
  double sigma_used = 0.0;
  double t_lo_used = 0.0;
  double t_hi_used = 0.0;
  int nudges = 0;
  std::uint64_t evaluations = 0;
  double winding = 0.0;  // raw accumulated argument / 2 pi
};

/// Counts zeros of L(s, chi) in [sigma, 3/2] x [t_lo, t_hi] by tracking the
/// argument of L continuously along the rectangle. Evaluations go through
/// Hurwitz rows that are cached per point and shared between characters of
/// the same modulus, so counting a whole character set revisits few points.
///
/// Left edges at sigma <= 0 are moved to Re s = 0.02 so the trivial zero at
/// s = 0 of even characters is not counted. When |L| gets too close to zero
/// on the contour the left edge moves left and both horizontal edges move up
/// by a small amount, then the count is retried.
class ZeroCounter {
 public:
  explicit ZeroCounter(const ModulusContext& ctx);

  ZeroCountReport count(const Character& chi, double sigma, double T);
  ZeroCountReport count_band(const Character& chi, double sigma, double t_lo, double t_hi);

  std::size_t cached_points() const { return cache_.size(); }
  void clear_cache() { cache_.clear(); }

 private:
  struct Point {
    cplx s;
    cplx L;
  };
  cplx eval(const Character& chi, cplx s);
  ZeroCountReport attempt(const Character& chi, double sigma, double t_lo, double t_hi, double max_step);
  double track(const Character& chi, cplx z0, cplx L0, cplx z1, cplx L1, double max_step, int depth,
               double& margin, std::uint64_t& evals);

  const ModulusContext* ctx_;
  std::map<std::pair<double, double>, std::shared_ptr<const HurwitzRow>> cache_;
};

ZeroCountReport zero_count_rect(const Character& chi, double sigma, double T);

/// The real rotation of L on the critical line,
/// Z(t) = Re( eps^{-1/2} e^{i theta(t)} L(1/2 + it) ), where theta(t) is the
/// argument of (q/pi)^{(s+kappa)/2} Gamma((s+kappa)/2).
double hardy_z(const Character& chi, double t);
double hardy_z(const Character& chi, const HurwitzRow& row);

/// Sign changes of Z on the grid -T, -T + step, ..., T for every character in
/// chars (which must share a modulus). Hurwitz rows are built once per grid point.
std::vector<std::int64_t> critical_line_sign_changes(const ModulusContext& ctx, const std::vector<Character>& chars,
                                                     double T, double step = 0.01);

}  // namespace charlab
