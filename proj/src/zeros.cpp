#include "charlab/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace charlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRightEdge = 1.5;
constexpr double kPositiveLeftEdge = 0.02;
constexpr double kDipThreshold = 1e-7;
constexpr double kInitialStep = 0.05;
constexpr int kMaxNudges = 4;
constexpr int kMaxDepth = 40;

struct ContourDip {};

double arg_ratio(cplx a, cplx b) { return std::arg(a / b); }

// a zero or the pole of L(s, chi_0) sits on or right next to the contour
bool off_contour(cplx L) {
  const double m = std::abs(L);
  return m < kDipThreshold || m > 1.0 / kDipThreshold;
}

}  // namespace

ZeroCounter::ZeroCounter(const ModulusContext& ctx) : ctx_(&ctx) {}

cplx ZeroCounter::eval(const Character& chi, cplx s) {
  const auto key = std::make_pair(s.real(), s.imag());
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, std::make_shared<const HurwitzRow>(*ctx_, s)).first;
  try {
    return it->second->evaluate(chi).value;
  } catch (const PoleError&) {
    throw ContourDip{};
  }
}

double ZeroCounter::track(const Character& chi, cplx z0, cplx L0, cplx z1, cplx L1, double max_step, int depth,
                          double& margin, std::uint64_t& evals) {
  const cplx zm = 0.5 * (z0 + z1);
  const cplx Lm = eval(chi, zm);
  ++evals;
  margin = std::min(margin, std::abs(Lm));
  if (off_contour(Lm)) throw ContourDip{};
  const double a = arg_ratio(Lm, L0);
  const double b = arg_ratio(L1, Lm);
  const double limit = kPi / 4.0 * std::min(1.0, max_step / kInitialStep);
  if (std::abs(a) < limit && std::abs(b) < limit && std::abs(a + b - arg_ratio(L1, L0)) < 1e-9) return a + b;
  if (depth >= kMaxDepth) throw PrecisionError("zero counting: argument tracking did not settle");
  return track(chi, z0, L0, zm, Lm, max_step, depth + 1, margin, evals) +
         track(chi, zm, Lm, z1, L1, max_step, depth + 1, margin, evals);
}

ZeroCountReport ZeroCounter::attempt(const Character& chi, double sigma, double t_lo, double t_hi, double max_step) {
  const cplx corners[5] = {{sigma, t_lo}, {kRightEdge, t_lo}, {kRightEdge, t_hi}, {sigma, t_hi}, {sigma, t_lo}};
  ZeroCountReport rep;
  rep.sigma_used = sigma;
  rep.t_lo_used = t_lo;
  rep.t_hi_used = t_hi;
  rep.contour_margin = std::numeric_limits<double>::infinity();

  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[e], b = corners[e + 1];
    const auto pieces = static_cast<int>(std::ceil(std::abs(b - a) / max_step));
    cplx z_prev = a;
    cplx L_prev = eval(chi, z_prev);
    ++rep.evaluations;
    rep.contour_margin = std::min(rep.contour_margin, std::abs(L_prev));
    if (off_contour(L_prev)) throw ContourDip{};
    for (int j = 1; j <= pieces; ++j) {
      const cplx z = j == pieces ? b : a + (b - a) * (static_cast<double>(j) / pieces);
      const cplx L = eval(chi, z);
      ++rep.evaluations;
      rep.contour_margin = std::min(rep.contour_margin, std::abs(L));
      if (off_contour(L)) throw ContourDip{};
      total += track(chi, z_prev, L_prev, z, L, max_step, 0, rep.contour_margin, rep.evaluations);
      z_prev = z;
      L_prev = L;
    }
  }
  rep.winding = total / (2.0 * kPi);
  return rep;
}

ZeroCountReport ZeroCounter::count_band(const Character& chi, double sigma, double t_lo, double t_hi) {
  if (chi.ctx == nullptr || chi.ctx->q() != ctx_->q())
    throw std::invalid_argument("zero counting: character belongs to a different modulus");
  if (!(t_hi > t_lo)) throw std::invalid_argument("zero counting: needs t_lo < t_hi");
  if (!(sigma < kRightEdge)) throw std::invalid_argument("zero counting: sigma must be below 3/2");

  const double sigma0 = sigma <= 0.0 ? kPositiveLeftEdge : sigma;
  for (int nudge = 0; nudge <= kMaxNudges; ++nudge) {
    const double sig = sigma0 - 0.0037 * nudge;
    const double shift = 0.0041 * nudge;
    if (!(sig > 0.0)) break;
    try {
      double max_step = kInitialStep;
      for (int refine = 0; refine < 4; ++refine, max_step /= 2.0) {
        auto rep = attempt(chi, sig, t_lo + shift, t_hi + shift, max_step);
        const double k = std::round(rep.winding);
        if (std::abs(rep.winding - k) > 0.1) continue;
        rep.sigma = sigma;
        rep.T = std::max(std::abs(t_lo), std::abs(t_hi));
        rep.nudges = nudge;
        rep.count = static_cast<std::int64_t>(k);
        const bool pole_inside = chi.is_principal() && sig < 1.0 && rep.t_lo_used < 0.0 && rep.t_hi_used > 0.0;
        if (pole_inside) rep.count += 1;
        if (rep.count < 0) throw PrecisionError("zero counting: negative count");
        return rep;
      }
      throw PrecisionError("zero counting: winding number is not close to an integer");
    } catch (const ContourDip&) {
      continue;
    }
  }
  throw PrecisionError("zero counting: contour keeps passing through a zero");
}

ZeroCountReport ZeroCounter::count(const Character& chi, double sigma, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("zero counting: needs T > 0");
  auto rep = count_band(chi, sigma, -T, T);
  rep.T = T;
  return rep;
}

ZeroCountReport zero_count_rect(const Character& chi, double sigma, double T) {
  if (chi.ctx == nullptr) throw std::invalid_argument("zero_count_rect: unbound character");
  ZeroCounter counter(*chi.ctx);
  return counter.count(chi, sigma, T);
}

namespace {

// theta(t) = arg of (q/pi)^{(s+kappa)/2} Gamma((s+kappa)/2) at s = 1/2 + it
double theta(double q, int kappa, double t) {
  const cplx w = 0.5 * (cplx(0.5, t) + static_cast<double>(kappa));
  return (w * std::log(q / kPi) + log_gamma(w)).imag();
}

// eps(chi)^{-1/2}; for chi_0 the rotation of zeta is used instead
cplx inverse_root_sqrt(const Character& chi) {
  if (chi.is_principal()) return 1.0;
  const double q = static_cast<double>(chi.ctx->q());
  const cplx ik = chi.is_even() ? cplx(1.0) : cplx(0.0, 1.0);
  const cplx eps = gauss_sum(chi) / (ik * std::sqrt(q));
  return 1.0 / std::sqrt(eps);
}

double z_value(const Character& chi, const HurwitzRow& row, cplx inv_sqrt_eps) {
  const double t = row.s().imag();
  const cplx L = row.evaluate(chi).value;
  if (chi.is_principal()) {
    const double q = static_cast<double>(chi.ctx->q());
    const cplx zeta = L / (1.0 - std::exp(-row.s() * std::log(q)));
    return (std::polar(1.0, theta(1.0, 0, t)) * zeta).real();
  }
  const double q = static_cast<double>(chi.ctx->q());
  return (inv_sqrt_eps * std::polar(1.0, theta(q, chi.parity(), t)) * L).real();
}

}  // namespace

double hardy_z(const Character& chi, const HurwitzRow& row) {
  if (row.s().real() != 0.5) throw std::invalid_argument("hardy_z: row must lie on Re s = 1/2");
  return z_value(chi, row, inverse_root_sqrt(chi));
}

double hardy_z(const Character& chi, double t) {
  if (chi.ctx == nullptr) throw std::invalid_argument("hardy_z: unbound character");
  const HurwitzRow row(*chi.ctx, cplx(0.5, t));
  return hardy_z(chi, row);
}

std::vector<std::int64_t> critical_line_sign_changes(const ModulusContext& ctx, const std::vector<Character>& chars,
                                                     double T, double step) {
  if (!(T > 0.0) || !(step > 0.0)) throw std::invalid_argument("sign changes: needs T > 0 and step > 0");
  std::vector<cplx> rot;
  rot.reserve(chars.size());
  for (const auto& chi : chars) {
    if (chi.ctx == nullptr || chi.ctx->q() != ctx.q())
      throw std::invalid_argument("sign changes: character belongs to a different modulus");
    rot.push_back(inverse_root_sqrt(chi));
  }
  const auto M = static_cast<long>(std::ceil(2.0 * T / step));
  std::vector<std::int64_t> changes(chars.size(), 0);
  std::vector<int> last(chars.size(), 0);
  for (long j = 0; j <= M; ++j) {
    const double t = -T + 2.0 * T * static_cast<double>(j) / static_cast<double>(M);
    const HurwitzRow row(ctx, cplx(0.5, t));
    for (std::size_t i = 0; i < chars.size(); ++i) {
      const double z = z_value(chars[i], row, rot[i]);
      const int sg = z > 0.0 ? 1 : (z < 0.0 ? -1 : 0);
      if (sg == 0) continue;
      if (last[i] != 0 && sg != last[i]) ++changes[i];
      last[i] = sg;
    }
  }
  return changes;
}

}  // namespace charlab
