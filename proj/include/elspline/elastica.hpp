#pragma once

/**
 * @file   elastica.hpp
 * @brief  The rectangular elastica R(t) = sin t + i xi(t) and the scalar
 *         functions built on it: chord angles, energies, the Jacobian of the
 *         chord-angle map Q(t1, t2) = (alpha, beta), the factor W, the
 *         gamma-form functions, and the constants d, t*, t-bar, Psi.
 *
 * Everything here is a pure function; the constants are computed once on
 * first use and are immutable afterwards.
 */

#include <algorithm>
#include <cmath>
#include <string>

#include "elspline/error.hpp"
#include "elspline/geometry.hpp"
#include "elspline/quadrature.hpp"

namespace elspline {

/// Elastica parameters (t1, t2) identifying the segment R_[t1, t2].
struct ParamInterval {
  double t1 = 0.0;
  double t2 = 0.0;
};

/// Signed chord angles of a curve piece, each in (-pi, pi].
struct ChordAngles {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Entries of DQ = [[da/dt1, da/dt2], [db/dt1, db/dt2]].
struct JacobianDQ {
  double d_alpha_dt1 = 0.0;
  double d_alpha_dt2 = 0.0;
  double d_beta_dt1 = 0.0;
  double d_beta_dt2 = 0.0;

  [[nodiscard]] double det() const noexcept { return d_alpha_dt1 * d_beta_dt2 - d_alpha_dt2 * d_beta_dt1; }
};

struct ElasticaConstants {
  double d = 0.0;         ///< xi(pi), the rise over half a period.
  double t_star = 0.0;    ///< root of W(-t, t) in (pi/2, pi).
  double t_bar = 0.0;     ///< root of beta(0, t) = pi/2 in (0, t_star).
  double psi = 0.0;       ///< Psi = pi/2 - |alpha(0, t_bar)|.
  double psi_bar = 0.0;   ///< |alpha(0, t_bar)|.
};

struct TangentInfo {
  double direction = 0.0;  ///< arg R'(t) in [0, pi].
  double speed = 0.0;      ///< |R'(t)| in [1/sqrt 2, 1].
};

struct GammaForm {
  double gamma = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
  double G = 0.0;
  double sigma = 0.0;
  double q = 0.0;
};

namespace detail {

[[nodiscard]] inline double xi_rate(double t) noexcept {
  const double s = std::sin(t);
  const double s2 = s * s;
  return s2 / std::sqrt(1.0 + s2);
}

inline constexpr int kXiPanels = 8;

/// xi on the reduced range [0, pi].
[[nodiscard]] inline double xi_reduced(double r) { return quad::integrate(xi_rate, 0.0, r, kXiPanels); }

[[nodiscard]] inline double half_period_rise() {
  static const double d = xi_reduced(kPi);
  return d;
}

}  // namespace detail

/// xi(t) = int_0^t sin^2 / sqrt(1 + sin^2). Range-reduced with
/// xi(t + pi) = d + xi(t) and oddness, then composite Gauss-Legendre.
[[nodiscard]] inline double xi(double t) {
  if (t < 0.0) return -xi(-t);
  const double k = std::floor(t / kPi);
  const double r = std::clamp(t - k * kPi, 0.0, kPi);
  return k * detail::half_period_rise() + detail::xi_reduced(r);
}

/// xi(t2) - xi(t1) integrated directly over [t1, t2]; keeps full relative
/// accuracy for short segments where the difference of xi values would not.
[[nodiscard]] inline double xi_increment(double t1, double t2) {
  const double span = t2 - t1;
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(span) / (kPi / detail::kXiPanels))));
  return quad::integrate(detail::xi_rate, t1, t2, panels);
}

[[nodiscard]] inline Point elastica_point(double t) { return {std::sin(t), xi(t)}; }

[[nodiscard]] inline TangentInfo elastica_tangent(double t) noexcept {
  const double s = std::sin(t);
  const double root = std::sqrt(1.0 + s * s);
  return {std::atan2(s * s, std::cos(t) * root), 1.0 / root};
}

[[nodiscard]] inline double elastica_curvature(double t) noexcept { return 2.0 * std::sin(t); }

inline void validate(const ParamInterval& iv) {
  if (!std::isfinite(iv.t1) || !std::isfinite(iv.t2)) throw Error(ErrorCode::DomainError, "non-finite parameter");
  if (!(iv.t1 < iv.t2)) throw Error(ErrorCode::DomainError, "parameter interval requires t1 < t2");
  if (!(iv.t2 - iv.t1 < kTwoPi)) throw Error(ErrorCode::DomainError, "parameter interval must be shorter than 2*pi");
}

/// Chord data of R_[t1, t2]: dx = sin t2 - sin t1, dxi = xi(t2) - xi(t1), l = |R(t2) - R(t1)|.
struct SegmentGeometry {
  double dx = 0.0;
  double dxi = 0.0;
  double l = 0.0;
};

[[nodiscard]] inline SegmentGeometry segment_geometry(const ParamInterval& iv) {
  validate(iv);
  SegmentGeometry g;
  g.dx = 2.0 * std::cos(0.5 * (iv.t1 + iv.t2)) * std::sin(0.5 * (iv.t2 - iv.t1));
  g.dxi = xi_increment(iv.t1, iv.t2);
  g.l = std::hypot(g.dx, g.dxi);
  return g;
}

[[nodiscard]] inline ChordAngles chord_angles(const ParamInterval& iv) {
  const SegmentGeometry g = segment_geometry(iv);
  const double chord = std::atan2(g.dxi, g.dx);
  return {normalize_angle(elastica_tangent(iv.t1).direction - chord),
          normalize_angle(elastica_tangent(iv.t2).direction - chord)};
}

[[nodiscard]] inline double chord_length(const ParamInterval& iv) { return segment_geometry(iv).l; }

/// Bending energy of R_[t1, t2] (quarter-weighted), equal to xi(t2) - xi(t1).
[[nodiscard]] inline double segment_energy(const ParamInterval& iv) { return segment_geometry(iv).dxi; }

/// l * dxi: the bending energy after scaling the segment to unit breadth.
[[nodiscard]] inline double normalized_energy(const ParamInterval& iv) {
  const SegmentGeometry g = segment_geometry(iv);
  return g.l * g.dxi;
}

/**
 * @brief Partial derivatives of Q at (t1, t2).
 *
 * The sin(alpha), sin(beta) factors come from the cross products
 * l |R'(t1)| sin(alpha) = -cos t1 dxi + xi'(t1) dx (and likewise at t2), which
 * avoids differencing angles.
 */
[[nodiscard]] inline JacobianDQ jacobian_q(const ParamInterval& iv) {
  const SegmentGeometry g = segment_geometry(iv);
  const double l2 = g.l * g.l;
  const double speed1 = elastica_tangent(iv.t1).speed;
  const double speed2 = elastica_tangent(iv.t2).speed;
  // |R'(t)| sin(angle) / l
  const double sa = (-std::cos(iv.t1) * g.dxi + detail::xi_rate(iv.t1) * g.dx) / l2;
  const double sb = (-std::cos(iv.t2) * g.dxi + detail::xi_rate(iv.t2) * g.dx) / l2;
  JacobianDQ j;
  j.d_alpha_dt1 = sa + speed1 * elastica_curvature(iv.t1);
  j.d_beta_dt1 = sa;
  j.d_alpha_dt2 = -sb;
  j.d_beta_dt2 = -sb + speed2 * elastica_curvature(iv.t2);
  return j;
}

/// det(DQ) written out in terms of t1, t2 alone.
[[nodiscard]] inline double det_dq(const ParamInterval& iv) {
  const SegmentGeometry g = segment_geometry(iv);
  const double l2 = g.l * g.l;
  const double s1 = std::sin(iv.t1);
  const double s2 = std::sin(iv.t2);
  const double r1 = std::sqrt(1.0 + s1 * s1);
  const double r2 = std::sqrt(1.0 + s2 * s2);
  const double cross1 = -std::cos(iv.t1) * g.dxi + detail::xi_rate(iv.t1) * g.dx;
  const double cross2 = -std::cos(iv.t2) * g.dxi + detail::xi_rate(iv.t2) * g.dx;
  return 4.0 * s1 * s2 / (r1 * r2) + 2.0 * s2 / (l2 * r2) * cross1 - 2.0 * s1 / (l2 * r1) * cross2;
}

/// W(t1, t2); sign(det DQ) = sign(sin t1 sin t2 W). Undefined where sin t1 sin t2 = 0.
[[nodiscard]] inline double w_function(const ParamInterval& iv) {
  const double s1 = std::sin(iv.t1);
  const double s2 = std::sin(iv.t2);
  constexpr double kZeroSine = 1e-12;
  if (std::abs(s1) < kZeroSine || std::abs(s2) < kZeroSine)
    throw Error(ErrorCode::DomainError, "W is undefined where sin(t1) sin(t2) = 0; use det_dq");
  const SegmentGeometry g = segment_geometry(iv);
  return 2.0 * g.dxi + g.dx * g.dx / g.dxi + std::cos(iv.t2) * std::sqrt(1.0 + s2 * s2) / s2 -
         std::cos(iv.t1) * std::sqrt(1.0 + s1 * s1) / s1;
}

namespace detail {

/// Root of a continuous f on [lo, hi] with f(lo), f(hi) of opposite sign.
template <typename F>
[[nodiscard]] double bisect(F&& f, double lo, double hi, double tol, const char* what) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw Error(ErrorCode::NoConvergence, std::string("no sign change bracketing ") + what);
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

[[nodiscard]] inline ElasticaConstants compute_constants_uncached() {
  ElasticaConstants c;
  c.d = half_period_rise();
  constexpr double kEdge = 1e-6;
  constexpr double kRootTol = 1e-14;
  c.t_star = bisect([](double t) { return w_function({-t, t}); }, kHalfPi + kEdge, kPi - kEdge, kRootTol, "t*");
  c.t_bar = bisect([](double t) { return chord_angles({0.0, t}).beta - kHalfPi; }, 1e-3, c.t_star, kRootTol,
                   "t-bar");
  c.psi_bar = std::abs(chord_angles({0.0, c.t_bar}).alpha);
  c.psi = kHalfPi - c.psi_bar;
  return c;
}

}  // namespace detail

/// Recomputes the constants from scratch (roots by bisection).
[[nodiscard]] inline ElasticaConstants compute_constants() { return detail::compute_constants_uncached(); }

/// The process-wide immutable constants table.
[[nodiscard]] inline const ElasticaConstants& constants() {
  static const ElasticaConstants c = detail::compute_constants_uncached();
  return c;
}

// ---------------------------------------------------------------------------
// gamma-form functions (canonical chord angles, alpha >= |beta|)

namespace detail {

/// int_0^x sqrt(sin tau) dtau for x in [0, pi]. The square-root endpoint
/// behaviour at 0 is removed with tau = u^2; the one at pi by reflection.
[[nodiscard]] inline double sqrt_sin_integral(double x) {
  constexpr double kSplit = kPi / 4.0;
  constexpr int kPanels = 4;
  auto near_zero = [](double a) {
    return quad::integrate(
        [](double u) {
          const double s = std::sin(u * u);
          return 2.0 * u * std::sqrt(std::max(s, 0.0));
        },
        0.0, std::sqrt(a), kPanels);
  };
  auto regular = [](double a, double b) {
    return quad::integrate([](double t) { return std::sqrt(std::sin(t)); }, a, b, kPanels);
  };
  auto lower_half = [&](double a) { return a <= kSplit ? near_zero(a) : near_zero(kSplit) + regular(kSplit, a); };
  x = std::clamp(x, 0.0, kPi);
  if (x <= kHalfPi) return lower_half(x);
  return 2.0 * lower_half(kHalfPi) - lower_half(kPi - x);
}

[[nodiscard]] inline bool is_canonical(double alpha, double beta) noexcept {
  return alpha > 0.0 && alpha < kPi && std::abs(beta) <= alpha && beta > alpha - kPi;
}

}  // namespace detail

/// y1, y2, G, sigma, q at gamma for canonical (alpha, beta).
[[nodiscard]] inline GammaForm gamma_form(double alpha, double beta, double gamma) {
  if (!detail::is_canonical(alpha, beta))
    throw Error(ErrorCode::DomainError, "gamma form requires alpha in (0,pi), |beta| <= alpha, beta > alpha - pi");
  if (!(gamma >= alpha - kPi && gamma <= beta && gamma < 0.0))
    throw Error(ErrorCode::DomainError, "gamma outside [alpha - pi, beta] intersect (-inf, 0)");
  GammaForm f;
  f.gamma = gamma;
  f.y1 = 0.5 * detail::sqrt_sin_integral(alpha - gamma);
  f.y2 = 0.5 * detail::sqrt_sin_integral(beta - gamma);
  const double h = f.y1 + f.y2;
  const double sg = std::sin(gamma);
  f.G = h * h / -sg;
  // reflect about pi so the root vanishes at the endpoint
  auto sin_reflected = [](double u) { return u > kHalfPi ? std::sin(kPi - u) : std::sin(u); };
  const double roots = std::sqrt(std::max(sin_reflected(alpha - gamma), 0.0)) +
                       std::sqrt(std::max(sin_reflected(beta - gamma), 0.0));
  f.sigma = std::cos(gamma) + sg / h * roots;
  f.q = -sg / h;
  return f;
}

}  // namespace elspline
