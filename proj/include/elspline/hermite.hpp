#pragma once

/**
 * @file   hermite.hpp
 * @brief  Two-point geometric Hermite problem: the optimal s-curve joining
 *         two unit tangents whose chord angles lie in [-pi/2, pi/2]^2.
 *
 * The optimal curve is a line segment at (0, 0), the u-turn R_[-pi,0] (or
 * R_[0,pi]) at the corners (pi/2, -pi/2) and (-pi/2, pi/2), and otherwise the
 * similarity image of R_[t1, t2] where (t1, t2) is the unique preimage of
 * (alpha, beta) under Q in the parameter region U = U0 u U1 u U2 u U3.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "elspline/elastica.hpp"
#include "elspline/error.hpp"
#include "elspline/geometry.hpp"

namespace elspline {

/// A unit tangent vector: a base point and a direction angle.
struct UnitTangent {
  Point base;
  double direction = 0.0;
};

enum class SCurveKind { LineSegment, ElasticaArc, UTurnArc };

[[nodiscard]] constexpr const char* to_string(SCurveKind kind) noexcept {
  switch (kind) {
    case SCurveKind::LineSegment: return "line";
    case SCurveKind::ElasticaArc: return "elastica";
    case SCurveKind::UTurnArc: return "uturn";
  }
  return "unknown";
}

enum class URegion { U0, U1, U2, U3 };

[[nodiscard]] constexpr const char* to_string(URegion r) noexcept {
  switch (r) {
    case URegion::U0: return "U0";
    case URegion::U1: return "U1";
    case URegion::U2: return "U2";
    case URegion::U3: return "U3";
  }
  return "?";
}

/**
 * @brief A concrete curve piece from `start` to `start + chord`.
 *
 * Arcs are the image of R_[t1, t2] under z -> translation + scale e^{i rotation} z.
 * Line segments have no params and are parametrised by s in [0, 1].
 */
struct SCurve {
  SCurveKind kind = SCurveKind::LineSegment;
  std::optional<ParamInterval> params;
  double scale = 1.0;
  double rotation = 0.0;
  Point translation;
  double breadth = 0.0;
  double energy = 0.0;
  double kappa_start = 0.0;
  double kappa_end = 0.0;
  ChordAngles angles;
  Point start;
  Point end;

  [[nodiscard]] double param_begin() const noexcept { return params ? params->t1 : 0.0; }
  [[nodiscard]] double param_end() const noexcept { return params ? params->t2 : 1.0; }

  [[nodiscard]] Point point_at(double t) const {
    if (!params) return start + t * (end - start);
    // Offsets from R(t1) keep the map well conditioned for long parameter runs.
    const Point offset{std::sin(t) - std::sin(params->t1), xi_increment(params->t1, t)};
    return start + rotate_scale(offset, rotation, scale);
  }

  [[nodiscard]] double tangent_direction_at(double t) const noexcept {
    if (!params) return normalize_angle(rotation);
    return normalize_angle(rotation + elastica_tangent(t).direction);
  }

  [[nodiscard]] double curvature_at(double t) const noexcept {
    if (!params) return 0.0;
    return elastica_curvature(t) / scale;
  }
};

/// Which piece of U a canonical (t1 in [-pi, pi)) interval lies in.
struct HermiteDiagnostics {
  double gamma_hat = 0.0;
  double sigma_residual = 0.0;
  double g_gamma_value = 0.0;
  double energy_e1 = 0.0;
  int newton_iterations = 0;
  URegion region = URegion::U1;
};

inline constexpr double kCornerRadius = 1e-9;
inline constexpr double kOriginRadius = 1e-12;
inline constexpr double kSquareSlack = 1e-12;

[[nodiscard]] inline bool is_origin(ChordAngles a) noexcept { return std::abs(a.alpha) + std::abs(a.beta) <= kOriginRadius; }

/// +1 near (pi/2, -pi/2), -1 near (-pi/2, pi/2), 0 otherwise.
[[nodiscard]] inline int uturn_corner(ChordAngles a) noexcept {
  if (std::hypot(a.alpha - kHalfPi, a.beta + kHalfPi) <= kCornerRadius) return +1;
  if (std::hypot(a.alpha + kHalfPi, a.beta - kHalfPi) <= kCornerRadius) return -1;
  return 0;
}

[[nodiscard]] inline bool in_square(ChordAngles a, double slack = kSquareSlack) noexcept {
  return std::abs(a.alpha) <= kHalfPi + slack && std::abs(a.beta) <= kHalfPi + slack;
}

// ---------------------------------------------------------------------------
// The parameter region U on the fundamental domain -pi <= t1 < pi.

/// Upper boundary of U (the staircase) above the column t1 in [-pi, pi).
[[nodiscard]] inline double u_upper(double t1) {
  const double tb = constants().t_bar;
  if (t1 < -tb) return 0.0;
  if (t1 < 0.0) return tb;
  if (t1 < kPi - tb) return kPi;
  return kPi + tb;
}

/// Shift by a multiple of (2pi, 2pi) so that t1 lands in [-pi, pi).
[[nodiscard]] inline ParamInterval fundamental(ParamInterval iv) noexcept {
  const double k = std::floor((iv.t1 + kPi) / kTwoPi);
  iv.t1 -= k * kTwoPi;
  iv.t2 -= k * kTwoPi;
  if (iv.t1 >= kPi) {
    iv.t1 -= kTwoPi;
    iv.t2 -= kTwoPi;
  }
  return iv;
}

[[nodiscard]] inline bool in_region_u(ParamInterval iv, double tol = 1e-9) {
  iv = fundamental(iv);
  if (!(iv.t1 < iv.t2)) return false;
  if (iv.t2 <= u_upper(iv.t1) + tol) return true;
  // Close to the seam t1 = pi, the column t1 = -pi (t2 up to 0, i.e. 2pi) applies.
  if (iv.t1 > kPi - tol) return iv.t2 - kTwoPi <= tol;
  return false;
}

[[nodiscard]] inline URegion classify_region(ParamInterval iv) {
  iv = fundamental(iv);
  if (iv.t2 <= 0.0) return URegion::U0;
  if (iv.t1 < 0.0) return URegion::U1;
  if (iv.t2 <= kPi) return URegion::U2;
  return URegion::U3;
}

// ---------------------------------------------------------------------------
// Inversion of Q.

namespace detail {

struct SeedCell {
  ParamInterval iv;
  ChordAngles angles;
};

inline constexpr int kSeedGrid = 64;

/// Forward evaluation of Q at the cell centres of a 64x64 grid over U,
/// parametrised by t1 and the fraction s of the column height.
[[nodiscard]] inline const std::vector<SeedCell>& seed_grid() {
  static const std::vector<SeedCell> grid = [] {
    std::vector<SeedCell> cells;
    cells.reserve(static_cast<std::size_t>(kSeedGrid) * kSeedGrid);
    for (int i = 0; i < kSeedGrid; ++i) {
      const double t1 = -kPi + (i + 0.5) * kTwoPi / kSeedGrid;
      const double top = u_upper(t1);
      for (int k = 0; k < kSeedGrid; ++k) {
        const double s = (k + 0.5) / kSeedGrid;
        const ParamInterval iv{t1, t1 + s * (top - t1)};
        cells.push_back({iv, chord_angles(iv)});
      }
    }
    return cells;
  }();
  return grid;
}

[[nodiscard]] inline std::array<double, 2> angle_residual(const ParamInterval& iv, ChordAngles target) {
  const ChordAngles a = chord_angles(iv);
  return {normalize_angle(a.alpha - target.alpha), normalize_angle(a.beta - target.beta)};
}

[[nodiscard]] inline double max_abs(const std::array<double, 2>& r) noexcept {
  return std::max(std::abs(r[0]), std::abs(r[1]));
}

struct NewtonOutcome {
  ParamInterval iv;
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
};

inline constexpr int kMaxNewtonIterations = 50;
inline constexpr double kNewtonTol = 2e-14;
inline constexpr double kAcceptTol = 1e-11;

/// Damped Newton on Q(t1, t2) = target; a step is halved until the residual decreases.
[[nodiscard]] inline NewtonOutcome newton_invert(ChordAngles target, ParamInterval x) {
  NewtonOutcome out;
  auto r = angle_residual(x, target);
  double rn = max_abs(r);
  int it = 0;
  for (; it < kMaxNewtonIterations && rn > kNewtonTol; ++it) {
    const JacobianDQ j = jacobian_q(x);
    const double det = j.det();
    if (!std::isfinite(det) || det == 0.0) break;
    double dt1 = -(j.d_beta_dt2 * r[0] - j.d_alpha_dt2 * r[1]) / det;
    double dt2 = -(-j.d_beta_dt1 * r[0] + j.d_alpha_dt1 * r[1]) / det;
    constexpr double kMaxStep = 1.0;
    const double len = std::hypot(dt1, dt2);
    if (len > kMaxStep) {
      dt1 *= kMaxStep / len;
      dt2 *= kMaxStep / len;
    }
    bool accepted = false;
    double lambda = 1.0;
    for (int h = 0; h < 40; ++h, lambda *= 0.5) {
      const ParamInterval cand{x.t1 + lambda * dt1, x.t2 + lambda * dt2};
      if (!(cand.t1 < cand.t2) || !(cand.t2 - cand.t1 < kTwoPi)) continue;
      const auto rc = angle_residual(cand, target);
      const double rcn = max_abs(rc);
      if (rcn < rn) {
        x = cand;
        r = rc;
        rn = rcn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  out.iv = x;
  out.iterations = it;
  out.residual = rn;
  out.converged = rn <= kAcceptTol;
  return out;
}

inline void check_invertible(ChordAngles a) {
  if (!std::isfinite(a.alpha) || !std::isfinite(a.beta) || !in_square(a))
    throw Error(ErrorCode::DomainError, "chord angles outside [-pi/2, pi/2]^2");
  if (is_origin(a)) throw Error(ErrorCode::DomainError, "chord angles (0, 0) give a line segment, not an arc");
  if (uturn_corner(a) != 0) throw Error(ErrorCode::DomainError, "u-turn corner has a degenerate Jacobian");
}

/// Inverse of the tangent direction theta(t) = arg R'(t) on the branch
/// t in [0, pi], where it increases from 0 to pi. Uses sin^2 t = sin theta.
[[nodiscard]] inline double tangent_inverse_increasing(double theta) noexcept {
  theta = std::clamp(theta, 0.0, kPi);
  return std::atan2(std::sqrt(std::sin(theta)), std::sqrt(2.0) * std::sin(kPi / 4.0 - theta / 2.0));
}

/// Same on t in [-pi, 0], where theta decreases from pi to 0.
[[nodiscard]] inline double tangent_inverse_decreasing(double theta) noexcept {
  return -tangent_inverse_increasing(theta);
}

/**
 * @brief Inversion by reduction to one unknown.
 *
 * beta - alpha equals the turning theta(t2) - theta(t1), so on each monotone
 * branch t2 is an explicit function of t1 and only alpha remains to be
 * matched. Used when the 2-D Newton iteration stalls: near the diagonal
 * t1 = t2 the Jacobian of Q is nearly singular but this reduced residual is
 * still computed to full absolute accuracy. Searches U0 and U1 directly and
 * U2, U3 through Q(t1 + pi, t2 + pi) = -Q(t1, t2).
 */
[[nodiscard]] inline std::optional<ParamInterval> invert_by_turning(ChordAngles target) {
  const double tb = constants().t_bar;
  const double theta_bar = elastica_tangent(tb).direction;
  constexpr int kSamples = 64;

  auto solve_half = [&](ChordAngles goal) -> std::optional<ParamInterval> {
    const double turn = goal.beta - goal.alpha;
    auto make = [&](double theta1, bool uturn_branch) -> std::optional<ParamInterval> {
      const double t1 = tangent_inverse_decreasing(theta1);
      const double theta2 = theta1 + turn;
      const double t2 = uturn_branch ? tangent_inverse_decreasing(theta2) : tangent_inverse_increasing(theta2);
      if (!(t1 < t2)) return std::nullopt;
      return ParamInterval{t1, t2};
    };
    auto mismatch = [&](const ParamInterval& iv, double theta1) {
      const SegmentGeometry g = segment_geometry(iv);
      return normalize_angle(theta1 - std::atan2(g.dxi, g.dx) - goal.alpha);
    };
    // Branch U0: both ends on the decreasing branch (needs turn < 0); U1: t1 < 0 < t2.
    for (const bool in_u0 : {true, false}) {
      double lo = 0.0;
      double hi = 0.0;
      if (in_u0) {
        if (!(turn < 0.0)) continue;
        lo = -turn;
        hi = kPi;
      } else {
        lo = std::max(0.0, -turn);
        hi = std::min(theta_bar, theta_bar - turn);
      }
      if (!(lo < hi)) continue;
      double prev_theta = 0.0;
      double prev_f = 0.0;
      bool have_prev = false;
      for (int k = 0; k <= kSamples + 1; ++k) {
        double theta1 = 0.0;
        if (k == 0) theta1 = lo;
        else if (k == kSamples + 1) theta1 = hi;
        else theta1 = lo + (hi - lo) * (k - 0.5) / kSamples;
        const auto iv = make(theta1, in_u0);
        if (!iv) continue;
        const double f = mismatch(*iv, theta1);
        if (have_prev && (f > 0.0) != (prev_f > 0.0) && std::abs(f - prev_f) < kPi) {
          double a = prev_theta;
          double fa = prev_f;
          double b = theta1;
          for (int it = 0; it < 200 && std::abs(b - a) > 1e-17; ++it) {
            const double m = 0.5 * (a + b);
            const auto ivm = make(m, in_u0);
            if (!ivm) break;
            const double fm = mismatch(*ivm, m);
            if ((fm > 0.0) == (fa > 0.0)) {
              a = m;
              fa = fm;
            } else {
              b = m;
            }
          }
          for (const double cand : {a, b}) {
            const auto ivc = make(cand, in_u0);
            if (!ivc || !in_region_u(*ivc)) continue;
            if (max_abs(angle_residual(*ivc, goal)) <= kAcceptTol) return ivc;
          }
        }
        prev_theta = theta1;
        prev_f = f;
        have_prev = true;
      }
    }
    return std::nullopt;
  };

  if (auto iv = solve_half(target)) return *iv;
  if (auto iv = solve_half({-target.alpha, -target.beta})) return fundamental({iv->t1 + kPi, iv->t2 + kPi});
  return std::nullopt;
}

[[nodiscard]] inline ChordAngles clamp_to_square(ChordAngles a) noexcept {
  return {std::clamp(a.alpha, -kHalfPi, kHalfPi), std::clamp(a.beta, -kHalfPi, kHalfPi)};
}

}  // namespace detail

struct InversionResult {
  ParamInterval iv;
  int newton_iterations = 0;
  double residual = 0.0;
};

inline constexpr int kMaxReseeds = 8;

/**
 * @brief Unique (t1, t2) in U with Q(t1, t2) = angles, t1 in [-pi, pi).
 *
 * If `hint` is given it is tried first as a Newton seed; otherwise, and on
 * failure, seeds come from the best cells of the forward grid.
 */
[[nodiscard]] inline InversionResult invert_q_detailed(ChordAngles angles, const ParamInterval* hint = nullptr) {
  detail::check_invertible(angles);
  const ChordAngles target = detail::clamp_to_square(angles);
  int total_iterations = 0;
  auto attempt = [&](ParamInterval seed) -> std::optional<InversionResult> {
    const auto out = detail::newton_invert(target, seed);
    total_iterations += out.iterations;
    if (!out.converged) return std::nullopt;
    const ParamInterval iv = fundamental(out.iv);
    if (!in_region_u(iv)) return std::nullopt;
    return InversionResult{iv, total_iterations, out.residual};
  };
  if (hint != nullptr && hint->t1 < hint->t2 && hint->t2 - hint->t1 < kTwoPi) {
    if (auto r = attempt(*hint)) return *r;
  }
  const auto& grid = detail::seed_grid();
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto dist = [&](std::size_t i) {
    return std::max(std::abs(grid[i].angles.alpha - target.alpha), std::abs(grid[i].angles.beta - target.beta));
  };
  const std::size_t tries = std::min<std::size_t>(kMaxReseeds + 1, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(tries), order.end(),
                    [&](std::size_t a, std::size_t b) { return dist(a) < dist(b); });
  if (auto r = attempt(grid[order[0]].iv)) return *r;
  if (auto iv = detail::invert_by_turning(target)) {
    return InversionResult{*iv, total_iterations, detail::max_abs(detail::angle_residual(*iv, target))};
  }
  for (std::size_t k = 1; k < tries; ++k) {
    if (auto r = attempt(grid[order[k]].iv)) return *r;
  }
  throw Error(ErrorCode::NoConvergence, "Newton inversion of Q failed from all seeds");
}

[[nodiscard]] inline ParamInterval invert_q(ChordAngles angles) { return invert_q_detailed(angles).iv; }

/// E1(alpha, beta): minimal bending energy of an s-curve of unit breadth.
[[nodiscard]] inline double energy_e1(ChordAngles a, const ParamInterval* hint = nullptr) {
  if (!in_square(a)) throw Error(ErrorCode::DomainError, "chord angles outside [-pi/2, pi/2]^2");
  if (is_origin(a)) return 0.0;
  if (uturn_corner(a) != 0) {
    const double d = constants().d;
    return d * d;
  }
  return normalized_energy(invert_q_detailed(a, hint).iv);
}

struct EnergyGradient {
  double d_alpha = 0.0;
  double d_beta = 0.0;
};

/// grad E1 = (-l sin t1, l sin t2), i.e. half of (-kappa_a, kappa_b) of the unit-breadth curve.
[[nodiscard]] inline EnergyGradient grad_from_params(const ParamInterval& iv) {
  const double l = chord_length(iv);
  return {-l * std::sin(iv.t1), l * std::sin(iv.t2)};
}

[[nodiscard]] inline EnergyGradient grad_e1(ChordAngles a, const ParamInterval* hint = nullptr) {
  if (!in_square(a)) throw Error(ErrorCode::DomainError, "chord angles outside [-pi/2, pi/2]^2");
  if (uturn_corner(a) != 0) throw Error(ErrorCode::DomainError, "gradient of E1 is undefined at the u-turn corners");
  if (is_origin(a)) return {};
  return grad_from_params(invert_q_detailed(a, hint).iv);
}

/// Value and gradient from a single inversion; `params` receives the preimage when there is one.
struct EnergyEval {
  double energy = 0.0;
  EnergyGradient grad;
  std::optional<ParamInterval> params;
};

[[nodiscard]] inline EnergyEval evaluate_e1(ChordAngles a, const ParamInterval* hint = nullptr) {
  if (!in_square(a)) throw Error(ErrorCode::DomainError, "chord angles outside [-pi/2, pi/2]^2");
  EnergyEval e;
  if (is_origin(a)) return e;
  if (const int corner = uturn_corner(a); corner != 0) {
    const double d = constants().d;
    e.energy = d * d;
    e.params = corner > 0 ? ParamInterval{-kPi, 0.0} : ParamInterval{0.0, kPi};
    return e;
  }
  const ParamInterval iv = invert_q_detailed(a, hint).iv;
  const SegmentGeometry g = segment_geometry(iv);
  e.energy = g.l * g.dxi;
  e.grad = {-g.l * std::sin(iv.t1), g.l * std::sin(iv.t2)};
  e.params = iv;
  return e;
}

// ---------------------------------------------------------------------------

[[nodiscard]] inline ChordAngles chord_angles_of(const UnitTangent& u, const UnitTangent& v) {
  const Point chord = v.base - u.base;
  const double phi = direction(chord);
  return {normalize_angle(u.direction - phi), normalize_angle(v.direction - phi)};
}

/// The canonical C-infinity optimal s-curve connecting u to v.
[[nodiscard]] inline SCurve optimal_scurve(const UnitTangent& u, const UnitTangent& v,
                                           const ParamInterval* hint = nullptr) {
  const Point chord = v.base - u.base;
  const double breadth = norm(chord);
  if (!(breadth > 0.0)) throw Error(ErrorCode::CoincidentPoints, "configuration base points coincide");
  const double phi = direction(chord);
  const ChordAngles a = chord_angles_of(u, v);
  if (!in_square(a)) throw Error(ErrorCode::DomainError, "chord angles outside [-pi/2, pi/2]^2");

  SCurve c;
  c.breadth = breadth;
  c.angles = a;
  c.start = u.base;
  c.end = v.base;
  if (is_origin(a)) {
    c.kind = SCurveKind::LineSegment;
    c.scale = breadth;
    c.rotation = phi;
    c.translation = u.base;
    return c;
  }
  ParamInterval iv;
  if (const int corner = uturn_corner(a); corner != 0) {
    c.kind = SCurveKind::UTurnArc;
    iv = corner > 0 ? ParamInterval{-kPi, 0.0} : ParamInterval{0.0, kPi};
  } else {
    c.kind = SCurveKind::ElasticaArc;
    iv = invert_q_detailed(a, hint).iv;
  }
  const SegmentGeometry g = segment_geometry(iv);
  c.params = iv;
  c.scale = breadth / g.l;
  c.rotation = normalize_angle(phi - std::atan2(g.dxi, g.dx));
  c.translation = u.base - rotate_scale(elastica_point(iv.t1), c.rotation, c.scale);
  c.energy = g.l * g.dxi / breadth;
  c.kappa_start = 2.0 * g.l * std::sin(iv.t1) / breadth;
  c.kappa_end = 2.0 * g.l * std::sin(iv.t2) / breadth;
  return c;
}

// ---------------------------------------------------------------------------
// gamma-form cross-check and the sign structure of dE1/dbeta.

/// Map (alpha, beta) by reversal and/or reflection to alpha >= |beta|.
[[nodiscard]] inline ChordAngles canonical_reduction(ChordAngles a) noexcept {
  if (std::abs(a.beta) > std::abs(a.alpha)) std::swap(a.alpha, a.beta);
  if (a.alpha < 0.0) a = {-a.alpha, -a.beta};
  return a;
}

/**
 * @brief Residuals of the gamma-form characterisation at a computed preimage.
 *
 * `angles` must already be canonical (alpha >= |beta|, alpha > 0) and `iv`
 * must describe a right-left s-curve (t1 < 0 < t2); the c-curve branch is not
 * characterised by a zero of sigma and yields NotApplicable.
 */
[[nodiscard]] inline HermiteDiagnostics cross_check_gamma(ChordAngles angles, ParamInterval iv) {
  if (!(angles.alpha > 0.0 && angles.alpha <= kHalfPi && std::abs(angles.beta) <= angles.alpha &&
        angles.beta > -kHalfPi) ||
      uturn_corner(angles) != 0)
    throw Error(ErrorCode::NotApplicable, "angles are not in reduced canonical form");
  iv = fundamental(iv);
  if (!(iv.t1 < 0.0 && iv.t2 > 0.0 && iv.t2 < kPi))
    throw Error(ErrorCode::NotApplicable, "optimal curve is a c-curve; no interior sigma root");
  HermiteDiagnostics diag;
  diag.region = classify_region(iv);
  diag.gamma_hat = angles.alpha - elastica_tangent(iv.t1).direction;
  const GammaForm f = gamma_form(angles.alpha, angles.beta, diag.gamma_hat);
  diag.sigma_residual = f.sigma;
  diag.g_gamma_value = f.G;
  diag.energy_e1 = normalized_energy(iv);
  return diag;
}

/// Reduce, invert, and cross-check in one go.
[[nodiscard]] inline HermiteDiagnostics cross_check_gamma(ChordAngles angles) {
  const ChordAngles reduced = canonical_reduction(angles);
  if (is_origin(reduced) || uturn_corner(reduced) != 0)
    throw Error(ErrorCode::NotApplicable, "line segments and u-turns have no gamma form");
  const InversionResult inv = invert_q_detailed(reduced);
  HermiteDiagnostics diag = cross_check_gamma(reduced, inv.iv);
  diag.newton_iterations = inv.newton_iterations;
  return diag;
}

/**
 * @brief The unique beta*_alpha with sign(dE1/dbeta) = sign(beta - beta*_alpha).
 *
 * Found by bisection on the sign of dE1/dbeta over
 * [-pi/2 + 1e-6, alpha] for alpha > 0; negative alpha uses
 * E1(alpha, beta) = E1(-alpha, -beta), and beta*_0 = 0.
 */
[[nodiscard]] inline double locate_beta_star(double alpha) {
  if (!(std::abs(alpha) <= kHalfPi + kSquareSlack)) throw Error(ErrorCode::DomainError, "alpha outside [-pi/2, pi/2]");
  if (alpha == 0.0) return 0.0;
  if (alpha < 0.0) return -locate_beta_star(-alpha);
  alpha = std::min(alpha, kHalfPi);
  auto dbeta = [alpha](double beta) { return grad_e1({alpha, beta}).d_beta; };
  return detail::bisect(dbeta, -kHalfPi + 1e-6, alpha, 1e-14, "beta*");
}

}  // namespace elspline
