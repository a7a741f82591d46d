#pragma once

/**
 * @file   spline.hpp
 * @brief  Restricted elastic splines: minimise the summed bending energy of
 *         the optimal s-curves between consecutive points over the node
 *         tangent angles, with every chord angle kept in [-pi/2, pi/2].
 *
 * The energy of piece j is E1(alpha_j, beta_{j+1}) / L_j, and
 * dE1/dalpha = -kappa_a / 2, dE1/dbeta = kappa_b / 2, so the derivative of the
 * total energy in theta_j is half the curvature jump at node j. A stationary
 * point with both chord angles strictly inside the square is therefore G2
 * across that node.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "elspline/elastica.hpp"
#include "elspline/error.hpp"
#include "elspline/geometry.hpp"
#include "elspline/hermite.hpp"

namespace elspline {

struct Clamp {
  double theta_first = 0.0;
  double theta_last = 0.0;
};

struct SplineTolerances {
  double angle_tol = 1e-10;
  int max_sweeps = 500;
};

struct SplineProblem {
  std::vector<Point> points;
  std::optional<Clamp> clamp;  ///< Free mode when empty.
  SplineTolerances tolerances;
};

struct NodeState {
  std::vector<double> theta;       ///< tangent direction at each node
  std::vector<double> chord_dirs;  ///< phi_j = arg(P_{j+1} - P_j)
  std::vector<double> stencil;     ///< psi_j for interior nodes 1..m-2
};

/// Closed arc [center - half_width, center + half_width] on the circle.
struct AngularInterval {
  double center = 0.0;
  double half_width = 0.0;

  [[nodiscard]] double lo() const noexcept { return center - half_width; }
  [[nodiscard]] double hi() const noexcept { return center + half_width; }
  [[nodiscard]] double width() const noexcept { return 2.0 * half_width; }
};

struct SplineSolution {
  std::vector<SCurve> segments;
  NodeState node_states;
  double total_energy = 0.0;
  int sweeps_used = 0;
  bool converged = false;
  std::vector<double> energy_history;  ///< total energy after each sweep, starting with the initial state
};

struct G2NodeRecord {
  std::size_t node = 0;
  double psi = 0.0;
  double alpha_in = 0.0;   ///< beta_j of the incoming piece
  double alpha_out = 0.0;  ///< alpha_j of the outgoing piece
  double kappa_in = 0.0;
  double kappa_out = 0.0;
  double kappa_jump = 0.0;
  double relative_jump = 0.0;
  bool certified_by_psi = false;
  bool g2_within_tol = false;
};

struct G2Report {
  std::vector<G2NodeRecord> nodes;
  double curvature_scale = 0.0;
};

inline constexpr double kFeasibleGuard = 1e-12;
inline constexpr double kCurvatureJumpTol = 1e-6;

// ---------------------------------------------------------------------------

inline void check_points(const std::vector<Point>& points) {
  if (points.size() < 2) throw Error(ErrorCode::DomainError, "at least two points are required");
  for (std::size_t j = 0; j + 1 < points.size(); ++j) {
    if (!std::isfinite(points[j].x) || !std::isfinite(points[j].y))
      throw Error(ErrorCode::DomainError, "non-finite point " + std::to_string(j + 1));
    if (points[j] == points[j + 1])
      throw Error(ErrorCode::CoincidentPoints, "points " + std::to_string(j + 1) + " and " + std::to_string(j + 2) +
                                                   " coincide");
  }
  if (!std::isfinite(points.back().x) || !std::isfinite(points.back().y))
    throw Error(ErrorCode::DomainError, "non-finite point " + std::to_string(points.size()));
}

[[nodiscard]] inline std::vector<double> chord_directions(const std::vector<Point>& points) {
  check_points(points);
  std::vector<double> dirs;
  dirs.reserve(points.size() - 1);
  for (std::size_t j = 0; j + 1 < points.size(); ++j) dirs.push_back(direction(points[j + 1] - points[j]));
  return dirs;
}

/// psi_j = arg((P_{j+1} - P_j) / (P_j - P_{j-1})) for j = 2..m-1 (1-based).
[[nodiscard]] inline std::vector<double> stencil_angles(const std::vector<Point>& points) {
  const auto dirs = chord_directions(points);
  std::vector<double> psi;
  for (std::size_t j = 1; j < dirs.size(); ++j) psi.push_back(normalize_angle(dirs[j] - dirs[j - 1]));
  return psi;
}

/**
 * @brief Tangent directions at node j keeping both adjacent chord angles within pi/2.
 *
 * Interior nodes get the intersection of the two half-planes, of width
 * pi - |psi_j|; end nodes get the single half-plane of their chord.
 */
[[nodiscard]] inline AngularInterval feasible_tangent_interval(std::size_t j, const NodeState& s) {
  const std::size_t m = s.chord_dirs.size() + 1;
  if (j >= m) throw Error(ErrorCode::DomainError, "node index out of range");
  if (j == 0) return {s.chord_dirs.front(), kHalfPi};
  if (j == m - 1) return {s.chord_dirs.back(), kHalfPi};
  const double psi = s.stencil[j - 1];
  if (std::abs(psi) >= kPi - 1e-12)
    throw Error(ErrorCode::EmptyFeasible, "anti-parallel chords at node " + std::to_string(j + 1));
  return {s.chord_dirs[j - 1] + 0.5 * psi, 0.5 * (kPi - std::abs(psi))};
}

[[nodiscard]] inline NodeState initialize_tangents(const std::vector<Point>& points,
                                                   const std::optional<Clamp>& clamp = std::nullopt) {
  NodeState s;
  s.chord_dirs = chord_directions(points);
  s.stencil = stencil_angles(points);
  const std::size_t m = points.size();
  s.theta.resize(m);
  for (std::size_t j = 1; j + 1 < m; ++j) s.theta[j] = feasible_tangent_interval(j, s).center;
  s.theta.front() = s.chord_dirs.front();
  s.theta.back() = s.chord_dirs.back();
  if (clamp) {
    if (std::abs(normalize_angle(clamp->theta_first - s.chord_dirs.front())) > kHalfPi ||
        std::abs(normalize_angle(clamp->theta_last - s.chord_dirs.back())) > kHalfPi)
      throw Error(ErrorCode::InfeasibleClamp, "clamped end tangent makes a chord angle exceed pi/2");
    s.theta.front() = s.chord_dirs.front() + normalize_angle(clamp->theta_first - s.chord_dirs.front());
    s.theta.back() = s.chord_dirs.back() + normalize_angle(clamp->theta_last - s.chord_dirs.back());
  }
  return s;
}

/// Chord angles (alpha_j, beta_{j+1}) of piece j.
[[nodiscard]] inline ChordAngles piece_angles(const NodeState& s, std::size_t j) {
  return {normalize_angle(s.theta[j] - s.chord_dirs[j]), normalize_angle(s.theta[j + 1] - s.chord_dirs[j])};
}

[[nodiscard]] inline double total_energy(const std::vector<Point>& points, const NodeState& s) {
  check_points(points);
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < points.size(); ++j) {
    const ChordAngles a = piece_angles(s, j);
    if (!in_square(a)) throw Error(ErrorCode::DomainError, "piece " + std::to_string(j + 1) + " is infeasible");
    total += energy_e1(a) / norm(points[j + 1] - points[j]);
  }
  return total;
}

namespace detail {

/// Working state of one optimisation run: node angles plus warm-start
/// preimages for every piece.
class SplineOptimizer {
 public:
  SplineOptimizer(const std::vector<Point>& points, NodeState state)
      : points_(points), s_(std::move(state)), hints_(points.size() - 1), step_(points.size(), 1e-3) {
    for (std::size_t j = 0; j + 1 < points_.size(); ++j) breadth_.push_back(norm(points_[j + 1] - points_[j]));
  }

  [[nodiscard]] const NodeState& state() const noexcept { return s_; }

  [[nodiscard]] double piece_energy(std::size_t j, const NodeState& s) { return eval_piece(j, s).energy / breadth_[j]; }

  [[nodiscard]] double total() {
    double e = 0.0;
    for (std::size_t j = 0; j < breadth_.size(); ++j) e += piece_energy(j, s_);
    return e;
  }

  /// Energy of the pieces adjacent to node j with theta_j = theta, and its derivative.
  struct Local {
    double f = 0.0;
    double g = 0.0;
  };

  [[nodiscard]] Local local(std::size_t j, double theta) {
    NodeState& s = s_;
    const double saved = s.theta[j];
    s.theta[j] = theta;
    Local out;
    if (j > 0) {
      const EnergyEval e = eval_piece(j - 1, s);
      out.f += e.energy / breadth_[j - 1];
      out.g += e.grad.d_beta / breadth_[j - 1];
    }
    if (j + 1 < points_.size()) {
      const EnergyEval e = eval_piece(j, s);
      out.f += e.energy / breadth_[j];
      out.g += e.grad.d_alpha / breadth_[j];
    }
    s.theta[j] = saved;
    return out;
  }

  /// Minimise over theta_j in its feasible interval; returns the change applied.
  double relax_node(std::size_t j, bool explore) {
    const AngularInterval box = feasible_tangent_interval(j, s_);
    const double lo = box.lo() + kFeasibleGuard;
    const double hi = box.hi() - kFeasibleGuard;
    const double theta0 = std::clamp(s_.theta[j], lo, hi);
    const Local start = local(j, theta0);
    double best_theta = theta0;
    Local best = start;

    if (explore) {
      const double g = golden_section(j, lo, hi);
      const Local lg = local(j, g);
      if (lg.f < best.f) {
        best_theta = g;
        best = lg;
      }
    }
    const double refined = derivative_refine(j, best_theta, best, lo, hi);
    const Local lr = local(j, refined);
    // Energy differences near the minimum are below rounding; trust the derivative.
    const double slack = 1e-14 * std::max(1.0, std::abs(best.f));
    if (lr.f <= best.f + slack) {
      best_theta = refined;
      best = lr;
    }
    if (best.f > start.f + slack) {
      best_theta = theta0;
      best = start;
    }
    const double change = std::abs(best_theta - s_.theta[j]);
    s_.theta[j] = best_theta;
    return change;
  }

 private:
  EnergyEval eval_piece(std::size_t j, const NodeState& s) {
    const ChordAngles a = piece_angles(s, j);
    const ParamInterval* hint = hints_[j] ? &*hints_[j] : nullptr;
    EnergyEval e = evaluate_e1(a, hint);
    if (e.params && uturn_corner(a) == 0) hints_[j] = e.params;
    return e;
  }

  double golden_section(std::size_t j, double a, double b) {
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = local(j, c).f;
    double fd = local(j, d).f;
    while (b - a > 1e-3) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = local(j, c).f;
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = local(j, d).f;
      }
    }
    return 0.5 * (a + b);
  }

  /// Bracket a sign change of the derivative downhill from theta, then
  /// shrink it by safeguarded secant (Illinois) steps.
  double derivative_refine(std::size_t j, double theta, Local at, double lo, double hi) {
    if (at.g == 0.0) return theta;
    const double dir = at.g < 0.0 ? 1.0 : -1.0;
    const double bound = dir > 0.0 ? hi : lo;
    double step = std::max(step_[j] * 2.0, 1e-7);
    double a = theta;
    double ga = at.g;
    double b = theta;
    double gb = at.g;
    bool bracketed = false;
    for (int k = 0; k < 80; ++k) {
      double next = a + dir * step;
      if ((next - bound) * dir >= 0.0) next = bound;
      const Local ln = local(j, next);
      b = next;
      gb = ln.g;
      if ((gb > 0.0) != (ga > 0.0) || gb == 0.0) {
        bracketed = true;
        break;
      }
      if (next == bound) break;
      a = next;
      ga = gb;
      step *= 2.0;
    }
    if (!bracketed) return b;
    if (gb == 0.0) return b;
    // Illinois iteration on g over [a, b].
    int side = 0;
    for (int k = 0; k < 100; ++k) {
      if (std::abs(b - a) <= 4e-16 * std::max(1.0, std::abs(a))) break;
      double c = b - gb * (b - a) / (gb - ga);
      const double lo_ab = std::min(a, b);
      const double hi_ab = std::max(a, b);
      if (!(c > lo_ab && c < hi_ab)) c = 0.5 * (a + b);
      const double gc = local(j, c).g;
      if (gc == 0.0) {
        a = b = c;
        break;
      }
      if ((gc > 0.0) == (gb > 0.0)) {
        b = c;
        gb = gc;
        if (side == -1) ga *= 0.5;
        side = -1;
      } else {
        a = c;
        ga = gc;
        if (side == +1) gb *= 0.5;
        side = +1;
      }
    }
    const double root = std::abs(ga) < std::abs(gb) ? a : b;
    step_[j] = std::max(std::abs(root - theta), 1e-9);
    return root;
  }

  const std::vector<Point>& points_;
  NodeState s_;
  std::vector<std::optional<ParamInterval>> hints_;
  std::vector<double> breadth_;
  std::vector<double> step_;
};

}  // namespace detail

/// Build the piece curves for a given node state.
[[nodiscard]] inline std::vector<SCurve> build_segments(const std::vector<Point>& points, const NodeState& s) {
  std::vector<SCurve> segs;
  segs.reserve(points.size() - 1);
  for (std::size_t j = 0; j + 1 < points.size(); ++j)
    segs.push_back(optimal_scurve({points[j], s.theta[j]}, {points[j + 1], s.theta[j + 1]}));
  return segs;
}

/**
 * @brief Cyclic coordinate descent over the node tangent angles.
 *
 * Each node is relaxed in turn within its feasible interval. The first sweep
 * localises each 1-D minimum with golden-section search; every update is then
 * refined on the sign of the analytic derivative. A node only moves if its
 * local energy does not increase, so the total energy is non-increasing.
 */
[[nodiscard]] inline SplineSolution optimize(const SplineProblem& problem) {
  NodeState init = initialize_tangents(problem.points, problem.clamp);
  const std::size_t m = problem.points.size();
  for (std::size_t j = 1; j + 1 < m; ++j) (void)feasible_tangent_interval(j, init);

  detail::SplineOptimizer opt(problem.points, init);
  SplineSolution sol;
  sol.energy_history.push_back(opt.total());

  const std::size_t first = problem.clamp ? 1 : 0;
  const std::size_t last = problem.clamp ? m - 1 : m;  // exclusive
  const int max_sweeps = std::max(1, problem.tolerances.max_sweeps);
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (std::size_t j = first; j < last; ++j) max_change = std::max(max_change, opt.relax_node(j, sweep == 1));
    const double e = opt.total();
    // Descent property; rounding in the recomputed total is the only slack.
    if (e > sol.energy_history.back() + 1e-13 * std::max(1.0, std::abs(sol.energy_history.back())))
      throw Error(ErrorCode::NoConvergence, "energy increased during a sweep");
    sol.energy_history.push_back(e);
    sol.sweeps_used = sweep;
    if (max_change < problem.tolerances.angle_tol) {
      sol.converged = true;
      break;
    }
  }
  sol.node_states = opt.state();
  sol.segments = build_segments(problem.points, sol.node_states);
  sol.total_energy = 0.0;
  for (const auto& seg : sol.segments) sol.total_energy += seg.energy;
  return sol;
}

/// Per-node G2 diagnostics; the jump tolerance is relative to the largest end curvature in the solution.
[[nodiscard]] inline G2Report g2_report(const SplineSolution& sol) {
  G2Report report;
  for (const auto& seg : sol.segments)
    report.curvature_scale = std::max({report.curvature_scale, std::abs(seg.kappa_start), std::abs(seg.kappa_end)});
  const double psi_limit = constants().psi;
  for (std::size_t j = 1; j < sol.segments.size(); ++j) {
    const SCurve& in = sol.segments[j - 1];
    const SCurve& out = sol.segments[j];
    G2NodeRecord r;
    r.node = j;
    r.psi = sol.node_states.stencil[j - 1];
    r.alpha_in = in.angles.beta;
    r.alpha_out = out.angles.alpha;
    r.kappa_in = in.kappa_end;
    r.kappa_out = out.kappa_start;
    r.kappa_jump = out.kappa_start - in.kappa_end;
    r.relative_jump = report.curvature_scale > 0.0 ? std::abs(r.kappa_jump) / report.curvature_scale : 0.0;
    r.certified_by_psi = std::abs(r.psi) < psi_limit;
    r.g2_within_tol = r.relative_jump <= kCurvatureJumpTol;
    report.nodes.push_back(r);
  }
  return report;
}

}  // namespace elspline
