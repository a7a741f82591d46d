#pragma once

/**
 * @file   sweeps.hpp
 * @brief  Grid sweeps over the identities the library relies on. Each sweep
 *         returns the worst value seen so callers can print margins.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "elspline/elastica.hpp"
#include "elspline/hermite.hpp"

namespace elspline::sweeps {

struct DetSetResult {
  std::string name;
  int points = 0;
  int nonnegative = 0;
  double min_margin = 0.0;  ///< min of -det DQ
};

[[nodiscard]] inline double lerp(double a, double b, int i, int n) { return a + (b - a) * i / (n - 1); }

/// Cell midpoints of an n-by-n grid on an open box.
[[nodiscard]] inline double mid(double a, double b, int i, int n) { return a + (b - a) * (i + 0.5) / n; }

[[nodiscard]] inline std::array<DetSetResult, 4> det_sweep(int n) {
  const double ts = constants().t_star;
  std::array<DetSetResult, 4> out{{{"(i)", 0, 0, INFINITY},
                                   {"(ii)", 0, 0, INFINITY},
                                   {"(iii)", 0, 0, INFINITY},
                                   {"(iv)", 0, 0, INFINITY}}};
  auto record = [](DetSetResult& r, double t1, double t2) {
    const double det = det_dq({t1, t2});
    ++r.points;
    if (!(det < 0.0)) ++r.nonnegative;
    r.min_margin = std::min(r.min_margin, -det);
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // closed triangles off the diagonal and the corner
      const double a = lerp(-kPi, 0.0, i, n);
      const double b = lerp(-kPi, 0.0, j, n);
      if (a < b && !(i == 0 && j == n - 1)) record(out[0], a, b);
      const double c = lerp(0.0, kPi, i, n);
      const double d = lerp(0.0, kPi, j, n);
      if (c < d && !(i == 0 && j == n - 1)) record(out[2], c, d);
      // open boxes
      record(out[1], mid(-ts, 0.0, i, n), mid(0.0, ts, j, n));
      record(out[3], mid(kPi - ts, kPi, i, n), mid(kPi, kPi + ts, j, n));
    }
  }
  return out;
}

struct RoundTripResult {
  int points = 0;
  int failures = 0;
  double max_residual = 0.0;
  int max_newton_iterations = 0;
};

/// Q(invert_q(a)) against a on the closed square, skipping the origin and the u-turn corners.
[[nodiscard]] inline RoundTripResult round_trip_sweep(int n) {
  RoundTripResult r;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const ChordAngles a{lerp(-kHalfPi, kHalfPi, i, n), lerp(-kHalfPi, kHalfPi, j, n)};
      if (is_origin(a) || uturn_corner(a) != 0) continue;
      ++r.points;
      try {
        const InversionResult inv = invert_q_detailed(a);
        const ChordAngles q = chord_angles(inv.iv);
        const double res = std::max(std::abs(normalize_angle(q.alpha - a.alpha)), std::abs(normalize_angle(q.beta - a.beta)));
        r.max_residual = std::max(r.max_residual, res);
        r.max_newton_iterations = std::max(r.max_newton_iterations, inv.newton_iterations);
      } catch (const Error&) {
        ++r.failures;
      }
    }
  }
  return r;
}

struct SymmetryResult {
  int points = 0;
  double max_swap = 0.0;
  double max_reflect = 0.0;
};

[[nodiscard]] inline SymmetryResult symmetry_sweep(int n) {
  SymmetryResult r;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const ChordAngles a{lerp(-kHalfPi, kHalfPi, i, n), lerp(-kHalfPi, kHalfPi, j, n)};
      const double e = energy_e1(a);
      r.max_swap = std::max(r.max_swap, std::abs(e - energy_e1({a.beta, a.alpha})));
      r.max_reflect = std::max(r.max_reflect, std::abs(e - energy_e1({-a.alpha, -a.beta})));
      ++r.points;
    }
  }
  return r;
}

struct GradientResult {
  int points = 0;
  double max_relative_error = 0.0;
};

/// Analytic gradient against central differences with step h on an n-by-n
/// grid strictly inside the square, away from the origin by `exclude`.
[[nodiscard]] inline GradientResult gradient_sweep(int n, double h, double exclude) {
  GradientResult r;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const ChordAngles a{-kHalfPi + kPi * (i + 1) / (n + 1), -kHalfPi + kPi * (j + 1) / (n + 1)};
      if (std::hypot(a.alpha, a.beta) < exclude) continue;
      const EnergyEval e = evaluate_e1(a);
      const ParamInterval* hint = e.params ? &*e.params : nullptr;
      const double fa = (energy_e1({a.alpha + h, a.beta}, hint) - energy_e1({a.alpha - h, a.beta}, hint)) / (2 * h);
      const double fb = (energy_e1({a.alpha, a.beta + h}, hint) - energy_e1({a.alpha, a.beta - h}, hint)) / (2 * h);
      const double scale = std::max(std::hypot(e.grad.d_alpha, e.grad.d_beta), 1e-300);
      r.max_relative_error = std::max(r.max_relative_error, std::hypot(e.grad.d_alpha - fa, e.grad.d_beta - fb) / scale);
      ++r.points;
    }
  }
  return r;
}

struct BetaStarRecord {
  double alpha = 0.0;
  double beta_star = 0.0;
  int sign_mismatches = 0;
};

/// beta*_alpha for `n_alpha` values of alpha and the sign pattern of dE1/dbeta on `n_beta` betas.
[[nodiscard]] inline std::vector<BetaStarRecord> beta_star_sweep(int n_alpha, int n_beta) {
  std::vector<BetaStarRecord> out;
  for (int i = 0; i < n_alpha; ++i) {
    BetaStarRecord rec;
    rec.alpha = lerp(-kHalfPi, kHalfPi, i, n_alpha);
    rec.beta_star = locate_beta_star(rec.alpha);
    for (int j = 0; j < n_beta; ++j) {
      const double beta = lerp(-kHalfPi, kHalfPi, j, n_beta);
      const ChordAngles a{rec.alpha, beta};
      if (uturn_corner(a) != 0 || is_origin(a)) continue;
      if (std::abs(beta - rec.beta_star) < 1e-9) continue;
      const double g = grad_e1(a).d_beta;
      if ((g > 0.0) != (beta > rec.beta_star)) ++rec.sign_mismatches;
    }
    out.push_back(rec);
  }
  return out;
}

}  // namespace elspline::sweeps
