#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

namespace detail {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

inline double xi_rate(double t) {
  const double s = std::sin(t);
  return s * s / std::sqrt(1.0 + s * s);
}

inline double speed(double t) {
  const double s = std::sin(t);
  return 1.0 / std::sqrt(1.0 + s * s);
}

/// xi(pi) by adaptive Simpson.
inline double d_constant() { return simpson(xi_rate, 0.0, kPi, 1e-14); }

inline double xi(double t) { return simpson(xi_rate, 0.0, t, 1e-14); }

inline double arclength(double a, double b) { return simpson(speed, a, b, 1e-14); }

struct Angles {
  double alpha;
  double beta;
};

/// Chord angles of the elastica arc on [t1, t2], computed from first principles.
inline Angles chord_angles(double t1, double t2) {
  const double dx = std::sin(t2) - std::sin(t1);
  const double dy = simpson(xi_rate, t1, t2, 1e-14);
  const double chord = std::atan2(dy, dx);
  auto tangent = [](double t) {
    const double s = std::sin(t);
    return std::atan2(s * s, std::cos(t) * std::sqrt(1.0 + s * s));
  };
  auto wrap = [](double a) {
    double r = std::remainder(a, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
  };
  return {wrap(tangent(t1) - chord), wrap(tangent(t2) - chord)};
}

/// Energy of the elastica arc on [t1, t2] scaled to unit chord: l * delta xi.
inline double normalized_energy(double t1, double t2) {
  const double dx = std::sin(t2) - std::sin(t1);
  const double dy = simpson(xi_rate, t1, t2, 1e-14);
  return std::hypot(dx, dy) * dy;
}

/// Central difference of f at x with step h.
template <typename F>
double central_difference(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Leading term of E1 near the origin.
inline double small_angle_energy(double a, double b) { return a * a + a * b + b * b; }

}  // namespace oracle
