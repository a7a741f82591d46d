#pragma once

#include <cmath>
#include <numbers>

namespace elspline {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wrap an angle to (-pi, pi]. Every module goes through this helper so that
/// angles compare bit-for-bit across call sites.
[[nodiscard]] inline double normalize_angle(double angle) noexcept {
  double r = std::remainder(angle, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

[[nodiscard]] constexpr double deg_to_rad(double deg) noexcept { return deg * (kPi / 180.0); }
[[nodiscard]] constexpr double rad_to_deg(double rad) noexcept { return rad * (180.0 / kPi); }

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point p) noexcept { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point a, Point b) noexcept = default;
};

[[nodiscard]] inline double norm(Point p) noexcept { return std::hypot(p.x, p.y); }
[[nodiscard]] inline double direction(Point p) noexcept { return std::atan2(p.y, p.x); }

/// Rotate by `angle` and scale by `scale` (multiplication by scale*e^{i angle}).
[[nodiscard]] inline Point rotate_scale(Point p, double angle, double scale) noexcept {
  const double c = std::cos(angle) * scale;
  const double s = std::sin(angle) * scale;
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

}  // namespace elspline
