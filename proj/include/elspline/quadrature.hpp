#pragma once

/**
 * @file   quadrature.hpp
 * @brief  Fixed-order composite Gauss-Legendre quadrature.
 */

#include <array>
#include <cmath>
#include <cstddef>

#include "elspline/geometry.hpp"

namespace elspline::quad {

/// Nodes and weights of the N-point Gauss-Legendre rule on [-1, 1].
template <std::size_t N>
struct GaussLegendreRule {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};
};

/**
 * @brief Build the N-point rule by Newton iteration on P_N, seeded with the
 * Chebyshev-like guess cos(pi (i + 3/4) / (N + 1/2)).
 */
template <std::size_t N>
[[nodiscard]] GaussLegendreRule<N> make_gauss_legendre() {
  GaussLegendreRule<N> rule;
  constexpr std::size_t half = (N + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(N) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (std::size_t j = 1; j <= N; ++j) {
        const double p2 = p1;
        p1 = p0;
        const auto jd = static_cast<double>(j);
        p0 = ((2.0 * jd - 1.0) * z * p1 - (jd - 1.0) * p2) / jd;
      }
      dp = static_cast<double>(N) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[N - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.weights[i] = w;
    rule.weights[N - 1 - i] = w;
  }
  return rule;
}

inline constexpr std::size_t kOrder = 20;

[[nodiscard]] inline const GaussLegendreRule<kOrder>& rule20() {
  static const GaussLegendreRule<kOrder> rule = make_gauss_legendre<kOrder>();
  return rule;
}

/// Integrate f over [a, b] with `panels` equal panels of the 20-point rule.
template <typename F>
[[nodiscard]] double integrate(F&& f, double a, double b, int panels) {
  const auto& rule = rule20();
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + width * p;
    const double mid = lo + 0.5 * width;
    const double half = 0.5 * width;
    double s = 0.0;
    for (std::size_t k = 0; k < kOrder; ++k) s += rule.weights[k] * f(mid + half * rule.nodes[k]);
    total += s * half;
  }
  return total;
}

}  // namespace elspline::quad
