#include <gtest/gtest.h>

#include <cmath>

#include "elspline/quadrature.hpp"
#include "oracles.hpp"

using namespace elspline;

TEST(GaussLegendre, WeightsSumToTwo) {
  const auto& r = quad::rule20();
  double s = 0.0;
  for (double w : r.weights) s += w;
  EXPECT_NEAR(s, 2.0, 1e-14);
}

TEST(GaussLegendre, NodesAreSymmetricAndSorted) {
  const auto& r = quad::rule20();
  for (std::size_t i = 0; i < quad::kOrder; ++i) {
    EXPECT_NEAR(r.nodes[i], -r.nodes[quad::kOrder - 1 - i], 1e-15);
    if (i > 0) {
      EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
    }
  }
}

TEST(GaussLegendre, ExactForDegree39) {
  for (int k : {0, 1, 2, 7, 20, 38, 39}) {
    const double got = quad::integrate([k](double x) { return std::pow(x, k); }, 0.0, 1.0, 1);
    EXPECT_NEAR(got, 1.0 / (k + 1), 1e-14) << "degree " << k;
  }
}

TEST(GaussLegendre, SmoothIntegrandsMatchSimpsonOracle) {
  auto f = [](double t) { return std::exp(std::sin(3.0 * t)) / (1.0 + t * t); };
  EXPECT_NEAR(quad::integrate(f, -1.0, 2.5, 8), oracle::simpson(f, -1.0, 2.5, 1e-13), 1e-11);
  EXPECT_NEAR(quad::integrate([](double t) { return std::sin(t); }, 0.0, kPi, 1), 2.0, 1e-14);
}

TEST(GaussLegendre, SmallOrderRuleMatchesKnownNodes) {
  const auto r = quad::make_gauss_legendre<3>();
  EXPECT_NEAR(r.nodes[2], std::sqrt(3.0 / 5.0), 1e-15);
  EXPECT_NEAR(r.nodes[1], 0.0, 1e-15);
  EXPECT_NEAR(r.weights[1], 8.0 / 9.0, 1e-15);
  EXPECT_NEAR(r.weights[0], 5.0 / 9.0, 1e-15);
}
