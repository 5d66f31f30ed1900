#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "gavms/quadrature.hpp"

using namespace gavms;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Integral of x^a y^b over the unit right triangle.
double monomial_integral(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

}  // namespace

class TriangleRule : public ::testing::TestWithParam<int> {};

TEST_P(TriangleRule, ExactForDeclaredDegree) {
  const int degree = GetParam();
  const QuadratureRule q = triangle_quadrature(degree);
  EXPECT_GE(q.degree, degree);
  EXPECT_NEAR(std::accumulate(q.weights.begin(), q.weights.end(), 0.0), 0.5, 1e-15);
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b) {
      double sum = 0.0;
      for (std::size_t k = 0; k < q.size(); ++k)
        sum += q.weights[k] * std::pow(q.points[k][1], a) * std::pow(q.points[k][2], b);
      EXPECT_NEAR(sum, monomial_integral(a, b), 1e-15) << "x^" << a << " y^" << b;
    }
  for (const auto& p : q.points) {
    EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-15);
    for (double l : p) EXPECT_GE(l, 0.0);
  }
}

INSTANTIATE_TEST_SUITE_P(Degrees, TriangleRule, ::testing::Range(1, 7));

TEST(TriangleRule, RejectsUnsupportedDegree) {
  EXPECT_THROW(triangle_quadrature(0), std::invalid_argument);
  EXPECT_THROW(triangle_quadrature(7), std::invalid_argument);
}

TEST(TriangleRule, SixthDegreeIsNotSeventhDegreeExact) {
  const QuadratureRule q = triangle_quadrature(6);
  double worst = 0.0;
  for (int a = 0; a <= 8; ++a) {
    const int b = 8 - a;
    double sum = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k)
      sum += q.weights[k] * std::pow(q.points[k][1], a) * std::pow(q.points[k][2], b);
    worst = std::max(worst, std::abs(sum - monomial_integral(a, b)));
  }
  EXPECT_GT(worst, 1e-10);
}

class EdgeRule : public ::testing::TestWithParam<int> {};

TEST_P(EdgeRule, GaussExactness) {
  const int n = GetParam();
  const QuadratureRule q = edge_quadrature(n);
  ASSERT_EQ(static_cast<int>(q.size()), n);
  EXPECT_EQ(q.degree, 2 * n - 1);
  for (int k = 0; k <= 2 * n - 1; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) sum += q.weights[i] * std::pow(q.points[i][1], k);
    EXPECT_NEAR(sum, 1.0 / (k + 1), 1e-15) << "s^" << k;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) sum += q.weights[i] * std::pow(q.points[i][1], 2 * n);
  EXPECT_GT(std::abs(sum - 1.0 / (2 * n + 1)), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Points, EdgeRule, ::testing::Range(1, 6));

TEST(EdgeRule, RejectsUnsupportedCount) {
  EXPECT_THROW(edge_quadrature(0), std::invalid_argument);
  EXPECT_THROW(edge_quadrature(6), std::invalid_argument);
}
