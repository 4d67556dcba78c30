#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "sldg/quadrature.hpp"

using namespace sldg;

namespace {

// int_T x^a y^b over the reference triangle = a! b! / (a+b+2)!.
double monomial_exact(int a, int b) {
  return std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 3.0));
}

double integrate(const TriangleRule& rule, int a, int b) {
  double acc = 0.0;
  for (size_t q = 0; q < rule.points.size(); ++q)
    acc += rule.weights[q] * std::pow(rule.points[q].x, a) * std::pow(rule.points[q].y, b);
  return acc;
}

}  // namespace

TEST_CASE("triangle rules integrate monomials exactly up to their degree") {
  for (int q = 1; q <= 20; ++q) {
    const TriangleRule rule = triangle_rule(q);
    REQUIRE(rule.exactness >= q);
    for (int a = 0; a + 0 <= q; ++a) {
      for (int b = 0; a + b <= q; ++b) {
        const double exact = monomial_exact(a, b);
        const double got = integrate(rule, a, b);
        CAPTURE(q);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(std::abs(got - exact) <= 1e-12 * exact);
      }
    }
  }
}

TEST_CASE("triangle rule weights are positive and sum to the area") {
  for (int q = 1; q <= 20; ++q) {
    const TriangleRule rule = triangle_rule(q);
    double sum = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("triangle rules are symmetric under coordinate swap") {
  const TriangleRule rule = triangle_rule(9);
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 9; ++b)
      CHECK(integrate(rule, a, b) == doctest::Approx(integrate(rule, b, a)).epsilon(1e-13));
}

TEST_CASE("edge rules are Gauss rules: n points exact through degree 2n-1") {
  for (int n = 1; n <= 20; ++n) {
    const EdgeRule rule = edge_rule(n);
    REQUIRE(rule.count == n);
    double wsum = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double acc = 0.0;
      for (int q = 0; q < n; ++q) acc += rule.weights[q] * std::pow(rule.points[q], k);
      CAPTURE(n);
      CAPTURE(k);
      CHECK(std::abs(acc - 1.0 / (k + 1)) <= 1e-12 / (k + 1));
    }
  }
}

TEST_CASE("rule constructors validate their range") {
  CHECK_THROWS_AS(triangle_rule(0), std::invalid_argument);
  CHECK_THROWS_AS(triangle_rule(21), std::invalid_argument);
  CHECK_THROWS_AS(edge_rule(0), std::invalid_argument);
  CHECK_THROWS_AS(edge_rule(21), std::invalid_argument);
}
