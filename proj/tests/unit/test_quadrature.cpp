#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bougerol/quadrature.hpp"

namespace bougerol {
namespace {

TEST(GaussKronrod, Polynomial) {
  // G7K15 is exact for degree <= 22 on one panel.
  const auto r = integrate_gk15([](double x) { return std::pow(x, 20); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 1.0 / 21.0, 1e-15);
  EXPECT_TRUE(r.converged);
}

TEST(GaussKronrod, Oscillatory) {
  QuadratureOptions o;
  o.abs_tol = 1e-13;
  o.rel_tol = 0.0;
  const auto r = integrate_gk15([](double x) { return std::cos(50.0 * x) * std::exp(-x); }, 0.0, 10.0, o);
  const double exact = (1.0 - std::exp(-10.0) * (std::cos(500.0) - 50.0 * std::sin(500.0))) / (1.0 + 2500.0);
  EXPECT_NEAR(r.value, exact, 1e-13);
  EXPECT_TRUE(r.converged);
}

TEST(GaussKronrod, EndpointSingularity) {
  const auto r = integrate_gk15([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(GaussKronrod, GaussianMass) {
  QuadratureOptions o;
  o.initial_panels = 4;
  const auto r = integrate_gk15([](double x) { return std::exp(-0.5 * x * x); }, -12.0, 12.0, o);
  EXPECT_NEAR(r.value, std::sqrt(2.0 * std::numbers::pi), 1e-13);
  EXPECT_GE(r.abs_error, 0.0);
}

TEST(GaussKronrod, ReportsNonConvergence) {
  QuadratureOptions o;
  o.abs_tol = 1e-15;
  o.rel_tol = 0.0;
  o.max_intervals = 3;
  const auto r = integrate_gk15([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, o);
  EXPECT_FALSE(r.converged);
}

TEST(GaussKronrod, ReversedLimitsNegate) {
  const auto f = [](double x) { return std::exp(x); };
  EXPECT_NEAR(integrate_gk15(f, 1.0, 0.0).value, -(std::exp(1.0) - 1.0), 1e-14);
  EXPECT_EQ(integrate_gk15(f, 2.0, 2.0).value, 0.0);
}

}  // namespace
}  // namespace bougerol
