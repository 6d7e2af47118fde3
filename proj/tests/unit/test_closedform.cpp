#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bougerol/closedform.hpp"
#include "bougerol/error.hpp"
#include "bougerol/functionals.hpp"
#include "bougerol/quadrature.hpp"
#include "bougerol/special.hpp"
#include "test_util.hpp"

namespace bougerol {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(DensityA, ReferenceValues) {
  // 30-digit mpmath quadrature of the same expectation.
  struct Ref {
    double t, v, f;
  };
  for (const Ref r : {Ref{1, 0.1, 0.079478071981981802}, Ref{1, 0.5, 0.58616856808413335},
                      Ref{1, 1, 0.35056856057214362}, Ref{1, 2, 0.14515876449324014},
                      Ref{1, 5, 0.030968333956621599}, Ref{0.5, 0.3, 1.3519481307167651},
                      Ref{2, 3, 0.079849662698658833}}) {
    const auto d = density_A(r.t, r.v);
    EXPECT_NEAR(d.value, r.f, 1e-10) << r.t << " " << r.v;
    EXPECT_TRUE(d.tolerance_met);
    EXPECT_FALSE(d.small_t_warning);
    EXPECT_GE(d.abs_error_estimate, 0.0);
    EXPECT_GT(d.nodes_used, 0u);
  }
}

TEST(DensityA, Errors) {
  EXPECT_THROW(density_A(1.0, 0.0), InputError);
  EXPECT_THROW(density_A(1.0, -1.0), InputError);
  EXPECT_THROW(density_A(0.0, 1.0), InputError);
  EXPECT_THROW(density_A(1.0, 1.0, 0.0), InputError);
}

TEST(DensityA, VanishesAtZero) { EXPECT_LT(density_A(1.0, 1e-6).value, 1e-10); }

TEST(DensityA, SmallHorizonWarns) {
  const auto d = density_A(0.2, 0.2);
  EXPECT_TRUE(d.small_t_warning);
  EXPECT_TRUE(std::isfinite(d.value));
}

TEST(DensityA, Normalized) {
  for (double t : {0.5, 1.0, 2.0}) {
    const auto m = density_A_mass(t, 0.0, kInf);
    EXPECT_NEAR(m.value, 1.0, 1e-6) << t;
    EXPECT_TRUE(m.tolerance_met);
  }
}

TEST(DensityA, BinMassesMatchMonteCarlo) {
  const std::size_t n = 100000;
  const auto batch = sample_functional_batch(GridSpec(1.0, 1024), n, RngStream{50, 0}, 1);
  const std::vector<double> edges{0.1, 0.2, 0.4, 0.8, 1.6, 3.2, 6.4};
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    std::size_t k = 0;
    for (const auto& s : batch.samples) k += s.a_t > edges[i] && s.a_t <= edges[i + 1];
    const double p = density_A_mass(1.0, edges[i], edges[i + 1]).value;
    EXPECT_TRUE(testing::within_3se(k, n, p)) << edges[i] << ": " << static_cast<double>(k) / n << " vs " << p;
  }
}

TEST(Mellin, Prefactor) {
  EXPECT_EQ(mellin_prefactor(1.0), 1.0);
  EXPECT_NEAR(mellin_prefactor(1.5), std::sqrt(std::numbers::pi / 2.0), 1e-15);
  EXPECT_THROW(mellin_prefactor(0.5), InputError);
}

TEST(Mellin, RightHandSide) {
  EXPECT_EQ(mellin_rhs(1.0, 1.0), 1.0);
  // scipy quad of sqrt(pi/2) E|sinh N(0,1)|
  EXPECT_NEAR(mellin_rhs(1.0, 1.5), 1.4106861346424482, 1e-11);
  // E sinh^2 N(0, 1/2) = (e - 1) / 2 = E A_{1/2}
  EXPECT_NEAR(mellin_rhs(0.5, 2.0), 0.8591409142295228, 1e-11);
  EXPECT_NEAR(expected_abs_sinh_power(1.0, 2.0), (std::exp(2.0) - 1.0) / 2.0, 1e-11);
  EXPECT_THROW(mellin_rhs(1.0, 0.4), InputError);
}

TEST(Mellin, NuOneIsExact) {
  const std::vector<double> a{0.3, 2.0, 7.5};
  const auto m = mellin_from_samples(a, 1.0, 1.0);
  EXPECT_EQ(m.lhs, 1.0);
  EXPECT_EQ(m.rhs, 1.0);
  EXPECT_EQ(m.mc_se, 0.0);
}

TEST(Mellin, MonteCarloAgreement) {
  struct Case {
    double t, nu;
  };
  for (const Case c : {Case{1.0, 1.5}, Case{0.5, 2.0}}) {
    const auto m = mellin_A(c.t, c.nu, 100000, RngStream{51, 0}, 1024);
    EXPECT_LE(std::abs(m.lhs - m.rhs), 3.0 * m.mc_se) << c.t << " " << c.nu << ": " << m.lhs << " vs " << m.rhs;
    EXPECT_EQ(m.n, 100000u);
  }
  EXPECT_THROW(mellin_A(1.0, 0.5, 10, RngStream{}), InputError);
}

TEST(JointCdfBL, Examples) {
  EXPECT_NEAR(joint_cdf_BL(1.0, 0.0, 1e-14), 0.5, 1e-13);
  EXPECT_NEAR(joint_cdf_BL(1.0, 1e9, 1.0), 0.31731050786291415, 1e-15);
  EXPECT_NEAR(joint_cdf_BL(1.0, -0.5, 0.3), 0.2118553985833967, 1e-15);
  EXPECT_THROW(joint_cdf_BL(1.0, 0.0, 0.0), InputError);
  EXPECT_THROW(joint_cdf_BL(0.0, 0.0, 1.0), InputError);
}

TEST(JointCdfBLLevel, Examples) {
  for (double t : {0.5, 1.0, 3.0})
    for (double a : {-2.0, -0.3, 0.0, 0.4, 2.5})
      for (double b : {0.01, 0.5, 2.0}) EXPECT_EQ(joint_cdf_BL_level(t, 0.0, a, b), joint_cdf_BL(t, a, b));
  EXPECT_NEAR(joint_cdf_BL_level(1.0, 0.5, kInf, 0.2), 0.48392730444614607, 1e-15);
  EXPECT_THROW(joint_cdf_BL_level(1.0, 0.5, 0.0, -0.1), InputError);
}

TEST(JointCdfShifted, Examples) {
  for (double a : {-1.0, 0.0, 1.0})
    for (double b : {0.1, 1.0}) EXPECT_EQ(joint_cdf_shifted(1.0, 0.0, a, b), joint_cdf_BL(1.0, a, b));
  EXPECT_NEAR(joint_cdf_shifted(2.0, 1.0, -0.2, 0.5), 0.11466597119582378, 1e-15);
  Philox g(RngStream{52, 0});
  for (int i = 0; i < 200; ++i) {
    const double t = 0.1 + 3.0 * g.uniform();
    const double x = 4.0 * g.uniform() - 2.0;
    const double a = 6.0 * g.uniform() - 3.0;
    const double b = 0.01 + 2.0 * g.uniform();
    EXPECT_NEAR(joint_cdf_shifted(t, x, a, b), joint_cdf_BL_level(t, -x, a - x, b), 1e-15);
  }
}

TEST(JointCdfs, RangeAndMonotonicity) {
  for (double t : {0.5, 2.0})
    for (double x : {-1.0, 0.0, 0.5}) {
      for (double b = 0.05; b < 3.0; b += 0.25) {
        double prev = -1.0;
        for (double a = -4.0; a <= 4.0; a += 0.1) {
          const double f = joint_cdf_BL_level(t, x, a, b);
          ASSERT_GE(f, 0.0);
          ASSERT_LE(f, 1.0);
          ASSERT_GE(f, prev - 1e-16);
          prev = f;
        }
      }
      for (double a = -4.0; a <= 4.0; a += 0.5) {
        double prev = 2.0;
        for (double b = 0.01; b < 4.0; b += 0.05) {
          const double f = joint_cdf_BL_level(t, x, a, b);
          ASSERT_LE(f, prev + 1e-16);
          prev = f;
        }
      }
    }
}

TEST(JointPdfBL, Examples) {
  EXPECT_NEAR(joint_pdf_BL(1.0, 0.0, 0.0, 1.0), 0.24197072451914337, 1e-16);
  for (double a : {-1.0, 0.2, 3.0}) {
    const double f = joint_pdf_BL(1.3, 0.4, a, 0.7);
    EXPECT_NEAR(f, joint_pdf_BL(1.3, 0.4, 0.8 - a, 0.7), 1e-14 * f);
  }
  EXPECT_THROW(joint_pdf_BL(1.0, 0.0, 0.0, 0.0), InputError);
}

TEST(JointPdfBL, NormalizesWithAtom) {
  const double t = 1.0, x = 0.5;
  QuadratureOptions inner;
  inner.abs_tol = 1e-13;
  inner.rel_tol = 1e-12;
  const auto over_b = [&](double a) {
    return integrate_gk15([&](double b) { return joint_pdf_BL(t, x, a, b); }, 0.0, 14.0, inner).value;
  };
  QuadratureOptions outer = inner;
  outer.abs_tol = 1e-11;
  const double left = integrate_gk15(over_b, x - 14.0, x, outer).value;
  const double right = integrate_gk15(over_b, x, x + 14.0, outer).value;
  EXPECT_NEAR(left + right + no_hit_probability(t, x), 1.0, 1e-6);
  EXPECT_NEAR(no_hit_probability(t, x), 1.0 - 2.0 * normal_cdf(-0.5), 1e-15);
  EXPECT_EQ(no_hit_probability(t, 0.0), 0.0);
}

TEST(JointPdfBL, MixedDifferenceOfCdf) {
  const double h = 1e-3;
  for (double t : {0.7, 1.0, 2.0})
    for (double x : {-0.6, 0.0, 0.5})
      for (double a : {x - 1.1, x - 0.3, x + 0.4, x + 1.7})
        for (double b : {0.2, 0.8, 1.5}) {
          const auto F = [&](double aa, double bb) { return joint_cdf_BL_level(t, x, aa, bb); };
          const double mixed = (F(a + h, b + h) - F(a + h, b - h) - F(a - h, b + h) + F(a - h, b - h)) / (4 * h * h);
          EXPECT_NEAR(-mixed, joint_pdf_BL(t, x, a, b), 1e-5) << t << " " << x << " " << a << " " << b;
        }
}

TEST(TheoremRhsCdf, Examples) {
  for (double y : {-3.0, -0.5, 0.0, 0.7, 4.0})
    for (double z : {0.05, 0.4, 2.0})
      EXPECT_NEAR(theorem_rhs_cdf(1.0, 0.0, y, z), joint_cdf_BL(1.0, std::asinh(y), std::asinh(z)), 1e-15);
  EXPECT_LT(theorem_rhs_cdf(1.0, 0.5, 2.0, 1e12), 1e-170);
  EXPECT_NEAR(theorem_rhs_cdf(1.0, 0.5, -0.25, 0.4), 0.14187542241293877, 1e-15);
  EXPECT_THROW(theorem_rhs_cdf(1.0, 0.5, 0.0, 0.0), InputError);
}

TEST(TheoremRhsCdf, RangeAndMonotonicity) {
  for (double x : {-1.0, 0.5, 2.0})
    for (double z = 0.05; z < 5.0; z += 0.5) {
      double prev = -1.0;
      for (double y = -20.0; y <= 20.0; y += 0.25) {
        const double f = theorem_rhs_cdf(1.5, x, y, z);
        ASSERT_GE(f, 0.0);
        ASSERT_LE(f, 1.0);
        ASSERT_GE(f, prev - 1e-16);
        prev = f;
      }
    }
}

TEST(TheoremRhsCdf, LargeLevelsStayFinite) {
  const double f = theorem_rhs_cdf(1.0, 30.0, 1e14, 1.0);
  EXPECT_TRUE(std::isfinite(f));
  EXPECT_GE(f, 0.0);
}

}  // namespace
}  // namespace bougerol
