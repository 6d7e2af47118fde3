#pragma once

#include <cstddef>
#include <span>

#include "bougerol/paths.hpp"
#include "bougerol/rng.hpp"

namespace bougerol {

/// Horizon below which density_A flags its result: the exp(pi^2 / 8t)
/// prefactor grows while the oscillatory mean tends to 0, so cancellation
/// dominates the error.
inline constexpr double kDensityStabilityFloor = 0.25;

struct DensityEval {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t nodes_used = 0;
  bool tolerance_met = false;
  bool small_t_warning = false;
};

struct DensityOptions {
  /// The Gaussian expectation is truncated to |b| <= stretch * 8 * sqrt(t) + t.
  double stretch = 1.5;
  double stability_floor = kDensityStabilityFloor;
  std::size_t max_intervals = 4000;
};

/// Density of A_t = int_0^t e^{2B_s} ds at v > 0:
///   exp(pi^2/8t) E[ cosh(B_t) / sqrt(2 pi v^3) exp(-cosh^2(B_t) / 2v) cos(pi B_t / 2t) ],
/// the expectation evaluated by adaptive Gauss-Kronrod over b with at least
/// one 15-node panel per oscillation period of cos(pi b / 2t).
/// Throws InputError unless t > 0, v > 0 and tol > 0.
DensityEval density_A(double t, double v, double tol = 1e-12, const DensityOptions& opts = {});

/// int_lo^hi density_A(t, v) dv; hi may be +inf. Integrates in log v.
DensityEval density_A_mass(double t, double lo, double hi, double tol = 1e-9);

/// Gamma-function prefactor sqrt(pi) / (2^{nu-1} Gamma(nu - 1/2)).
double mellin_prefactor(double nu);

/// E|sinh B_t|^power for B_t ~ N(0, t), by adaptive quadrature; power > -1.
double expected_abs_sinh_power(double t, double power);

/// Right-hand side of the Mellin relation, prefactor * E|sinh B_t|^{2nu-2}.
/// Throws InputError for nu <= 1/2.
double mellin_rhs(double t, double nu);

struct MellinEstimate {
  double lhs = 0.0;    ///< Monte Carlo mean of A_t^{nu-1}
  double rhs = 0.0;    ///< quadrature value of the closed form
  double mc_se = 0.0;  ///< standard error of lhs
  std::size_t n = 0;
};

/// Mellin relation evaluated from existing A_t draws.
MellinEstimate mellin_from_samples(std::span<const double> a_samples, double t, double nu);

/// E[A_t^{nu-1}] by Monte Carlo over n_mc trapezoidal A_t draws, against
/// the closed form. Throws InputError for nu <= 1/2 or n_mc < 1.
MellinEstimate mellin_A(double t, double nu, std::size_t n_mc, RngStream rng,
                        std::size_t n_steps = kDefaultSteps, unsigned threads = 0);

/// P(B_t <= a, L^0_t >= b), b > 0.
double joint_cdf_BL(double t, double a, double b);

/// P(B_t <= a, L^x_t >= b), b > 0.
double joint_cdf_BL_level(double t, double x, double a, double b);

/// P(x + B_t <= a, L^{-x}_t >= b), b > 0.
double joint_cdf_shifted(double t, double x, double a, double b);

/// Density of (B_t, L^x_t) at (a, b), b > 0:
///   (|a-x| + b + |x|) / sqrt(2 pi t^3) exp(-(|a-x| + b + |x|)^2 / 2t).
double joint_pdf_BL(double t, double x, double a, double b);

/// P(L^x_t = 0) = 1 - 2 Phi(-|x| / sqrt t).
double no_hit_probability(double t, double x);

/// P(sinh(x + B_t) <= y, sinh(|x| + L^{-x}_t) - sinh|x| >= z), z > 0.
double theorem_rhs_cdf(double t, double x, double y, double z);

}  // namespace bougerol
