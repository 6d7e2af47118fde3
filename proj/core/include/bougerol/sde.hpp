#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bougerol/paths.hpp"
#include "bougerol/rng.hpp"
#include "bougerol/stats.hpp"

namespace bougerol {

/// X_0 = sinh(x); `grid` drives the explicit construction and
/// `scheme_steps` the Euler-Maruyama scheme on [0, grid.t_end()].
struct SdeRunConfig {
  double x = 0.0;
  GridSpec grid{1.0, 4096};
  std::size_t scheme_steps = 4096;

  /// Throws InputError if scheme_steps == 0.
  void validate() const;
};

/// Coefficients of dX = sqrt(1 + X^2) d gamma + X / 2 dt.
struct SdeCoefficients {
  double drift;
  double diffusion;
};
SdeCoefficients sde_coefficients(double x) noexcept;

/// X^x_t = e^{-B_t} (sinh x + int_0^t e^{B_s} dW_s) and
/// gamma^x_t = int_0^t (-X dB + dW) / sqrt(1 + X^2), both with left-point sums.
struct ExplicitRun {
  std::vector<double> x_path;
  std::vector<double> gamma_path;
  double gamma_end = 0.0;
  bool overflow = false;
};

/// Explicit construction from given drivers B and W (same grid), using
/// every `stride`-th grid point. Throws InputError on mismatched grids or a
/// stride that does not divide n_steps.
ExplicitRun explicit_solution(double x, const BrownianPath& b, const BrownianPath& w,
                              std::size_t stride = 1);

/// Draws independent B then W on cfg.grid and runs explicit_solution.
ExplicitRun simulate_X_explicit(const SdeRunConfig& cfg, Philox& rng);

/// max_k |X_k - sinh(x + gamma_k)| over the run.
double explicit_residual_max(double x, const ExplicitRun& run);

/// Euler-Maruyama endpoint driven by the increments of `gamma` taken every
/// `stride` grid points.
double euler_maruyama_endpoint(double x, const BrownianPath& gamma, std::size_t stride = 1);

/// EM endpoint against a fresh Brownian gamma with cfg.scheme_steps steps.
double simulate_X_em(const SdeRunConfig& cfg, Philox& rng);

/// Strong-error study over nested step counts sharing one fine driver per path.
struct ConvergenceStudy {
  std::vector<std::size_t> steps;
  std::vector<double> rms_error;
  double observed_order = 0.0;  ///< least-squares slope of log err against log step
};

/// RMS of |EM endpoint - sinh(x + gamma_t)| for each step count. Every
/// count must divide the largest one.
ConvergenceStudy em_strong_error(double x, double t, std::span<const std::size_t> steps,
                                 std::size_t n_paths, RngStream rng, unsigned threads = 0);

/// RMS of the endpoint residual |X_t - sinh(x + gamma_t)| of the explicit
/// construction for each step count (nested drivers).
ConvergenceStudy explicit_residual_study(double x, double t, std::span<const std::size_t> steps,
                                         std::size_t n_paths, RngStream rng, unsigned threads = 0);

/// Diagnostic: beta_{A_t} by simulating beta on the time-changed grid, with
/// increments N(0, dA_k) where dA_k are the trapezoid pieces of A_t.
double beta_at_A_full_path(const BrownianPath& b, Philox& rng);

/// Two-sample KS check of e^{B_t} sinh x + beta_{A_t} against sinh(x + B_t).
/// The left side uses beta_{A_t} = sqrt(A_t) Z given the B-path.
TestReport bougerol_drift_check(double t, double x, std::size_t n_mc, RngStream rng,
                                std::size_t n_steps = kDefaultSteps, unsigned threads = 0);

}  // namespace bougerol
