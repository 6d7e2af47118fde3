#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bougerol/paths.hpp"
#include "bougerol/rng.hpp"
#include "bougerol/stats.hpp"

namespace bougerol {

struct VerifyConfig {
  double t = 1.0;
  double x = 0.0;
  std::size_t n_mc = 100000;
  std::size_t n_steps = kDefaultSteps;
  RngStream rng{};
  unsigned threads = 0;
  EnergyOptions energy{};
  double alpha = kAlpha;

  /// Throws InputError unless t > 0, n_mc >= 2 and n_steps >= 1.
  void validate() const;
};

/// An identity holds when every decisive report passed.
bool identity_holds(std::span<const TestReport> reports);

/// beta_{A_t} (conditionally Gaussian given B) against sinh B_t; KS.
/// If `a_draws` is given it receives the n_mc sampled A_t values.
std::vector<TestReport> verify_boug(const VerifyConfig& cfg, std::vector<double>* a_draws = nullptr);

/// (e^{B_t}, A_t) against the time-reversed (e^{-B_t}, e^{-2B_t} A_t),
/// computed on independent path sets; grid ECDF and energy tests.
std::vector<TestReport> verify_reversal(const VerifyConfig& cfg);

/// Two-dimensional identity at level 0 (cfg.x is ignored):
///   (beta_A, e^{-B} lambda^0_A) ~ (e^{-B} beta_A, lambda^0_A) ~ (sinh B, sinh L^0).
/// Decisive: grid ECDF and energy tests for pair1~pair2 and pair2~pair3.
std::vector<TestReport> verify_bdy(const VerifyConfig& cfg);

/// Three-way identity at general x:
///   (e^{B} sinh x + beta_A, e^{-B} lambda^{-e^{B} sinh x}_A)
///   ~ (e^{-B} sinh x + e^{-B} beta_A, lambda^{-sinh x}_A)
///   ~ (sinh(x + B), sinh(|x| + L^{-x}) - sinh|x|).
/// Local times of beta at time A_t are drawn exactly given the B-path.
/// Decisive: atom frequencies, grid ECDF and energy tests for consecutive
/// pairs, and pair 3 against theorem_rhs_cdf at every grid point (3 SE).
std::vector<TestReport> verify_main(const VerifyConfig& cfg);

/// lambda^{sinh x}_{A_t} ~ sinh(|x| + L^x_t) - sinh|x| ~ (sinh|B_t| - sinh|x|)^+.
/// Decisive: atom frequency (two-sample and against 2 Phi(|x|/sqrt t) - 1)
/// and KS on the positive parts.
std::vector<TestReport> verify_second(const VerifyConfig& cfg);

}  // namespace bougerol
