#pragma once

#include <cstddef>
#include <functional>

namespace bougerol {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_intervals = 2000;
  /// The range is first split into this many equal panels.
  std::size_t initial_panels = 1;
};

/// Globally adaptive 7-point Gauss / 15-point Kronrod quadrature on a
/// finite interval (QUADPACK QAG strategy): bisect the panel with the
/// largest error estimate until sum(err) <= max(abs_tol, rel_tol * |I|).
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                const QuadratureOptions& opts = {});

}  // namespace bougerol
