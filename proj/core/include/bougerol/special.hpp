#pragma once

namespace bougerol {

/// Standard normal CDF, Phi(x) = erfc(-x / sqrt 2) / 2.
/// Relative accuracy near 1e-15 over the full range; Phi(-inf) = 0, Phi(inf) = 1.
double normal_cdf(double x) noexcept;

/// Standard normal density.
double normal_pdf(double x) noexcept;

/// Inverse of normal_cdf on (0, 1), Wichura's AS 241 (PPND16).
/// Returns -inf / +inf at p = 0 / 1 and NaN outside [0, 1].
double normal_quantile(double p) noexcept;

/// Inverse hyperbolic sine, odd-symmetric and free of cancellation for
/// large |x|.
double asinh_stable(double x) noexcept;

}  // namespace bougerol
