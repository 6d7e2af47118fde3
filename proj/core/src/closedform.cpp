#include "bougerol/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bougerol/error.hpp"
#include "bougerol/functionals.hpp"
#include "bougerol/quadrature.hpp"
#include "bougerol/special.hpp"

namespace bougerol {
namespace {

using std::numbers::pi;

void require_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InputError("horizon t must be finite and > 0");
}

void require_b(double b, const char* name) {
  if (!(b > 0.0)) throw InputError(std::string(name) + " must be > 0 (the atom at 0 is the complement)");
}

}  // namespace

DensityEval density_A(double t, double v, double tol, const DensityOptions& opts) {
  require_t(t);
  if (!(v > 0.0) || !std::isfinite(v)) throw InputError("density argument v must be finite and > 0");
  if (!(tol > 0.0)) throw InputError("density tolerance must be > 0");

  const double log_norm = pi * pi / (8.0 * t) - 0.5 * std::log(2.0 * pi * t) -
                          0.5 * std::log(2.0 * pi) - 1.5 * std::log(v);
  const double freq = pi / (2.0 * t);
  // Integrand is even in b; integrate over [0, upper] and double.
  const auto integrand = [&](double b) {
    const double c = std::cosh(b);
    const double expo = log_norm - b * b / (2.0 * t) - c * c / (2.0 * v);
    return 2.0 * c * std::exp(expo) * std::cos(freq * b);
  };

  double upper = opts.stretch * 8.0 * std::sqrt(t) + t;
  // Beyond sinh^2(b) = 80 v the factor exp(-sinh^2 b / 2v) is below e^-40
  // relative to its value at b = 0.
  upper = std::min(upper, asinh_stable(std::sqrt(80.0 * v)));
  const double period = 4.0 * t;

  QuadratureOptions q;
  q.abs_tol = tol;
  q.rel_tol = 0.0;
  q.max_intervals = opts.max_intervals;
  q.initial_panels = static_cast<std::size_t>(std::max(2.0, std::ceil(upper / period)));
  const QuadratureResult r = integrate_gk15(integrand, 0.0, upper, q);

  DensityEval out;
  out.value = r.value;
  out.abs_error_estimate = r.abs_error;
  out.nodes_used = r.evaluations;
  out.tolerance_met = r.converged && r.abs_error <= tol;
  out.small_t_warning = t < opts.stability_floor;
  return out;
}

DensityEval density_A_mass(double t, double lo, double hi, double tol) {
  require_t(t);
  if (!(lo >= 0.0) || !(hi > lo)) throw InputError("density mass needs 0 <= lo < hi");
  // A_t <= t exp(2 max B) and P(max B > m) = 2 Phi(-m / sqrt t): beyond
  // u = log t + 2 m with m = 8 sqrt t the remaining mass is below 1e-15.
  const double u_cap = std::log(t) + 16.0 * std::sqrt(t);
  const double u_floor = std::log(1e-3);  // density < exp(-499) below here
  const double u_lo = lo > 0.0 ? std::log(lo) : u_floor;
  const double u_hi = std::isfinite(hi) ? std::log(hi) : std::max(u_cap, u_lo + 1.0);
  DensityEval out;
  out.small_t_warning = t < kDensityStabilityFloor;
  if (u_lo >= u_hi) {
    out.tolerance_met = true;
    return out;
  }
  std::size_t inner_nodes = 0;
  bool inner_ok = true;
  const auto integrand = [&](double u) {
    const double v = std::exp(u);
    // Scale the inner tolerance so the outer error budget is respected.
    const DensityEval d = density_A(t, v, std::max(1e-300, 1e-3 * tol / (v * (u_hi - u_lo))));
    inner_nodes += d.nodes_used;
    inner_ok = inner_ok && d.tolerance_met;
    return d.value * v;
  };
  QuadratureOptions q;
  q.abs_tol = tol;
  q.rel_tol = 0.0;
  q.initial_panels = static_cast<std::size_t>(std::ceil(u_hi - u_lo));
  const QuadratureResult r = integrate_gk15(integrand, u_lo, u_hi, q);
  out.value = r.value;
  out.abs_error_estimate = r.abs_error;
  out.nodes_used = inner_nodes;
  out.tolerance_met = r.converged && inner_ok;
  return out;
}

double mellin_prefactor(double nu) {
  if (!(nu > 0.5)) throw InputError("Mellin exponent nu must be > 1/2");
  return std::tgamma(0.5) / (std::pow(2.0, nu - 1.0) * std::tgamma(nu - 0.5));
}

double expected_abs_sinh_power(double t, double power) {
  require_t(t);
  if (!(power > -1.0)) throw InputError("power must be > -1 for E|sinh B|^power to be finite");
  if (power == 0.0) return 1.0;
  const double log_norm = std::log(2.0) - 0.5 * std::log(2.0 * pi * t);
  const auto integrand = [&](double b) {
    if (b == 0.0) return 0.0;
    return std::exp(log_norm - b * b / (2.0 * t) + power * std::log(std::sinh(b)));
  };
  const double upper = std::max(power, 0.0) * t + 14.0 * std::sqrt(t) + 1.0;
  QuadratureOptions q;
  q.abs_tol = 0.0;
  q.rel_tol = 1e-12;
  q.max_intervals = 5000;
  q.initial_panels = 8;
  return integrate_gk15(integrand, 0.0, upper, q).value;
}

double mellin_rhs(double t, double nu) {
  return mellin_prefactor(nu) * expected_abs_sinh_power(t, 2.0 * nu - 2.0);
}

MellinEstimate mellin_from_samples(std::span<const double> a_samples, double t, double nu) {
  require_t(t);
  if (!(nu > 0.5)) throw InputError("Mellin exponent nu must be > 1/2");
  if (a_samples.empty()) throw InputError("Mellin estimate needs at least one sample");
  MellinEstimate m;
  m.n = a_samples.size();
  m.rhs = mellin_rhs(t, nu);
  if (nu == 1.0) {
    m.lhs = 1.0;
    return m;
  }
  // Welford accumulation keeps the variance accurate for heavy tails.
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double a : a_samples) {
    const double x = std::pow(a, nu - 1.0);
    ++k;
    const double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  }
  m.lhs = mean;
  m.mc_se = k > 1 ? std::sqrt(m2 / static_cast<double>(k - 1) / static_cast<double>(k)) : 0.0;
  return m;
}

MellinEstimate mellin_A(double t, double nu, std::size_t n_mc, RngStream rng, std::size_t n_steps,
                        unsigned threads) {
  if (!(nu > 0.5)) throw InputError("Mellin exponent nu must be > 1/2");
  if (n_mc < 1) throw InputError("n_mc must be >= 1");
  const FunctionalBatch batch = sample_functional_batch(GridSpec(t, n_steps), n_mc, rng, 0, threads);
  std::vector<double> a(n_mc);
  for (std::size_t i = 0; i < n_mc; ++i) a[i] = batch.samples[i].a_t;
  return mellin_from_samples(a, t, nu);
}

double joint_cdf_BL(double t, double a, double b) { return joint_cdf_BL_level(t, 0.0, a, b); }

double joint_cdf_BL_level(double t, double x, double a, double b) {
  require_t(t);
  require_b(b, "local-time threshold b");
  const double sd = std::sqrt(t);
  const double shift = b + std::abs(x);
  if (a >= x) return 2.0 * normal_cdf(-shift / sd) - normal_cdf((x - a - shift) / sd);
  return normal_cdf((a - x - shift) / sd);
}

double joint_cdf_shifted(double t, double x, double a, double b) {
  require_t(t);
  require_b(b, "local-time threshold b");
  const double sd = std::sqrt(t);
  const double shift = b + std::abs(x);
  if (a >= 0.0) return 2.0 * normal_cdf(-shift / sd) - normal_cdf((-a - shift) / sd);
  return normal_cdf((a - shift) / sd);
}

double joint_pdf_BL(double t, double x, double a, double b) {
  require_t(t);
  require_b(b, "local-time value b");
  const double r = std::abs(a - x) + b + std::abs(x);
  return r / std::sqrt(2.0 * pi * t * t * t) * std::exp(-r * r / (2.0 * t));
}

double no_hit_probability(double t, double x) {
  require_t(t);
  return std::max(0.0, 1.0 - 2.0 * normal_cdf(-std::abs(x) / std::sqrt(t)));
}

double theorem_rhs_cdf(double t, double x, double y, double z) {
  require_t(t);
  require_b(z, "second-coordinate threshold z");
  const double sd = std::sqrt(t);
  // sinh(|x| + L) - sinh|x| >= z  <=>  |x| + L >= asinh(z + sinh|x|)
  const double s = asinh_stable(z + std::sinh(std::abs(x)));
  if (y < 0.0) return normal_cdf((asinh_stable(y) - s) / sd);
  return 2.0 * normal_cdf(-s / sd) - normal_cdf((-asinh_stable(y) - s) / sd);
}

}  // namespace bougerol
