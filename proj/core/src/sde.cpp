#include "bougerol/sde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bougerol/error.hpp"
#include "bougerol/functionals.hpp"
#include "bougerol/parallel.hpp"

namespace bougerol {
namespace {

double fit_order(std::span<const std::size_t> steps, std::span<const double> err, double t) {
  // slope of log(err) against log(h), h = t / steps
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double lx = std::log(t / static_cast<double>(steps[i]));
    const double ly = std::log(err[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::size_t check_nested(std::span<const std::size_t> steps) {
  if (steps.empty()) throw InputError("convergence study needs at least one step count");
  const std::size_t fine = *std::max_element(steps.begin(), steps.end());
  for (std::size_t s : steps)
    if (s == 0 || fine % s != 0) throw InputError("step counts must divide the finest count");
  return fine;
}

}  // namespace

void SdeRunConfig::validate() const {
  if (scheme_steps < 1) throw InputError("scheme_steps must be >= 1");
  if (!std::isfinite(x)) throw InputError("x must be finite");
}

SdeCoefficients sde_coefficients(double x) noexcept {
  return {0.5 * x, std::sqrt(1.0 + x * x)};
}

ExplicitRun explicit_solution(double x, const BrownianPath& b, const BrownianPath& w, std::size_t stride) {
  if (!(b.grid() == w.grid())) throw InputError("drivers B and W must share a grid");
  const std::size_t n = b.grid().n_steps();
  if (stride == 0 || n % stride != 0) throw InputError("stride must divide n_steps");
  const auto bv = b.values();
  const auto wv = w.values();
  const std::size_t m = n / stride;

  ExplicitRun run;
  run.x_path.resize(m + 1);
  run.gamma_path.resize(m + 1);
  const double s0 = std::sinh(x);
  double integral = 0.0;  // int_0^t e^{B_s} dW_s
  double gamma = 0.0;
  run.x_path[0] = s0;
  run.gamma_path[0] = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i0 = k * stride, i1 = i0 + stride;
    const double xk = run.x_path[k];
    const double db = bv[i1] - bv[i0];
    const double dw = wv[i1] - wv[i0];
    gamma += (-xk * db + dw) / std::sqrt(1.0 + xk * xk);
    integral += std::exp(bv[i0]) * dw;
    run.overflow |= std::abs(bv[i1]) > kOverflowLevel;
    run.x_path[k + 1] = std::exp(-bv[i1]) * (s0 + integral);
    run.gamma_path[k + 1] = gamma;
  }
  run.gamma_end = gamma;
  return run;
}

ExplicitRun simulate_X_explicit(const SdeRunConfig& cfg, Philox& rng) {
  cfg.validate();
  const BrownianPath b = sample_brownian_path(cfg.grid, rng);
  const BrownianPath w = sample_brownian_path(cfg.grid, rng);
  return explicit_solution(cfg.x, b, w);
}

double explicit_residual_max(double x, const ExplicitRun& run) {
  double worst = 0.0;
  for (std::size_t k = 0; k < run.x_path.size(); ++k)
    worst = std::max(worst, std::abs(run.x_path[k] - std::sinh(x + run.gamma_path[k])));
  return worst;
}

double euler_maruyama_endpoint(double x, const BrownianPath& gamma, std::size_t stride) {
  const std::size_t n = gamma.grid().n_steps();
  if (stride == 0 || n % stride != 0) throw InputError("stride must divide n_steps");
  const auto g = gamma.values();
  const double h = gamma.grid().step() * static_cast<double>(stride);
  double xv = std::sinh(x);
  for (std::size_t i = 0; i < n; i += stride) {
    const SdeCoefficients c = sde_coefficients(xv);
    xv += c.drift * h + c.diffusion * (g[i + stride] - g[i]);
  }
  return xv;
}

double simulate_X_em(const SdeRunConfig& cfg, Philox& rng) {
  cfg.validate();
  const BrownianPath gamma = sample_brownian_path(GridSpec(cfg.grid.t_end(), cfg.scheme_steps), rng);
  return euler_maruyama_endpoint(cfg.x, gamma);
}

ConvergenceStudy em_strong_error(double x, double t, std::span<const std::size_t> steps,
                                 std::size_t n_paths, RngStream rng, unsigned threads) {
  const std::size_t fine = check_nested(steps);
  if (n_paths < 1) throw InputError("n_paths must be >= 1");
  const GridSpec grid(t, fine);
  std::vector<double> sq(n_paths * steps.size());
  parallel_for(n_paths, threads, [&](std::size_t p) {
    Philox gen(rng.child(0, p));
    const BrownianPath gamma = sample_brownian_path(grid, gen);
    const double exact = std::sinh(x + gamma.endpoint());
    for (std::size_t j = 0; j < steps.size(); ++j) {
      const double e = euler_maruyama_endpoint(x, gamma, fine / steps[j]) - exact;
      sq[p * steps.size() + j] = e * e;
    }
  });
  ConvergenceStudy study;
  study.steps.assign(steps.begin(), steps.end());
  for (std::size_t j = 0; j < steps.size(); ++j) {
    double s = 0.0;
    for (std::size_t p = 0; p < n_paths; ++p) s += sq[p * steps.size() + j];
    study.rms_error.push_back(std::sqrt(s / static_cast<double>(n_paths)));
  }
  study.observed_order = steps.size() > 1 ? fit_order(steps, study.rms_error, t) : 0.0;
  return study;
}

ConvergenceStudy explicit_residual_study(double x, double t, std::span<const std::size_t> steps,
                                         std::size_t n_paths, RngStream rng, unsigned threads) {
  const std::size_t fine = check_nested(steps);
  if (n_paths < 1) throw InputError("n_paths must be >= 1");
  const GridSpec grid(t, fine);
  std::vector<double> sq(n_paths * steps.size());
  parallel_for(n_paths, threads, [&](std::size_t p) {
    Philox gen(rng.child(0, p));
    const BrownianPath b = sample_brownian_path(grid, gen);
    const BrownianPath w = sample_brownian_path(grid, gen);
    for (std::size_t j = 0; j < steps.size(); ++j) {
      const ExplicitRun run = explicit_solution(x, b, w, fine / steps[j]);
      const double e = run.x_path.back() - std::sinh(x + run.gamma_end);
      sq[p * steps.size() + j] = e * e;
    }
  });
  ConvergenceStudy study;
  study.steps.assign(steps.begin(), steps.end());
  for (std::size_t j = 0; j < steps.size(); ++j) {
    double s = 0.0;
    for (std::size_t p = 0; p < n_paths; ++p) s += sq[p * steps.size() + j];
    study.rms_error.push_back(std::sqrt(s / static_cast<double>(n_paths)));
  }
  study.observed_order = steps.size() > 1 ? fit_order(steps, study.rms_error, t) : 0.0;
  return study;
}

double beta_at_A_full_path(const BrownianPath& b, Philox& rng) {
  const auto v = b.values();
  const double h = b.grid().step();
  double beta = 0.0;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    const double da = 0.5 * h * (std::exp(2.0 * v[k]) + std::exp(2.0 * v[k + 1]));
    beta += std::sqrt(da) * rng.normal();
  }
  return beta;
}

TestReport bougerol_drift_check(double t, double x, std::size_t n_mc, RngStream rng, std::size_t n_steps,
                                unsigned threads) {
  if (n_mc < 2) throw InputError("n_mc must be >= 2");
  const GridSpec grid(t, n_steps);
  const double sx = std::sinh(x);
  std::vector<double> lhs(n_mc);
  const auto rejected = for_each_functional(grid, n_mc, rng, 1, threads,
                                            [&](std::size_t i, const FunctionalSample& s, Philox& gen) {
                                              lhs[i] = s.exp_b * sx + std::sqrt(s.a_t) * gen.normal();
                                            });
  SampleSet left(1, "exp(B)sinh(x)+beta_A", rng);
  SampleSet right(1, "sinh(x+B)", rng);
  left.reserve(n_mc);
  right.reserve(n_mc);
  for (double v : lhs) left.push(v);
  const double sd = std::sqrt(t);
  for (std::size_t i = 0; i < n_mc; ++i) {
    Philox gen(rng.child(3, i));
    right.push(std::sinh(x + sd * gen.normal()));
  }
  TestReport r = ks_two_sample(left, right);
  r.test_name = "bougerol_drift_ks";
  r.meta("t", t).meta("x", x).meta("n_steps", static_cast<double>(n_steps))
      .meta("rejected_paths", static_cast<double>(rejected));
  return r;
}

}  // namespace bougerol
