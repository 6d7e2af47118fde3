#include "bougerol/functionals.hpp"

#include <cmath>
#include <limits>

namespace bougerol {
namespace {

FunctionalSample finish(double b_t, double interior_sum, double step) {
  FunctionalSample s;
  s.b_t = b_t;
  s.a_t = step * (0.5 * (1.0 + std::exp(2.0 * b_t)) + interior_sum);
  s.exp_b = std::exp(b_t);
  s.exp_neg_b = std::exp(-b_t);
  return s;
}

FunctionalSample overflowed(double b_t) {
  FunctionalSample s;
  s.b_t = b_t;
  s.a_t = std::numeric_limits<double>::infinity();
  s.exp_b = std::exp(b_t);
  s.exp_neg_b = std::exp(-b_t);
  s.overflow = true;
  return s;
}

}  // namespace

FunctionalSample exp_functional(const BrownianPath& p) {
  const auto v = p.values();
  const std::size_t n = v.size() - 1;
  if (p.running_max() > kOverflowLevel) return overflowed(v[n]);
  double interior = 0.0;
  for (std::size_t k = 1; k < n; ++k) interior += std::exp(2.0 * v[k]);
  return finish(v[n], interior, p.grid().step());
}

std::pair<FunctionalSample, FunctionalSample> reversed_pair(const BrownianPath& p) {
  return {exp_functional(p), exp_functional(time_reverse_path(p))};
}

FunctionalSample sample_exp_functional(const GridSpec& grid, Philox& rng) {
  const std::size_t n = grid.n_steps();
  const double sd = std::sqrt(grid.step());
  double b = 0.0;
  double interior = 0.0;
  bool overflow = false;
  for (std::size_t k = 1; k < n; ++k) {
    b = b + sd * rng.normal();
    overflow |= b > kOverflowLevel;
    interior += std::exp(2.0 * b);
  }
  b = b + sd * rng.normal();
  overflow |= b > kOverflowLevel;
  if (overflow) return overflowed(b);
  return finish(b, interior, grid.step());
}

FunctionalBatch sample_functional_batch(const GridSpec& grid, std::size_t n, RngStream base,
                                        std::uint64_t role, unsigned threads) {
  FunctionalBatch batch;
  batch.samples.resize(n);
  batch.rejected = for_each_functional(grid, n, base, role, threads,
                                       [&](std::size_t i, const FunctionalSample& s, Philox&) {
                                         batch.samples[i] = s;
                                       });
  return batch;
}

}  // namespace bougerol
