#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "bougerol/parallel.hpp"
#include "bougerol/paths.hpp"

namespace bougerol {

/// Paths whose maximum exceeds this level are rejected: e^{2B} would
/// leave the double range well before B reaches ~355.
inline constexpr double kOverflowLevel = 300.0;

/// Joint draw of (B_t, A_t) with A_t = int_0^t exp(2 B_s) ds.
struct FunctionalSample {
  double b_t = 0.0;
  double a_t = 0.0;
  double exp_b = 1.0;
  double exp_neg_b = 1.0;
  bool overflow = false;  ///< path exceeded kOverflowLevel; a_t is +inf
};

/// Trapezoidal rule for exp(2 * values) on the path's grid.
FunctionalSample exp_functional(const BrownianPath& p);

/// (first, second) = functionals of p and of time_reverse_path(p); in law
/// these are (e^{B}, A) and (e^{-B}, e^{-2B} A).
std::pair<FunctionalSample, FunctionalSample> reversed_pair(const BrownianPath& p);

/// Draws a path from `rng` and integrates it on the fly. Bit-identical to
/// exp_functional(sample_brownian_path(grid, rng)) without storing the path.
FunctionalSample sample_exp_functional(const GridSpec& grid, Philox& rng);

/// Runs fn(i, sample, rng) for n independent paths. Path i draws from
/// base.child(role, i); overflowing paths are redrawn from the same stream
/// and counted. `rng` is left positioned after the accepted path so fn can
/// draw further per-path randomness. Returns the number of rejected paths.
template <typename Fn>
std::uint64_t for_each_functional(const GridSpec& grid, std::size_t n, RngStream base,
                                  std::uint64_t role, unsigned threads, Fn&& fn) {
  std::atomic<std::uint64_t> rejected{0};
  parallel_for(n, threads, [&](std::size_t i) {
    Philox rng(base.child(role, i));
    FunctionalSample s = sample_exp_functional(grid, rng);
    while (s.overflow) {
      rejected.fetch_add(1, std::memory_order_relaxed);
      s = sample_exp_functional(grid, rng);
    }
    fn(i, s, rng);
  });
  return rejected.load();
}

/// Convenience: n accepted samples of (B_t, A_t).
struct FunctionalBatch {
  std::vector<FunctionalSample> samples;
  std::uint64_t rejected = 0;
};

FunctionalBatch sample_functional_batch(const GridSpec& grid, std::size_t n, RngStream base,
                                        std::uint64_t role, unsigned threads = 0);

}  // namespace bougerol
