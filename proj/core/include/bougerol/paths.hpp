#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bougerol/rng.hpp"

namespace bougerol {

/// Uniform time grid s_k = k * step on [0, t_end], k = 0..n_steps.
class GridSpec {
 public:
  /// Throws InputError unless t_end > 0 and n_steps >= 1.
  GridSpec(double t_end, std::size_t n_steps);

  [[nodiscard]] double t_end() const noexcept { return t_end_; }
  [[nodiscard]] std::size_t n_steps() const noexcept { return n_steps_; }
  [[nodiscard]] double step() const noexcept { return t_end_ / static_cast<double>(n_steps_); }
  [[nodiscard]] double time_at(std::size_t k) const noexcept { return static_cast<double>(k) * step(); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  double t_end_;
  std::size_t n_steps_;
};

/// Default resolution used by every identity check.
inline constexpr std::size_t kDefaultSteps = 4096;

/// Path values on a grid. values()[0] is always 0.
class BrownianPath {
 public:
  /// Throws InputError unless values.size() == n_steps + 1 and values[0] == 0.
  BrownianPath(GridSpec grid, std::vector<double> values);

  [[nodiscard]] const GridSpec& grid() const noexcept { return grid_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double endpoint() const noexcept { return values_.back(); }
  [[nodiscard]] double running_max() const noexcept;
  [[nodiscard]] double running_min() const noexcept;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Standard Brownian motion sampled on `grid`: i.i.d. N(0, step) increments.
BrownianPath sample_brownian_path(const GridSpec& grid, Philox& rng);
BrownianPath sample_brownian_path(const GridSpec& grid, RngStream stream);

/// The path s -> p(t - s) - p(t), again a Brownian motion on [0, t].
BrownianPath time_reverse_path(const BrownianPath& p);

/// N(mean, variance); variance == 0 returns `mean` without consuming
/// randomness. Throws InputError for negative variance.
double sample_normal(double mean, double variance, Philox& rng);

}  // namespace bougerol
