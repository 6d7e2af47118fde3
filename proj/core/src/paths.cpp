#include "bougerol/paths.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bougerol/error.hpp"

namespace bougerol {

GridSpec::GridSpec(double t_end, std::size_t n_steps) : t_end_(t_end), n_steps_(n_steps) {
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw InputError("grid horizon t_end must be finite and > 0, got " + std::to_string(t_end));
  if (n_steps < 1) throw InputError("grid n_steps must be >= 1");
}

BrownianPath::BrownianPath(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.n_steps() + 1)
    throw InputError("path length " + std::to_string(values_.size()) + " does not match grid (" +
                     std::to_string(grid_.n_steps() + 1) + " points)");
  if (values_.front() != 0.0) throw InputError("path must start at 0");
}

double BrownianPath::running_max() const noexcept {
  return *std::max_element(values_.begin(), values_.end());
}

double BrownianPath::running_min() const noexcept {
  return *std::min_element(values_.begin(), values_.end());
}

BrownianPath sample_brownian_path(const GridSpec& grid, Philox& rng) {
  const double sd = std::sqrt(grid.step());
  std::vector<double> v(grid.n_steps() + 1);
  v[0] = 0.0;
  for (std::size_t k = 1; k < v.size(); ++k) v[k] = v[k - 1] + sd * rng.normal();
  return BrownianPath(grid, std::move(v));
}

BrownianPath sample_brownian_path(const GridSpec& grid, RngStream stream) {
  Philox rng(stream);
  return sample_brownian_path(grid, rng);
}

BrownianPath time_reverse_path(const BrownianPath& p) {
  const auto in = p.values();
  const std::size_t n = in.size() - 1;
  std::vector<double> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out[k] = in[n - k] - in[n];
  return BrownianPath(p.grid(), std::move(out));
}

double sample_normal(double mean, double variance, Philox& rng) {
  if (!(variance >= 0.0)) throw InputError("normal variance must be >= 0");
  if (variance == 0.0) return mean;
  return mean + std::sqrt(variance) * rng.normal();
}

}  // namespace bougerol
