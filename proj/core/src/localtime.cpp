#include "bougerol/localtime.hpp"

#include <algorithm>
#include <cmath>

#include "bougerol/error.hpp"
#include "bougerol/special.hpp"

namespace bougerol {
namespace {

void require_positive_horizon(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InputError("horizon t must be finite and > 0");
}

// Endpoint of a path that stayed strictly below level c > 0 up to time t.
// Proposal: N(0, t) truncated to (-inf, c), drawn by inversion. Acceptance:
// 1 - p_t(2c - y) / p_t(y) = 1 - exp(-2c(c - y) / t).
double sample_killed_endpoint(double t, double c, Philox& rng, RejectionStats* stats) {
  const double sd = std::sqrt(t);
  const double mass_below = normal_cdf(c / sd);
  for (;;) {
    const double y = sd * normal_quantile(rng.uniform() * mass_below);
    const double accept = -std::expm1(-2.0 * c * (c - y) / t);
    const bool ok = rng.uniform() < accept;
    if (stats) {
      ++stats->proposals;
      stats->accepted += ok ? 1 : 0;
    }
    if (ok) return y;
  }
}

}  // namespace

HittingTimeSample sample_hitting_time(double c, Philox& rng) {
  if (c == 0.0 || !std::isfinite(c)) throw InputError("hitting level must be finite and nonzero");
  const double z = rng.normal();
  return {c, c * c / (z * z)};
}

LevelLocalTimeSample sample_levy_pair(double t, Philox& rng) {
  require_positive_horizon(t);
  const double w = std::sqrt(t) * rng.normal();
  const double m = 0.5 * (w + std::sqrt(w * w - 2.0 * t * std::log(rng.uniform())));
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  LevelLocalTimeSample s;
  s.endpoint = sign * (m - w);
  s.local_time = m;
  s.hit = true;
  s.level = 0.0;
  s.horizon = t;
  return s;
}

LevelLocalTimeSample sample_bm_with_local_time(double t, double c, Philox& rng,
                                               RejectionStats* stats) {
  require_positive_horizon(t);
  if (!std::isfinite(c)) throw InputError("level must be finite");
  if (c == 0.0) return sample_levy_pair(t, rng);

  const HittingTimeSample hit = sample_hitting_time(c, rng);
  LevelLocalTimeSample s;
  s.level = c;
  s.horizon = t;
  if (hit.time >= t) {
    const double y = sample_killed_endpoint(t, std::abs(c), rng, stats);
    s.endpoint = c > 0.0 ? y : -y;
    s.local_time = 0.0;
    s.hit = false;
    return s;
  }
  const LevelLocalTimeSample rest = sample_levy_pair(t - hit.time, rng);
  s.endpoint = c + rest.endpoint;
  s.local_time = rest.local_time;
  s.hit = true;
  return s;
}

double occupation_local_time(const BrownianPath& p, double c, double bandwidth) {
  if (!(bandwidth > 0.0)) throw InputError("occupation bandwidth must be > 0");
  const auto v = p.values();
  const double step = p.grid().step();
  const double lo = c - bandwidth;
  const double hi = c + bandwidth;
  double time_in_band = 0.0;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    const double a = std::min(v[k], v[k + 1]);
    const double b = std::max(v[k], v[k + 1]);
    if (b == a) {
      if (a > lo && a < hi) time_in_band += step;
      continue;
    }
    const double overlap = std::min(b, hi) - std::max(a, lo);
    if (overlap > 0.0) time_in_band += step * overlap / (b - a);
  }
  return time_in_band / (2.0 * bandwidth);
}

double default_occupation_bandwidth(const GridSpec& grid) { return std::sqrt(grid.step()); }

double levy_max_local_time(const BrownianPath& p, double c) {
  return std::max(0.0, p.running_max() - std::abs(c));
}

}  // namespace bougerol
