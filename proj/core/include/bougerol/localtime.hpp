#pragma once

#include <cstdint>

#include "bougerol/paths.hpp"
#include "bougerol/rng.hpp"

namespace bougerol {

/// Exact joint draw of (B_t, L^c_t) for a standard Brownian motion started
/// at 0. Local time uses the semimartingale (Tanaka) normalization, so
/// L^0_t has the law of |B_t|.
struct LevelLocalTimeSample {
  double endpoint = 0.0;
  double local_time = 0.0;
  bool hit = false;
  double level = 0.0;
  double horizon = 0.0;
};

struct HittingTimeSample {
  double level = 0.0;
  double time = 0.0;
};

/// Acceptance bookkeeping for the no-hit endpoint rejection sampler.
struct RejectionStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  [[nodiscard]] double acceptance_rate() const noexcept {
    return proposals == 0 ? 1.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  }
};

/// First passage time T_c = c^2 / Z^2. Throws InputError for c == 0.
HittingTimeSample sample_hitting_time(double c, Philox& rng);

/// (B_t, L^0_t) via Levy's identity (|B|, L^0) = (M - W, M): W ~ N(0, t),
/// M | W = (W + sqrt(W^2 - 2 t log U)) / 2, and an independent sign for B_t.
/// Throws InputError for t <= 0.
LevelLocalTimeSample sample_levy_pair(double t, Philox& rng);

/// Exact (B_t, L^c_t). Level 0 delegates to sample_levy_pair. Otherwise a
/// first-passage time is drawn; on a hit the Levy pair is restarted at c for
/// the remaining time, and on a miss the endpoint is drawn from the killed
/// density p_t(y) - p_t(2c - y) on the near side of c by rejection from a
/// truncated N(0, t) proposal. Throws InputError for t <= 0.
LevelLocalTimeSample sample_bm_with_local_time(double t, double c, Philox& rng,
                                               RejectionStats* stats = nullptr);

/// Occupation-kernel estimate (1 / 2h) * |{s <= t : |p(s) - c| < h}| with the
/// path linearly interpolated between grid points. Throws InputError for
/// bandwidth <= 0.
double occupation_local_time(const BrownianPath& p, double c, double bandwidth);

/// Bandwidth used when none is given: sqrt(step).
double default_occupation_bandwidth(const GridSpec& grid);

/// (max_s p(s) - |c|)^+, equal in law to L^c_t.
double levy_max_local_time(const BrownianPath& p, double c);

}  // namespace bougerol
