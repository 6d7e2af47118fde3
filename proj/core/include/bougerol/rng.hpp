#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace bougerol {

/// Immutable token naming one random stream. The pair (seed, stream_id)
/// fully determines the generated bytes, so distinct stream ids can be
/// handed to parallel workers without any shared state.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  /// Stream for path `index` of a sampling role. Roles occupy disjoint
  /// blocks of 2^40 stream ids.
  [[nodiscard]] constexpr RngStream child(std::uint64_t role, std::uint64_t index) const {
    return RngStream{seed, stream_id ^ ((role << 40) | index)};
  }

  friend constexpr bool operator==(const RngStream&, const RngStream&) = default;
};

/// Philox4x64-10 counter-based generator (Salmon et al., SC'11).
///
/// Key = (seed, 0), counter = (block index, stream_id, 0, 0). Each block
/// yields four 64-bit words. Blocks are produced kBatch at a time, which
/// changes throughput but never the sequence.
///
/// Gaussian draws use a 256-layer ziggurat (Marsaglia and Tsang, with
/// Doornik's independent layer bits): one 64-bit word per draw on the fast
/// path, bits 0-7 select the layer and bits 11-63 give a signed uniform.
class Philox {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  explicit Philox(RngStream stream) noexcept : stream_(stream), key_{stream.seed, 0} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    if (next_ >= kWords) refill();
    return buffer_[next_++];
  }

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal draw (ziggurat).
  double normal() noexcept;

  /// Equivalent to calling normal() out.size() times.
  void fill_normal(std::span<double> out) noexcept {
    for (double& v : out) v = normal();
  }

  /// Raw Philox4x64-10 bijection; exposed for known-answer tests.
  static Block bijection(Block counter, Key key) noexcept;

  [[nodiscard]] RngStream stream() const noexcept { return stream_; }

 private:
  static constexpr unsigned kBatch = 4;
  static constexpr unsigned kWords = 4 * kBatch;

  void refill() noexcept;
  double normal_slow(std::uint64_t bits) noexcept;

  RngStream stream_;
  Key key_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, kWords> buffer_{};
  unsigned next_ = kWords;
};

}  // namespace bougerol
