#include "bougerol/rng.hpp"

#include <cmath>

namespace bougerol {
namespace {

__extension__ using u128 = unsigned __int128;

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

// Ziggurat for the unnormalized density exp(-x^2 / 2) with 256 layers of
// equal area kZigV; kZigR is the base-layer edge.
constexpr int kLayers = 256;
constexpr double kZigR = 3.654152885361008771645;
constexpr double kZigV = 0.004928673233974655347362;

struct ZigguratTables {
  double x[kLayers + 1];
  double ratio[kLayers];  // x[i + 1] / x[i]
  double f[kLayers + 1];

  ZigguratTables() {
    const auto dens = [](double v) { return std::exp(-0.5 * v * v); };
    x[0] = kZigV / dens(kZigR);
    x[1] = kZigR;
    for (int i = 2; i < kLayers; ++i) x[i] = std::sqrt(-2.0 * std::log(kZigV / x[i - 1] + dens(x[i - 1])));
    x[kLayers] = 0.0;
    for (int i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
    for (int i = 0; i <= kLayers; ++i) f[i] = dens(x[i]);
  }
};

const ZigguratTables& zig() {
  static const ZigguratTables tables;
  return tables;
}

inline double signed_unit(std::uint64_t bits) noexcept {
  // bits 11..63 -> (-1, 1)
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-52 - 1.0;
}

}  // namespace

Philox::Block Philox::bijection(Block ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    const u128 p0 = static_cast<u128>(kMul0) * ctr[0];
    const u128 p1 = static_cast<u128>(kMul1) * ctr[2];
    ctr = {static_cast<std::uint64_t>(p1 >> 64) ^ ctr[1] ^ key[0], static_cast<std::uint64_t>(p1),
           static_cast<std::uint64_t>(p0 >> 64) ^ ctr[3] ^ key[1], static_cast<std::uint64_t>(p0)};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

void Philox::refill() noexcept {
  // Interleave kBatch independent counters to hide multiply latency.
  std::uint64_t c0[kBatch], c1[kBatch], c2[kBatch], c3[kBatch];
  for (unsigned b = 0; b < kBatch; ++b) {
    c0[b] = block_ + b;
    c1[b] = stream_.stream_id;
    c2[b] = 0;
    c3[b] = 0;
  }
  std::uint64_t k0 = key_[0], k1 = key_[1];
  for (int round = 0; round < 10; ++round) {
    for (unsigned b = 0; b < kBatch; ++b) {
      const u128 p0 = static_cast<u128>(kMul0) * c0[b];
      const u128 p1 = static_cast<u128>(kMul1) * c2[b];
      const std::uint64_t n0 = static_cast<std::uint64_t>(p1 >> 64) ^ c1[b] ^ k0;
      const std::uint64_t n2 = static_cast<std::uint64_t>(p0 >> 64) ^ c3[b] ^ k1;
      c1[b] = static_cast<std::uint64_t>(p1);
      c3[b] = static_cast<std::uint64_t>(p0);
      c0[b] = n0;
      c2[b] = n2;
    }
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  for (unsigned b = 0; b < kBatch; ++b) {
    buffer_[4 * b] = c0[b];
    buffer_[4 * b + 1] = c1[b];
    buffer_[4 * b + 2] = c2[b];
    buffer_[4 * b + 3] = c3[b];
  }
  block_ += kBatch;
  next_ = 0;
}

double Philox::normal() noexcept {
  const ZigguratTables& z = zig();
  const std::uint64_t bits = (*this)();
  const int layer = static_cast<int>(bits & 0xFF);
  const double u = signed_unit(bits);
  if (std::abs(u) < z.ratio[layer]) return u * z.x[layer];
  return normal_slow(bits);
}

double Philox::normal_slow(std::uint64_t bits) noexcept {
  const ZigguratTables& z = zig();
  for (;;) {
    const int layer = static_cast<int>(bits & 0xFF);
    const double u = signed_unit(bits);
    if (std::abs(u) < z.ratio[layer]) return u * z.x[layer];
    if (layer == 0) {
      // Tail beyond kZigR (Marsaglia 1964).
      double xt, yt;
      do {
        xt = std::log(uniform()) / kZigR;
        yt = std::log(uniform());
      } while (-2.0 * yt < xt * xt);
      return u < 0.0 ? xt - kZigR : kZigR - xt;
    }
    const double xv = u * z.x[layer];
    if (z.f[layer + 1] + uniform() * (z.f[layer] - z.f[layer + 1]) < std::exp(-0.5 * xv * xv)) return xv;
    bits = (*this)();
  }
}

}  // namespace bougerol
