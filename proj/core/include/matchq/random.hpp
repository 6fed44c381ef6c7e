#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace matchq {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Output depends only on (key, counter), so any draw of any replication can
/// be regenerated independently of execution order.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{M0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{M1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += W0;
      key[1] += W1;
    }
    return ctr;
  }
};

/// Sequential view of one Philox stream identified by (seed, stream, substream).
/// Draw i of the stream is a pure function of (seed, stream, substream, i).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint32_t stream, std::uint64_t substream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        sub_lo_(static_cast<std::uint32_t>(substream)),
        sub_hi_(static_cast<std::uint32_t>(substream >> 32) ^ (stream << 20)) {}

  /// Moves to draw index i (two uniforms per block).
  void seek(std::uint64_t i) {
    index_ = i;
    cached_block_ = ~std::uint64_t{0};
    has_spare_ = false;
  }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() {
    const std::uint64_t blk = index_ >> 1;
    if (blk != cached_block_) {
      out_ = Philox4x32::block({static_cast<std::uint32_t>(blk), static_cast<std::uint32_t>(blk >> 32),
                                sub_lo_, sub_hi_},
                               key_);
      cached_block_ = blk;
    }
    const unsigned slot = static_cast<unsigned>(index_ & 1u) * 2u;
    ++index_;
    const std::uint64_t bits = (std::uint64_t{out_[slot]} << 32) | out_[slot + 1];
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal by Box-Muller; consumes two uniforms per pair of normals.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t sub_lo_;
  std::uint32_t sub_hi_;
  std::uint64_t index_ = 0;
  std::uint64_t cached_block_ = ~std::uint64_t{0};
  Philox4x32::Counter out_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace matchq
