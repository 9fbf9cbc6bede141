#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace fqm {

/// Philox4x32-10 counter-based generator.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

/// A stream of Philox output keyed by (seed, stream id).
///
/// Stream `i` of seed `s` is independent of stream `j != i`; trial i of a
/// Monte Carlo run uses stream i.
class Rng {
 public:
  using result_type = std::uint32_t;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }
  std::uint64_t next_u64() {
    std::uint64_t lo = (*this)();
    return lo | (std::uint64_t((*this)()) << 32);
  }
  /// Uniform integer in [0, bound), bound >= 1 (rejection, unbiased).
  std::uint32_t below(std::uint32_t bound) {
    if ((bound & (bound - 1)) == 0) return (*this)() & (bound - 1);
    const std::uint32_t limit = std::uint32_t(-bound) % bound;  // 2^32 mod bound
    for (;;) {
      const std::uint64_t m = std::uint64_t((*this)()) * bound;
      if (std::uint32_t(m) >= limit) return std::uint32_t(m >> 32);
    }
  }
  std::uint64_t below64(std::uint64_t bound) {
    if (bound <= 0xffffffffull) return below(std::uint32_t(bound));
    const std::uint64_t limit = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= limit) return x % bound;
    }
  }
  /// Uniform double in [0, 1).
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  std::uint64_t seed() const { return std::uint64_t(key_[0]) | (std::uint64_t(key_[1]) << 32); }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill() {
    buf_ = philox4x32({std::uint32_t(block_), std::uint32_t(block_ >> 32), std::uint32_t(stream_),
                       std::uint32_t(stream_ >> 32)},
                      key_);
    ++block_;
    pos_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

}  // namespace fqm
