#pragma once

#include <cstdint>

namespace lpdens {

//! SplitMix64 run in counter mode: the i-th word of a stream is
//! mix64(key + i * golden_gamma). Streams are cheap to fork and the output
//! sequence depends only on (key, counter), which keeps parallel replications
//! deterministic regardless of scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  //! Substream for replication `index`: key = seed ^ mix64(index + 1).
  static CounterRng substream(std::uint64_t seed, std::uint64_t index) {
    return CounterRng(seed ^ mix64(index + 1));
  }

  std::uint64_t next_u64() {
    return mix64(key_ + (++counter_) * golden_gamma);
  }

  //! Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  static std::uint64_t mix64(std::uint64_t z) {
    z += golden_gamma;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace lpdens
