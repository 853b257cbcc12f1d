#pragma once

#include <cstdint>

namespace gbvar {

/// Counter-based 64-bit generator: the i-th output of a stream with key k is
/// splitmix64_mix(k + (i + 1) * golden_gamma). Any output can be computed
/// directly from (key, index), so substreams never depend on how many values
/// another thread consumed.
///
/// Stream splitting: `derive_key(seed, id)` hashes a parent key and a stream
/// id into an independent child key. The simulator keys one stream per time
/// step and indexes it by row; the bootstrap keys one stream per replicate.
class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0)
      : key_(key), counter_(counter) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive_key(std::uint64_t parent, std::uint64_t stream_id) {
    return mix(mix(parent ^ 0x6A09E667F3BCC909ULL) + (stream_id + 1) * kGamma);
  }

  std::uint64_t u64_at(std::uint64_t index) const { return mix(key_ + (index + 1) * kGamma); }
  /// Uniform on [0,1) with 53 random bits.
  double uniform_at(std::uint64_t index) const {
    return static_cast<double>(u64_at(index) >> 11) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return u64_at(counter_++); }
  double next_uniform() { return uniform_at(counter_++); }
  /// Standard normal via Box-Muller; consumes two uniforms per pair.
  double next_normal();

  CounterRng substream(std::uint64_t id) const { return CounterRng(derive_key(key_, id)); }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace gbvar
