#pragma once

#include <cstdint>

namespace metriclab {

// Counter-based generator: every (seed, stream, counter) triple maps to the
// same value no matter how calls are interleaved, so sample plans stay
// reproducible even if callers reorder or skip work items.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : base_(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream))) {}

  std::uint64_t next_u64() { return mix(base_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  // Uniform on [0, 1): 53 significant bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace metriclab
