#pragma once

#include <cstdint>

namespace anisopede {

// SplitMix64 generator. Small state, full 64-bit output, and bit-identical
// streams on every platform, which keeps seeded ensembles reproducible
// independent of the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return lo + int(next() % std::uint64_t(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

// Stirs a stream index (and optional sub-index) into a master seed so that
// per-sample generators are decorrelated and order-independent.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// Worker count for ensemble runs: the ANISOPEDE_THREADS environment
// variable if set (clamped to [1, 64]), otherwise min(hardware, 8).
int default_thread_count();

}  // namespace anisopede
