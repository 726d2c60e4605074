#include "anisopede/rng.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

namespace anisopede {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  Rng r(seed ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xc2b2ae3d27d4eb4fULL));
  r.next();
  return r.next();
}

int default_thread_count() {
  if (const char* env = std::getenv("ANISOPEDE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return int(std::min(v, 64L));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return int(std::min(hw == 0 ? 1u : hw, 8u));
}

}  // namespace anisopede
