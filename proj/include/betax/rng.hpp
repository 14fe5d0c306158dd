#pragma once

#include <cmath>
#include <cstdint>

namespace betax::rng {

// Counter-based splittable stream.  Every draw is a hash of (key, counter)
// and a fork re-keys on the child index, so (master_seed, replica, entry)
// always yields the same values no matter how work is scheduled across
// threads.  The mixer is the splitmix64 finalizer (Vigna 2015).
class SplitStream {
 public:
  explicit SplitStream(std::uint64_t seed)
      : k0_(mix(seed ^ 0x2545f4914f6cdd1dull)),
        k1_(mix(seed + 0x9e3779b97f4a7c15ull)) {}

  SplitStream fork(std::uint64_t index) const {
    SplitStream child = *this;
    child.k0_ = mix(k0_ ^ mix(index + 0xbf58476d1ce4e5b9ull));
    child.k1_ = mix(k1_ + mix(index ^ 0x94d049bb133111ebull));
    child.counter_ = 0;
    return child;
  }

  std::uint64_t next_u64() {
    std::uint64_t z = k0_ + 0x9e3779b97f4a7c15ull * ++counter_;
    z = mix(z) ^ k1_;
    return mix(z);
  }

  // Uniform on the open interval (0,1); never hits an endpoint.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal, Box-Muller, fixed two-uniform cost per call.
  double next_normal() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.28318530717958647692 * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t k0_;
  std::uint64_t k1_;
  std::uint64_t counter_ = 0;
};

}  // namespace betax::rng
