#pragma once

#include <cstdint>

namespace percospec {

// Counter-based random stream. The whole value sequence is a pure function of
// the key triple (seed, realization, site), so realizations can be generated
// in any order, on any number of threads, with bit-identical results.
class SiteRng {
 public:
  SiteRng(std::uint64_t seed, std::uint64_t realization, std::uint64_t site)
      : state_(key(seed, realization, site)) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  static std::uint64_t key(std::uint64_t seed, std::uint64_t realization,
                           std::uint64_t site) {
    std::uint64_t h = mix(seed + 0x9E3779B97F4A7C15ull);
    h = mix(h ^ (realization + 0xBF58476D1CE4E5B9ull));
    h = mix(h ^ (site + 0x94D049BB133111EBull));
    return h;
  }

  std::uint64_t state_;
};

}  // namespace percospec
