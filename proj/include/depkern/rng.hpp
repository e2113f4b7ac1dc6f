#pragma once

#include <cstdint>
#include <random>

#include "depkern/normal.hpp"

namespace depkern {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// One well-mixed stream per (master, cell, rep) triple; reps are independent
// of scheduling order by construction.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t rep) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s ^= cell * 0xd1b54a32d192ed03ULL;
  std::uint64_t b = splitmix64(s);
  s ^= rep * 0x2545f4914f6cdd1dULL;
  std::uint64_t c = splitmix64(s);
  return a ^ (b << 1) ^ c;
}

// mt19937_64 has a standard-specified sequence; the uniform and normal maps
// below avoid std::distributions, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() {
    // 53-bit mantissa, strictly inside (0, 1)
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
  }

  double normal() { return std_normal_quantile(uniform01()); }

  std::uint64_t next_u64() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace depkern
