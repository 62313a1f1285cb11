#ifndef AXHM_RNG_HPP
#define AXHM_RNG_HPP

#include <cstdint>

namespace axhm {

/// splitmix64. Self-contained so sample families reproduce bit-for-bit
/// regardless of standard-library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [a, b) with 53-bit resolution.
  double uniform(double a, double b) {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
  }

  /// Uniform integer in [a, b] inclusive.
  int uniform_int(int a, int b) {
    return a + static_cast<int>(next_u64() % static_cast<std::uint64_t>(b - a + 1));
  }

 private:
  std::uint64_t s_;
};

}  // namespace axhm

#endif
