#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sqkd {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic PRNG wrapper. Gaussian and uniform draws are generated
// explicitly (not via std distributions) so streams are identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  // Independent per-record stream: hashing (seed, index) decorrelates
  // neighbouring indices, which keeps parallel runs order-independent.
  static Rng for_index(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(seed ^ 0xa076'1d64'78bd'642fULL) + index * 0x9e37'79b9'7f4a'7c15ULL);
  }

  std::uint64_t bits() { return engine_(); }

  // Uniform on (0, 1); never returns an exact endpoint.
  double u01() { return (static_cast<double>(bits() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  std::uint64_t below(std::uint64_t n) { return bits() % n; }

  bool coin() { return (bits() & 1) != 0; }

  double gaussian() {
    double u1 = u01();
    double u2 = u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  double gaussian(double mean, double sd) { return mean + sd * gaussian(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sqkd
