#pragma once

#include <cstdint>
#include <random>

#include "markovgev/numeric.hpp"

namespace markovgev {

// splitmix64 finalizer, used to derive independent stream seeds from a
// (master seed, index...) key so replicates and chains can run in parallel
// with reproducible, scheduling-independent output.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = mix64(master);
  s = mix64(s ^ mix64(a + 0x51ed270b5f7e3d19ULL));
  s = mix64(s ^ mix64(b + 0x2545f4914f6cdd1dULL));
  s = mix64(s ^ mix64(c + 0x9d2c5680dd51c4afULL));
  return s;
}

// Uniform and normal deviates from a seeded mt19937_64. Normals go through
// the inverse cdf so every draw is a pure function of the stream state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0,1); 0 is remapped to the smallest
  // representable step so inverse-cdf transforms never see an endpoint.
  double uniform() {
    const double u = (engine_() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }

  double normal() { return norm_quantile(uniform()); }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace markovgev
