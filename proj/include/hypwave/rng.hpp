#pragma once

#include <cstdint>
#include <random>

namespace hypwave {

// Deterministic pseudo-random stream.  The bit-to-double mapping is fixed
// here (rather than delegated to std::uniform_real_distribution, whose
// output is implementation-defined) so that a seed reproduces identical
// streams across compilers and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1): top 53 bits of the 64-bit state word.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace hypwave
