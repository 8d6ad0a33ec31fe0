#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pathgroup {

// Deterministic normal sampler. std::normal_distribution is implementation
// defined, so Box-Muller is spelled out to keep the byte-identical-output
// contract under a fixed seed.
class NormalSampler {
 public:
  explicit NormalSampler(uint64_t seed) : gen_(seed) {}

  // Sub-stream for worker `idx`, independent of thread scheduling.
  static NormalSampler for_task(uint64_t seed, uint64_t idx) {
    // splitmix64 mix of (seed, idx)
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (idx + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return NormalSampler(z ^ (z >> 31));
  }

  double uniform() {  // (0,1)
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pathgroup
