#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lpplspec {

// 64-bit seed for reproducible simulation.
struct Seed {
  std::uint64_t value = 0;
};

// splitmix64 mixer; used to derive independent per-replicate seeds from a
// base seed so Monte Carlo replicates never share a stream.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Documented Gaussian stream: std::mt19937_64 engine; uniforms take the top
// 53 bits mapped into (0,1]; normals come from the trigonometric Box-Muller
// transform, consuming two uniforms per pair and caching the second variate.
// The stream is fixed by this header: identical seeds give identical series
// across platforms.
class GaussianRng {
 public:
  explicit GaussianRng(Seed seed) : engine_(seed.value) {}
  explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in (0,1]; never returns 0 so log() below is safe.
  double uniform() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace lpplspec
