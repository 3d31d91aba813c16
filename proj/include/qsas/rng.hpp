// rng.hpp -- deterministic random numbers.
//
// std::uniform_real_distribution and std::normal_distribution are not pinned
// down by the standard, so their output can differ between library
// implementations.  Reproducibility across platforms matters here (seeded
// experiment sweeps must agree to 1e-9), so doubles are derived from the raw
// mt19937_64 stream directly: uniforms via the top 53 bits, normals via
// Box-Muller.  Independent per-task streams are split off a master seed with
// splitmix64 so concurrent workers never share an engine.

#ifndef QSAS_RNG_HPP
#define QSAS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace qsas {

// splitmix64 step; the standard way to decorrelate seeds derived from a
// common master value.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic stream seed for sub-task `index` of a run seeded by `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 1));
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; one spare value is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // Guard against log(0).
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t raw() { return engine_(); }

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

} // namespace qsas

#endif // QSAS_RNG_HPP
