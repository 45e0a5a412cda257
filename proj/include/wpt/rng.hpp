#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace wpt {

// SplitMix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Key for an independent random stream identified by (seed, a, b, c).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ (b + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ (c + 0x2545f4914f6cdd1dULL));
  return h;
}

// Keyed generator: the same key always yields the same sequence, independent
// of any other stream. Normal deviates use Box-Muller on the engine's raw
// output so results do not depend on the standard library's distributions.
class KeyedStream {
 public:
  explicit KeyedStream(std::uint64_t key) : engine_(key) {}

  // Uniform in (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Circularly-symmetric complex normal with E|z|^2 = 1.
  std::complex<double> complex_normal() {
    const double r = std::sqrt(-std::log(uniform()));
    const double t = 2.0 * 3.14159265358979323846 * uniform();
    return {r * std::cos(t), r * std::sin(t)};
  }

  Eigen::VectorXcd complex_normal_vector(Eigen::Index n) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index k = 0; k < n; ++k) v[k] = complex_normal();
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wpt
