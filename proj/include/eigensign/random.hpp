#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace eigensign {

namespace detail {

// SplitMix64 step, used to decorrelate derived seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Seedable deterministic random source. All distributions are derived from
/// the raw 64-bit stream by hand, so a given seed produces the same stream of
/// uniforms, normals and unit vectors on every platform.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream derived from a master seed and a stream index.
  static RandomSource derived(std::uint64_t master_seed, std::uint64_t stream) {
    return RandomSource(detail::splitmix64(master_seed ^ detail::splitmix64(stream)));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // 1 - uniform() lies in (0, 1], keeping the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Fair ±1 draw.
  int rademacher() { return uniform() < 0.5 ? -1 : 1; }

  /// Uniform point on the unit sphere of the given dimension.
  std::vector<double> unit_vector(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("unit_vector: dimension must be positive");
    std::vector<double> v(dim);
    while (true) {
      double nrm_sq = 0.0;
      for (auto& x : v) {
        x = normal();
        nrm_sq += x * x;
      }
      if (nrm_sq > 1e-24) {
        const double inv = 1.0 / std::sqrt(nrm_sq);
        for (auto& x : v) x *= inv;
        return v;
      }
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace eigensign
