#pragma once

#include <cstdint>
#include <random>

#include "mmreach/core.hpp"

namespace mmreach {

// splitmix64 finalizer; derives independent per-item seeds from one seed so
// results do not depend on thread scheduling.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(mix_seed(seed, stream)) {}

  // Uniform in [0, 1) with 53 random bits; identical on every platform.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  bool coin() { return (engine_() >> 63) != 0; }
  std::uint64_t bits() { return engine_(); }

  Vector in_box(const Box& b) {
    Vector v(b.dim());
    for (std::size_t i = 0; i < b.dim(); ++i) v[i] = uniform(b.lower[i], b.upper[i]);
    return v;
  }

  // Uniform point in [lo, hi] (componentwise); lo <= hi required.
  Vector between(const Vector& lo, const Vector& hi) {
    Vector v(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) v[i] = uniform(lo[i], hi[i]);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

// All 2^n corners of a box, in binary-counting order.
inline std::vector<Vector> box_corners(const Box& b) {
  const std::size_t n = b.dim();
  std::vector<Vector> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Vector c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = (mask >> i) & 1U ? b.upper[i] : b.lower[i];
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace mmreach
