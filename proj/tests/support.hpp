#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <utility>

#include "mmreach/mmreach.hpp"

namespace mmreach::testing {

// x, w, xh, wh
using TPoint = std::array<Vector, 4>;

// A random point of T: ordered or reversed with equal probability, states in
// `region`, disturbances in the system's W.
inline TPoint sample_T_point(const SystemSpec& sys, const Box& region, std::uint64_t seed, std::uint64_t stream) {
  Rng rng(seed, stream);
  Vector a = rng.in_box(region), b = rng.in_box(region);
  Vector aw = rng.in_box(sys.disturbance()), bw = rng.in_box(sys.disturbance());
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] > b[j]) std::swap(a[j], b[j]);
  }
  for (std::size_t k = 0; k < aw.size(); ++k) {
    if (aw[k] > bw[k]) std::swap(aw[k], bw[k]);
  }
  if (rng.coin()) return {a, aw, b, bw};
  return {b, bw, a, aw};
}

inline SystemPtr shared_builtin(const std::string& name) { return std::make_shared<const SystemSpec>(builtin(name)); }

inline double max_abs_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace mmreach::testing
