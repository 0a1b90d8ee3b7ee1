#pragma once

// Deterministic derivative-free minimization over a finite box.
//
// A uniform coarse grid is evaluated first and the best few grid points are
// kept. Each of them is then refined by repeatedly evaluating a 5-point-per-
// axis grid on a local box centred at the incumbent and shrinking that box.
// Only the optimal value is returned; ties are irrelevant.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mmreach/error.hpp"

namespace mmreach {

struct OptimizerConfig {
  int coarse_grid_points_per_axis = 9;
  // Minimum number of local refinement rounds per candidate.
  int refine_iterations = 3;
  // Local radius factor per round. With 5 points per axis the optimum of a
  // unimodal 1-D slice stays inside the local box for any shrink >= 0.25.
  double refine_shrink = 0.25;
  // Refinement stops once the local radius is below tolerance * max(1, slice width).
  double tolerance = 1e-12;
  // Number of coarse candidates that get refined.
  int candidates = 5;

  void validate() const {
    if (coarse_grid_points_per_axis < 2) throw ConfigError("optimizer: coarse_grid_points_per_axis must be >= 2");
    if (refine_iterations < 0) throw ConfigError("optimizer: refine_iterations must be >= 0");
    if (!(refine_shrink > 0.0 && refine_shrink < 1.0)) throw ConfigError("optimizer: refine_shrink must be in (0,1)");
    if (!(tolerance > 0.0)) throw ConfigError("optimizer: tolerance must be > 0");
    if (candidates < 1) throw ConfigError("optimizer: candidates must be >= 1");
  }
};

namespace detail {

// Odometer over a tensor grid with `per_axis` points on each of `dims` axes.
inline bool next_index(std::vector<int>& idx, int per_axis) {
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (++idx[a] < per_axis) return true;
    idx[a] = 0;
  }
  return false;
}

}  // namespace detail

// Minimum of f over [lo, hi]. `f` is called as f(std::span<const double>)
// with points of length lo.size(); it must be safe to call repeatedly.
template <class F>
double minimize_on_box(F&& f, std::span<const double> lo, std::span<const double> hi, const OptimizerConfig& cfg) {
  if (lo.size() != hi.size()) throw DimensionError("minimize_on_box: bound length mismatch");
  const std::size_t d = lo.size();
  std::vector<double> point(lo.begin(), lo.end());
  if (d == 0) return f(std::span<const double>(point));

  std::vector<std::size_t> active;
  double scale = 1.0;
  for (std::size_t j = 0; j < d; ++j) {
    if (!std::isfinite(lo[j]) || !std::isfinite(hi[j])) throw UnboundedDomainError("minimize_on_box: infinite bound");
    if (lo[j] > hi[j]) throw OrderViolationError("minimize_on_box: lo > hi");
    if (hi[j] > lo[j]) active.push_back(j);
    scale = std::max(scale, hi[j] - lo[j]);
  }
  if (active.empty()) return f(std::span<const double>(point));

  const int g = cfg.coarse_grid_points_per_axis;
  auto grid_coord = [&](std::size_t j, int k) {
    return k == g - 1 ? hi[j] : lo[j] + (hi[j] - lo[j]) * static_cast<double>(k) / static_cast<double>(g - 1);
  };

  struct Candidate {
    double value;
    std::vector<double> point;
  };
  std::vector<Candidate> best;
  const auto keep = static_cast<std::size_t>(cfg.candidates);

  std::vector<int> idx(active.size(), 0);
  do {
    for (std::size_t a = 0; a < active.size(); ++a) point[active[a]] = grid_coord(active[a], idx[a]);
    const double v = f(std::span<const double>(point));
    if (best.size() < keep || v < best.back().value) {
      auto pos = std::upper_bound(best.begin(), best.end(), v,
                                  [](double val, const Candidate& c) { return val < c.value; });
      best.insert(pos, Candidate{v, point});
      if (best.size() > keep) best.pop_back();
    }
  } while (detail::next_index(idx, g));

  double result = best.front().value;
  constexpr int local_points = 5;
  constexpr int max_rounds = 200;
  const double stop_radius = cfg.tolerance * scale;

  std::vector<double> radius(active.size());
  std::vector<double> center(d);
  for (const auto& cand : best) {
    center = cand.point;
    double value = cand.value;
    for (std::size_t a = 0; a < active.size(); ++a) {
      const std::size_t j = active[a];
      radius[a] = (hi[j] - lo[j]) / static_cast<double>(g - 1);
    }
    for (int round = 0; round < max_rounds; ++round) {
      const double rmax = *std::max_element(radius.begin(), radius.end());
      if (round >= cfg.refine_iterations && rmax <= stop_radius) break;

      std::vector<double> next = center;
      double next_value = value;
      std::fill(idx.begin(), idx.end(), 0);
      point = center;
      do {
        for (std::size_t a = 0; a < active.size(); ++a) {
          const std::size_t j = active[a];
          const double offset = 0.5 * static_cast<double>(idx[a] - local_points / 2) * radius[a];
          point[j] = std::clamp(center[j] + offset, lo[j], hi[j]);
        }
        const double v = f(std::span<const double>(point));
        if (v < next_value) {
          next_value = v;
          next = point;
        }
      } while (detail::next_index(idx, local_points));

      center = std::move(next);
      value = next_value;
      for (double& r : radius) r *= cfg.refine_shrink;
    }
    result = std::min(result, value);
  }
  return result;
}

template <class F>
double maximize_on_box(F&& f, std::span<const double> lo, std::span<const double> hi, const OptimizerConfig& cfg) {
  return -minimize_on_box([&](std::span<const double> p) { return -f(p); }, lo, hi, cfg);
}

}  // namespace mmreach
