#pragma once

// Simulation-based ground truth for reachable sets.
//
// Disturbance signals are piecewise constant with `dist_segments` equal
// segments, each level uniform in W. Every segment is integrated with its own
// fixed RK4 step so that no step straddles a switching time; this keeps
// backward/forward round trips accurate to the integrator error.

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmreach/core.hpp"
#include "mmreach/embedding.hpp"
#include "mmreach/parallel.hpp"
#include "mmreach/random.hpp"
#include "mmreach/systems.hpp"

namespace mmreach {

struct OracleConfig {
  int samples = 10000;
  int dist_segments = 8;
  std::uint64_t seed = 0;
  IntegratorConfig integrator;

  void validate() const {
    if (samples < 1) throw ConfigError("oracle: samples must be >= 1");
    if (dist_segments < 1) throw ConfigError("oracle: dist_segments must be >= 1");
    integrator.validate();
  }
};

// Piecewise-constant signal on [0, T]: levels[k] holds on segment k.
struct DisturbanceSignal {
  std::vector<Vector> levels;

  static DisturbanceSignal sample(Rng& rng, const Box& W, int segments) {
    DisturbanceSignal s;
    for (int k = 0; k < segments; ++k) s.levels.push_back(rng.in_box(W));
    return s;
  }

  // t -> w(T - t)
  DisturbanceSignal reversed() const {
    return {std::vector<Vector>(levels.rbegin(), levels.rend())};
  }
};

// x(T) of xdot = F(x, w(t)); nullopt if the trajectory leaves X or overflows.
inline std::optional<Vector> simulate(const SystemSpec& sys, const Vector& x0, const DisturbanceSignal& w, double T,
                                      const IntegratorConfig& cfg) {
  detail::require_same_size(x0.size(), static_cast<std::size_t>(sys.n()), "simulate");
  if (w.levels.empty()) throw ConfigError("simulate: signal has no segments");
  const auto n = static_cast<std::size_t>(sys.n());
  Vector x = x0;
  if (T == 0.0) return x;

  const double seg = T / static_cast<double>(w.levels.size());
  const auto sub = static_cast<std::int64_t>(std::max(1.0, std::ceil(seg / cfg.step - 1e-9)));
  const double h = seg / static_cast<double>(sub);
  Vector slots(n + static_cast<std::size_t>(sys.m()));
  Vector k1(n), k2(n), k3(n), k4(n);
  auto deriv = [&](const Vector& at, Vector& out) {
    std::copy(at.begin(), at.end(), slots.begin());
    for (int i = 0; i < sys.n(); ++i) out[static_cast<std::size_t>(i)] = sys.eval_component(i, slots.data());
  };
  Vector tmp(n);
  try {
    for (const Vector& level : w.levels) {
      std::copy(level.begin(), level.end(), slots.begin() + static_cast<std::ptrdiff_t>(n));
      for (std::int64_t k = 0; k < sub; ++k) {
        deriv(x, k1);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + 0.5 * h * k1[j];
        deriv(tmp, k2);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + 0.5 * h * k2[j];
        deriv(tmp, k3);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + h * k3[j];
        deriv(tmp, k4);
        for (std::size_t j = 0; j < n; ++j) x[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        if (!detail::all_finite(x) || !box_contains(sys.domain(), x)) return std::nullopt;
      }
    }
  } catch (const DomainError&) {
    return std::nullopt;
  }
  return x;
}

struct McReachResult {
  std::vector<Vector> endpoints;
  std::optional<Box> bounding_box;  // absent when every trajectory exited X
  std::vector<Vector> exited;       // initial states whose trajectories left X
};

inline std::optional<Box> bounding_box(const std::vector<Vector>& pts) {
  if (pts.empty()) return std::nullopt;
  Vector lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      lo[j] = std::min(lo[j], p[j]);
      hi[j] = std::max(hi[j], p[j]);
    }
  }
  return Box(std::move(lo), std::move(hi));
}

// Monte Carlo forward reachable set: all 2^n corners of X0 plus cfg.samples
// uniform initial states, each with its own sampled signal.
inline McReachResult mc_reach(const SystemSpec& sys, const Box& X0, double T, const OracleConfig& cfg) {
  cfg.validate();
  detail::require_same_size(X0.dim(), static_cast<std::size_t>(sys.n()), "mc_reach");
  if (!(T >= 0.0)) throw ConfigError("mc_reach: horizon must be >= 0");

  const std::vector<Vector> corners = box_corners(X0);
  const std::size_t total = corners.size() + static_cast<std::size_t>(cfg.samples);
  std::vector<Vector> start(total);
  std::vector<std::optional<Vector>> end(total);
  parallel_for(total, [&](std::size_t s) {
    Rng rng(cfg.seed, s);
    start[s] = s < corners.size() ? corners[s] : rng.in_box(X0);
    const auto w = DisturbanceSignal::sample(rng, sys.disturbance(), cfg.dist_segments);
    end[s] = simulate(sys, start[s], w, T, cfg.integrator);
  });

  McReachResult r;
  for (std::size_t s = 0; s < total; ++s) {
    if (end[s]) {
      r.endpoints.push_back(std::move(*end[s]));
    } else {
      r.exited.push_back(start[s]);
    }
  }
  r.bounding_box = bounding_box(r.endpoints);
  return r;
}

struct OverCheckReport {
  int endpoints = 0;
  int outside = 0;
  double worst_excess = 0.0;  // largest distance of an endpoint outside the box
  bool vacuous = false;
  bool pass = false;
};

// Distance by which p lies outside b (0 inside), in the max norm.
inline double excess_outside(const Box& b, std::span<const double> p) {
  double e = 0.0;
  for (std::size_t j = 0; j < b.dim(); ++j) e = std::max({e, b.lower[j] - p[j], p[j] - b.upper[j]});
  return e;
}

inline OverCheckReport check_over(const Box& box, const std::vector<Vector>& endpoints, double tol) {
  if (!(tol >= 0.0)) throw ConfigError("check_over: tol must be >= 0");
  OverCheckReport r;
  r.endpoints = static_cast<int>(endpoints.size());
  r.vacuous = endpoints.empty();
  for (const auto& p : endpoints) {
    const double e = excess_outside(box, p);
    r.worst_excess = std::max(r.worst_excess, e);
    if (e > tol) ++r.outside;
  }
  r.pass = r.outside == 0;
  return r;
}

struct RoundtripReport {
  int probes = 0;
  int failures = 0;
  int no_admissible_signal = 0;
  double worst_x0_excess = 0.0;
  double worst_roundtrip_error = 0.0;
  bool pass = false;
};

struct RoundtripOptions {
  double tol = 1e-3;     // slack on "backward endpoint lies in X0"
  double tol_rt = 1e-3;  // slack on "forward replay returns to the probe"
  int retries = 5;
};

// Constructive check of an under-approximation: every probe y in the box is
// integrated backward under a sampled signal w'; the endpoint x must lie in
// X0, and integrating forward from x under t -> w'(T - t) must return to y.
// Probes are the box corners plus n_probe uniform points.
inline RoundtripReport roundtrip_under_check(const SystemSpec& sys, const Box& under_box, const Box& X0, double T,
                                             int n_probe, const OracleConfig& cfg, RoundtripOptions opt = {}) {
  cfg.validate();
  if (n_probe < 1) throw ConfigError("roundtrip_under_check: n_probe must be >= 1");
  detail::require_same_size(under_box.dim(), static_cast<std::size_t>(sys.n()), "roundtrip_under_check");
  const SystemSpec backward = negate_system(sys);

  std::vector<Vector> probes = box_corners(under_box);
  const std::size_t n_corners = probes.size();
  probes.resize(n_corners + static_cast<std::size_t>(n_probe));

  struct Local {
    bool admissible = false;
    bool fail = false;
    double x0_excess = 0.0;
    double rt_error = 0.0;
  };
  std::vector<Local> local(probes.size());
  parallel_for(probes.size(), [&](std::size_t s) {
    Rng rng(cfg.seed ^ 0x5bd1e995ULL, s);
    if (s >= n_corners) probes[s] = rng.in_box(under_box);
    const Vector& y = probes[s];
    Local& out = local[s];
    for (int attempt = 0; attempt < opt.retries; ++attempt) {
      const auto w = DisturbanceSignal::sample(rng, sys.disturbance(), cfg.dist_segments);
      const auto x = simulate(backward, y, w, T, cfg.integrator);
      if (!x) continue;
      out.admissible = true;
      out.x0_excess = excess_outside(X0, *x);
      const auto back = simulate(sys, *x, w.reversed(), T, cfg.integrator);
      if (!back) {
        out.fail = true;
        out.rt_error = std::numeric_limits<double>::infinity();
        return;
      }
      for (std::size_t j = 0; j < y.size(); ++j) out.rt_error = std::max(out.rt_error, std::abs((*back)[j] - y[j]));
      out.fail = out.x0_excess > opt.tol || out.rt_error > opt.tol_rt;
      return;
    }
  });

  RoundtripReport r;
  r.probes = static_cast<int>(probes.size());
  for (const auto& l : local) {
    if (!l.admissible) {
      ++r.no_admissible_signal;
      ++r.failures;
      continue;
    }
    r.failures += l.fail ? 1 : 0;
    r.worst_x0_excess = std::max(r.worst_x0_excess, l.x0_excess);
    r.worst_roundtrip_error = std::max(r.worst_roundtrip_error, l.rt_error);
  }
  r.pass = r.failures == 0;
  return r;
}

// One row per endpoint, header x1..xn.
inline void write_endpoints_csv(std::ostream& os, const std::vector<Vector>& endpoints, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) os << (j ? "," : "") << "x" << (j + 1);
  os << "\n";
  os.precision(17);
  for (const auto& p : endpoints) {
    for (std::size_t j = 0; j < p.size(); ++j) os << (j ? "," : "") << p[j];
    os << "\n";
  }
}

inline void to_json(nlohmann::json& j, const OverCheckReport& r) {
  j = {{"endpoints", r.endpoints}, {"outside", r.outside}, {"worst_excess", r.worst_excess},
       {"vacuous", r.vacuous},     {"pass", r.pass}};
}

inline void to_json(nlohmann::json& j, const RoundtripReport& r) {
  j = {{"probes", r.probes},
       {"failures", r.failures},
       {"no_admissible_signal", r.no_admissible_signal},
       {"worst_x0_excess", r.worst_x0_excess},
       {"worst_roundtrip_error", r.worst_roundtrip_error},
       {"pass", r.pass}};
}

}  // namespace mmreach
