#pragma once

// Embedding systems on T_X = {(x, xhat) : x <= xhat} and their integration.
//
//   over:  (xdot, xhatdot) = (d(x, wlo, xhat, whi), d(xhat, whi, x, wlo))
//   under: (xdot, xhatdot) = (-D(x, wlo, xhat, whi), -D(xhat, whi, x, wlo))
//
// where d decomposes F and D decomposes the backward-time field -F. The box
// spanned by the final state over-approximates (resp. under-approximates,
// while the flow stays in T_X) the reachable set from the initial box.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmreach/core.hpp"
#include "mmreach/decomposition.hpp"
#include "mmreach/parallel.hpp"
#include "mmreach/random.hpp"
#include "mmreach/systems.hpp"

namespace mmreach {

struct IntegratorConfig {
  double step = 1e-3;
  double max_time = 1e6;

  void validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("integrator: step must be > 0");
    if (!(max_time >= step)) throw ConfigError("integrator: step must be <= max_time");
  }
};

enum class ReachStatus { ok, left_domain, left_TX, nonfinite };

inline std::string to_string(ReachStatus s) {
  switch (s) {
    case ReachStatus::ok: return "ok";
    case ReachStatus::left_domain: return "left_domain";
    case ReachStatus::left_TX: return "left_TX";
    case ReachStatus::nonfinite: return "nonfinite";
  }
  return "unknown";
}

struct TrajectoryPoint {
  double t = 0.0;
  EmbeddingState state;
};

struct ReachResult {
  ReachStatus status = ReachStatus::ok;
  std::optional<Box> box;  // present iff status == ok
  std::optional<double> exit_time;
  EmbeddingState final_state;
  std::vector<TrajectoryPoint> trajectory;

  bool ok() const { return status == ReachStatus::ok; }
};

// Classifies integrator states: order violations up to this size are rounding.
inline constexpr double tx_tolerance = 1e-9;

// Flat 2n-dimensional vector field over (x, xhat).
using EmbeddingField = std::function<Vector(const EmbeddingState&)>;

namespace detail {

inline void require_w(const Box& W, const DecompositionEvaluator& d) {
  detail::require_same_size(W.dim(), static_cast<std::size_t>(d.system()->m()), "embedding: disturbance box");
}

inline Vector concat(Vector a, const Vector& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Coordinates with x_j > xhat_j are collapsed to their midpoint so the
// decomposition is evaluated inside T_X; the integrator decides separately
// whether the violation is real.
inline EmbeddingState project_to_TX(const EmbeddingState& s) {
  EmbeddingState p = s;
  for (std::size_t j = 0; j < p.x.size(); ++j) {
    if (p.x[j] > p.xhat[j]) p.x[j] = p.xhat[j] = 0.5 * (s.x[j] + s.xhat[j]);
  }
  return p;
}

}  // namespace detail

inline Vector embedding_field(const DecompositionEvaluator& d, const Box& W, const EmbeddingState& s) {
  detail::require_w(W, d);
  if (!s.in_TX()) throw OrderViolationError("embedding_field: state not in T_X");
  return detail::concat(d(s.x, W.lower, s.xhat, W.upper), d(s.xhat, W.upper, s.x, W.lower));
}

inline Vector gamma_field(const DecompositionEvaluator& D, const Box& W, const EmbeddingState& s) {
  Vector v = embedding_field(D, W, s);
  for (double& c : v) c = -c;
  return v;
}

inline EmbeddingField make_embedding_field(DecompositionEvaluator d, Box W) {
  detail::require_w(W, d);
  return [d = std::move(d), W = std::move(W)](const EmbeddingState& s) {
    return embedding_field(d, W, detail::project_to_TX(s));
  };
}

inline EmbeddingField make_gamma_field(DecompositionEvaluator D, Box W) {
  detail::require_w(W, D);
  return [D = std::move(D), W = std::move(W)](const EmbeddingState& s) {
    return gamma_field(D, W, detail::project_to_TX(s));
  };
}

// Fixed-step classical RK4 from s0 over [0, T]. The step is h = T / ceil(T / cfg.step)
// so the last step lands on T. Stops early with left_domain if either block
// leaves X, nonfinite on overflow/NaN, and (when monitor_TX) left_TX once
// x <= xhat has failed by more than tx_tolerance on two consecutive steps
// (or on the final step).
inline ReachResult integrate(const EmbeddingField& field, const EmbeddingState& s0, double T,
                             const IntegratorConfig& cfg, bool monitor_TX, const ExtendedBox& X) {
  cfg.validate();
  if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("integrate: horizon must be finite and >= 0");
  if (T > cfg.max_time) throw ConfigError("integrate: horizon exceeds max_time");
  detail::require_same_size(s0.x.size(), s0.xhat.size(), "integrate");
  detail::require_same_size(s0.x.size(), X.dim(), "integrate: domain");
  if (!s0.in_TX()) throw OrderViolationError("integrate: initial state not in T_X");

  ReachResult r;
  r.trajectory.push_back({0.0, s0});
  r.final_state = s0;
  if (T == 0.0) {
    r.box = rect(s0);
    return r;
  }

  const auto steps = static_cast<std::int64_t>(std::ceil(T / cfg.step - 1e-9));
  const double h = T / static_cast<double>(steps);
  const std::int64_t stride = std::max<std::int64_t>(1, (steps + 999) / 1000);
  const std::size_t n = s0.x.size();

  Vector y = s0.flat();
  Vector tmp(2 * n);
  auto eval = [&](const Vector& v) { return field(EmbeddingState::from_flat(v)); };
  auto fail = [&](ReachStatus st, double t) {
    r.status = st;
    r.exit_time = t;
    r.final_state = EmbeddingState::from_flat(y);
    r.trajectory.push_back({t, r.final_state});
    return r;
  };

  int violating_steps = 0;
  double first_violation = 0.0;
  for (std::int64_t k = 1; k <= steps; ++k) {
    const double t = k == steps ? T : static_cast<double>(k) * h;
    try {
      const Vector k1 = eval(y);
      for (std::size_t j = 0; j < 2 * n; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
      const Vector k2 = eval(tmp);
      for (std::size_t j = 0; j < 2 * n; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
      const Vector k3 = eval(tmp);
      for (std::size_t j = 0; j < 2 * n; ++j) tmp[j] = y[j] + h * k3[j];
      const Vector k4 = eval(tmp);
      for (std::size_t j = 0; j < 2 * n; ++j) y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    } catch (const DomainError&) {
      return fail(ReachStatus::nonfinite, t);
    }

    if (!detail::all_finite(y)) return fail(ReachStatus::nonfinite, t);
    const std::span<const double> lower(y.data(), n);
    const std::span<const double> upper(y.data() + n, n);
    if (!box_contains(X, lower) || !box_contains(X, upper)) return fail(ReachStatus::left_domain, t);

    if (monitor_TX) {
      double viol = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) viol = std::max(viol, y[j] - y[n + j]);
      if (viol > tx_tolerance) {
        if (violating_steps++ == 0) first_violation = t;
        if (violating_steps >= 2 || k == steps) return fail(ReachStatus::left_TX, first_violation);
      } else {
        violating_steps = 0;
      }
    }

    if (k % stride == 0 || k == steps) r.trajectory.push_back({t, EmbeddingState::from_flat(y)});
  }

  r.final_state = EmbeddingState::from_flat(y);
  Vector lo(n), hi(n);
  for (std::size_t j = 0; j < n; ++j) {
    lo[j] = std::min(y[j], y[n + j]);
    hi[j] = std::max(y[j], y[n + j]);
  }
  r.box = Box(std::move(lo), std::move(hi));
  return r;
}

namespace detail {

inline void require_initial_box(const SystemSpec& sys, const Box& X0) {
  detail::require_same_size(X0.dim(), static_cast<std::size_t>(sys.n()), "initial box");
}

}  // namespace detail

// Over-approximation of the time-T reachable set from X0 using decomposition d of F.
inline ReachResult over_approximate(const SystemSpec& sys, const DecompositionEvaluator& d, const Box& X0, double T,
                                    const IntegratorConfig& cfg = {}) {
  detail::require_initial_box(sys, X0);
  return integrate(make_embedding_field(d, sys.disturbance()), EmbeddingState::from_box(X0), T, cfg, true,
                   sys.domain());
}

// Under-approximation from a decomposition D of the backward-time field -F.
// left_TX is a legitimate outcome and then no box is claimed.
inline ReachResult under_approximate(const SystemSpec& sys, const DecompositionEvaluator& D_backward, const Box& X0,
                                     double T, const IntegratorConfig& cfg = {}) {
  detail::require_initial_box(sys, X0);
  return integrate(make_gamma_field(D_backward, sys.disturbance()), EmbeddingState::from_box(X0), T, cfg, true,
                   sys.domain());
}

struct SeMonotonicityReport {
  int pairs = 0;
  int violations = 0;
  int skipped = 0;  // pairs where an integration did not finish with status ok
  double worst_margin = -std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  bool pass() const { return violations == 0; }
};

// Samples (x, xh) <=_SE (y, yh) in T_X, integrates both embedding states for
// time T and checks that the southeast order still holds (within tol).
inline SeMonotonicityReport check_se_monotonicity(const DecompositionEvaluator& d, const Box& W, int pairs, double T,
                                                  const IntegratorConfig& cfg = {}, std::uint64_t seed = 3,
                                                  std::optional<Box> region = std::nullopt, double tol = 1e-6) {
  if (pairs < 1) throw ConfigError("check_se_monotonicity: pairs must be >= 1");
  const SystemSpec& sys = *d.system();
  const Box box = region ? *region : default_sample_box(sys);
  const auto n = static_cast<std::size_t>(sys.n());
  const EmbeddingField field = make_embedding_field(d, W);

  struct Local {
    bool skipped = false;
    bool violated = false;
    double margin = -std::numeric_limits<double>::infinity();
  };
  std::vector<Local> local(static_cast<std::size_t>(pairs));
  parallel_for(local.size(), [&](std::size_t s) {
    Rng rng(seed, s);
    Vector a = rng.in_box(box), b = rng.in_box(box);
    EmbeddingState p{Vector(n), Vector(n)};
    for (std::size_t j = 0; j < n; ++j) {
      p.x[j] = std::min(a[j], b[j]);
      p.xhat[j] = std::max(a[j], b[j]);
    }
    EmbeddingState q;
    if (s == 0) {
      q = p;  // identical pair
    } else {
      q.x = rng.between(p.x, p.xhat);
      q.xhat = rng.between(q.x, p.xhat);
    }
    const ReachResult rp = integrate(field, p, T, cfg, false, sys.domain());
    const ReachResult rq = integrate(field, q, T, cfg, false, sys.domain());
    Local& out = local[s];
    if (!rp.ok() || !rq.ok()) {
      out.skipped = true;
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      out.margin = std::max(out.margin, rp.final_state.x[j] - rq.final_state.x[j]);
      out.margin = std::max(out.margin, rq.final_state.xhat[j] - rp.final_state.xhat[j]);
    }
    out.violated = !se_le(rp.final_state, rq.final_state, tol);
  });

  SeMonotonicityReport r;
  r.pairs = pairs;
  r.tolerance = tol;
  for (const auto& l : local) {
    r.skipped += l.skipped ? 1 : 0;
    r.violations += l.violated ? 1 : 0;
    r.worst_margin = std::max(r.worst_margin, l.margin);
  }
  return r;
}

// ---- JSON: {"status", "box", "exit_time", "trajectory": [{"t", "x", "xhat"}]} ----

inline void to_json(nlohmann::json& j, const ReachResult& r) {
  j = nlohmann::json::object();
  j["status"] = to_string(r.status);
  j["box"] = r.box ? nlohmann::json(*r.box) : nlohmann::json(nullptr);
  j["exit_time"] = r.exit_time ? nlohmann::json(*r.exit_time) : nlohmann::json(nullptr);
  auto traj = nlohmann::json::array();
  for (const auto& p : r.trajectory) traj.push_back({{"t", p.t}, {"x", p.state.x}, {"xhat", p.state.xhat}});
  j["trajectory"] = std::move(traj);
}

}  // namespace mmreach
