#pragma once

// Decomposition functions d(x, w, xhat, what) defined on the ordered set
//   T = {(x, w, xhat, what) : (x <= xhat and w <= what) or (xhat <= x and what <= w)}.
//
// Variants: the tight construction by on-demand box optimization, hand-derived
// closed forms for the built-in systems, the backward-time transform
// D(x, w, xhat, what) = -d(xhat, what, x, w), and user expressions.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmreach/core.hpp"
#include "mmreach/expr.hpp"
#include "mmreach/optimize.hpp"
#include "mmreach/parallel.hpp"
#include "mmreach/random.hpp"
#include "mmreach/systems.hpp"

namespace mmreach {

enum class DecompositionKind { closed_form, numeric_tight, backward_special_case, backward_numeric, user_defined };

inline std::string to_string(DecompositionKind k) {
  switch (k) {
    case DecompositionKind::closed_form: return "closed_form";
    case DecompositionKind::numeric_tight: return "numeric_tight";
    case DecompositionKind::backward_special_case: return "backward_special_case";
    case DecompositionKind::backward_numeric: return "backward_numeric";
    case DecompositionKind::user_defined: return "user_defined";
  }
  return "unknown";
}

enum class Orientation { diagonal, ordered, reversed };

// Classifies a 4-tuple; tuples outside T are rejected.
inline Orientation classify(std::span<const double> x, std::span<const double> w, std::span<const double> xh,
                            std::span<const double> wh) {
  detail::require_same_size(x.size(), xh.size(), "decomposition: x/xhat");
  detail::require_same_size(w.size(), wh.size(), "decomposition: w/what");
  const bool fwd = le(x, xh) && le(w, wh);
  const bool bwd = le(xh, x) && le(wh, w);
  if (fwd && bwd) return Orientation::diagonal;
  if (fwd) return Orientation::ordered;
  if (bwd) return Orientation::reversed;
  throw OrderViolationError(
      "decomposition argument not in T: need (x <= xhat and w <= what) or (xhat <= x and what <= w)");
}

class DecompositionEvaluator {
 public:
  using Fn = std::function<Vector(std::span<const double> x, std::span<const double> w, std::span<const double> xh,
                                  std::span<const double> wh, Orientation)>;

  DecompositionEvaluator(DecompositionKind kind, SystemPtr system, std::string label, Fn fn,
                         OptimizerConfig cfg = {}, bool unsound = false)
      : kind_(kind),
        system_(std::move(system)),
        label_(std::move(label)),
        fn_(std::move(fn)),
        config_(cfg),
        unsound_(unsound) {}

  // Validates dimensions and T membership, then evaluates.
  Vector operator()(std::span<const double> x, std::span<const double> w, std::span<const double> xh,
                    std::span<const double> wh) const {
    detail::require_same_size(x.size(), static_cast<std::size_t>(system_->n()), "decomposition: x");
    detail::require_same_size(w.size(), static_cast<std::size_t>(system_->m()), "decomposition: w");
    const Orientation o = classify(x, w, xh, wh);
    return fn_(x, w, xh, wh, o);
  }

  DecompositionKind kind() const { return kind_; }
  const SystemPtr& system() const { return system_; }
  const std::string& label() const { return label_; }
  const OptimizerConfig& config() const { return config_; }
  // Set when a backward transform was forced without its hypothesis.
  bool unsound() const { return unsound_; }

 private:
  DecompositionKind kind_;
  SystemPtr system_;
  std::string label_;
  Fn fn_;
  OptimizerConfig config_;
  bool unsound_;
};

namespace detail {

// Free coordinates of the slice for component i: state axes j != i and
// disturbance axes that occur in F_i. Other coordinates cannot change F_i.
struct Slice {
  std::vector<int> slot;  // index into [x (n), w (m)]
  Vector lo;
  Vector hi;
};

inline Slice make_slice(const SystemSpec& sys, int i, std::span<const double> x, std::span<const double> w,
                        std::span<const double> xh, std::span<const double> wh) {
  Slice s;
  const Expr& fi = sys.field(i);
  for (int j = 0; j < sys.n(); ++j) {
    if (j == i || !occurs(fi, Op::state_var, j)) continue;
    const auto uj = static_cast<std::size_t>(j);
    s.slot.push_back(j);
    s.lo.push_back(std::min(x[uj], xh[uj]));
    s.hi.push_back(std::max(x[uj], xh[uj]));
  }
  for (int k = 0; k < sys.m(); ++k) {
    if (!occurs(fi, Op::dist_var, k)) continue;
    const auto uk = static_cast<std::size_t>(k);
    s.slot.push_back(sys.n() + k);
    s.lo.push_back(std::min(w[uk], wh[uk]));
    s.hi.push_back(std::max(w[uk], wh[uk]));
  }
  return s;
}

inline void require_finite_args(std::span<const double> x, std::span<const double> w, std::span<const double> xh,
                                std::span<const double> wh) {
  if (!all_finite(x) || !all_finite(w) || !all_finite(xh) || !all_finite(wh)) {
    throw UnboundedDomainError("decomposition slice has an infinite endpoint");
  }
}

}  // namespace detail

// Tight decomposition value: for each i, the minimum (ordered orientation) or
// maximum (reversed orientation) of F_i over {y in [x, xhat] : y_i = x_i} x [w, what].
// Diagonal arguments return F(x, w) exactly.
inline Vector tight_decomp_eval(const SystemSpec& sys, std::span<const double> x, std::span<const double> w,
                                std::span<const double> xh, std::span<const double> wh,
                                const OptimizerConfig& cfg = {}) {
  detail::require_same_size(x.size(), static_cast<std::size_t>(sys.n()), "tight_decomp_eval: x");
  detail::require_same_size(w.size(), static_cast<std::size_t>(sys.m()), "tight_decomp_eval: w");
  const Orientation o = classify(x, w, xh, wh);
  detail::require_finite_args(x, w, xh, wh);
  if (o == Orientation::diagonal) return eval_field(sys, x, w);

  cfg.validate();
  Vector out(static_cast<std::size_t>(sys.n()));
  Vector slots = slots_of(x, w);
  for (int i = 0; i < sys.n(); ++i) {
    const detail::Slice s = detail::make_slice(sys, i, x, w, xh, wh);
    slots = slots_of(x, w);
    auto objective = [&](std::span<const double> p) {
      for (std::size_t a = 0; a < p.size(); ++a) slots[static_cast<std::size_t>(s.slot[a])] = p[a];
      return sys.eval_component(i, slots.data());
    };
    out[static_cast<std::size_t>(i)] = o == Orientation::ordered ? minimize_on_box(objective, s.lo, s.hi, cfg)
                                                                 : maximize_on_box(objective, s.lo, s.hi, cfg);
  }
  return out;
}

// Exhaustive grid evaluation of the same min/max, `grid_per_axis` points per
// free slice axis. Test oracle only; cost grows as grid^(free axes).
inline Vector brute_force_decomp_oracle(const SystemSpec& sys, std::span<const double> x, std::span<const double> w,
                                        std::span<const double> xh, std::span<const double> wh, int grid_per_axis) {
  if (grid_per_axis < 2) throw ConfigError("brute_force_decomp_oracle: grid_per_axis must be >= 2");
  detail::require_same_size(x.size(), static_cast<std::size_t>(sys.n()), "brute_force_decomp_oracle: x");
  detail::require_same_size(w.size(), static_cast<std::size_t>(sys.m()), "brute_force_decomp_oracle: w");
  const Orientation o = classify(x, w, xh, wh);
  detail::require_finite_args(x, w, xh, wh);
  const bool minimize = o != Orientation::reversed;

  Vector out(static_cast<std::size_t>(sys.n()));
  Vector slots = slots_of(x, w);
  for (int i = 0; i < sys.n(); ++i) {
    const detail::Slice s = detail::make_slice(sys, i, x, w, xh, wh);
    const std::size_t d = s.slot.size();
    std::vector<int> count(d);
    for (std::size_t a = 0; a < d; ++a) count[a] = s.hi[a] > s.lo[a] ? grid_per_axis : 1;
    std::vector<int> idx(d, 0);
    double best = minimize ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    for (;;) {
      for (std::size_t a = 0; a < d; ++a) {
        const double t = count[a] == 1 ? 0.0 : static_cast<double>(idx[a]) / static_cast<double>(count[a] - 1);
        slots[static_cast<std::size_t>(s.slot[a])] = idx[a] == count[a] - 1 ? s.hi[a] : s.lo[a] + t * (s.hi[a] - s.lo[a]);
      }
      const double v = sys.eval_component(i, slots.data());
      best = minimize ? std::min(best, v) : std::max(best, v);
      std::size_t a = 0;
      for (; a < d; ++a) {
        if (++idx[a] < count[a]) break;
        idx[a] = 0;
      }
      if (a == d) break;
    }
    slots = slots_of(x, w);
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

inline DecompositionEvaluator make_numeric_tight(SystemPtr sys, OptimizerConfig cfg = {}) {
  cfg.validate();
  const SystemSpec* raw = sys.get();
  return DecompositionEvaluator(
      DecompositionKind::numeric_tight, sys, "tight(" + sys->name() + ")",
      [raw, cfg](auto x, auto w, auto xh, auto wh, Orientation) { return tight_decomp_eval(*raw, x, w, xh, wh, cfg); },
      cfg);
}

// Tight decomposition of the backward-time system -F, computed numerically.
inline DecompositionEvaluator make_backward_numeric(const SystemSpec& sys, OptimizerConfig cfg = {}) {
  auto backward = std::make_shared<const SystemSpec>(negate_system(sys));
  auto d = make_numeric_tight(backward, cfg);
  return DecompositionEvaluator(DecompositionKind::backward_numeric, backward, "tight(" + backward->name() + ")",
                                [d](auto x, auto w, auto xh, auto wh, Orientation) { return d(x, w, xh, wh); },
                                cfg);
}

namespace closed_forms {

// Both closed forms below are written for the ordered orientation, but the
// same case split (tested in order) also yields the maximum over the reversed
// slice, so they are used verbatim for either orientation.

inline Vector abs2d(std::span<const double> x, std::span<const double>, std::span<const double> xh,
                    std::span<const double>) {
  double d1 = 0.0;
  if (x[1] <= x[0] && x[0] <= xh[1]) {
    d1 = 0.0;
  } else if (2.0 * x[0] <= std::min(2.0 * x[1], x[1] + xh[1])) {
    d1 = x[1] - x[0];
  } else if (2.0 * x[0] >= std::min(2.0 * xh[1], x[1] + xh[1])) {
    d1 = x[0] - xh[1];
  } else {
    throw std::logic_error("abs2d closed form: no case applies");
  }
  return {d1, -xh[0]};
}

// Uses x2 / xhat2 in the endpoint cases (the field is w1*x2^2 - x2 + w2).
inline Vector poly3d(std::span<const double> x, std::span<const double> w, std::span<const double> xh,
                     std::span<const double> wh) {
  const double w1 = w[0];
  const double w2 = w[1];
  const double a = w1 * x[1];
  const double b = w1 * xh[1];
  const double s = w1 * (x[1] + xh[1]);
  double d1 = 0.0;
  if (a <= 0.5 && 0.5 <= b) {
    d1 = -1.0 / (4.0 * w1) + w2;
  } else if ((0.5 <= a && a <= b) || 1.0 <= s) {
    d1 = w1 * x[1] * x[1] - x[1] + w2;
  } else if ((a <= b && b <= 0.5) || s <= 1.0) {
    d1 = w1 * xh[1] * xh[1] - xh[1] + w2;
  } else {
    throw std::logic_error("poly3d closed form: no case applies");
  }
  const double wh1 = wh[0];
  return {d1, x[2] + 2.0, x[0] - xh[1] - wh1 * wh1 * wh1};
}

}  // namespace closed_forms

inline std::vector<std::string> closed_form_names() { return {"abs2d", "poly3d"}; }

// `sys` overrides the registered system (e.g. the same field with a
// different disturbance box); it must carry the same closed-form tag.
inline DecompositionEvaluator closed_form_decomp(const std::string& name, SystemPtr sys = nullptr) {
  using Raw = Vector (*)(std::span<const double>, std::span<const double>, std::span<const double>,
                         std::span<const double>);
  Raw raw = nullptr;
  if (name == "abs2d") raw = &closed_forms::abs2d;
  if (name == "poly3d") raw = &closed_forms::poly3d;
  if (raw == nullptr) throw UnknownNameError("no closed-form decomposition named '" + name + "'");
  if (!sys) {
    sys = std::make_shared<const SystemSpec>(builtin(name));
  } else if (sys->closed_form() != name) {
    throw UnknownNameError("closed form '" + name + "' does not apply to system '" + sys->name() + "'");
  }
  return DecompositionEvaluator(DecompositionKind::closed_form, sys, "closed(" + name + ")",
                                [raw](auto x, auto w, auto xh, auto wh, Orientation) { return raw(x, w, xh, wh); });
}

// D(x, w, xhat, what) = -d(xhat, what, x, w), a tight decomposition of the
// backward-time system when d is tight and no F_i depends on x_i. Without
// that hypothesis the call fails unless `force` is set, in which case the
// evaluator is marked unsound.
inline DecompositionEvaluator backward_special_case(const DecompositionEvaluator& delta, bool force = false) {
  const auto report = check_special_case(*delta.system());
  if (!report.overall && !force) {
    std::string which;
    for (std::size_t i = 0; i < report.per_component.size(); ++i) {
      if (!report.per_component[i]) which += (which.empty() ? "" : ", ") + ("F" + std::to_string(i + 1));
    }
    throw PreconditionError("backward transform needs F_i independent of x_i; violated by " + which);
  }
  auto backward = std::make_shared<const SystemSpec>(negate_system(*delta.system()));
  return DecompositionEvaluator(
      DecompositionKind::backward_special_case, backward, "backward(" + delta.label() + ")",
      [delta](auto x, auto w, auto xh, auto wh, Orientation) {
        Vector v = delta(xh, wh, x, w);
        for (double& c : v) c = -c;
        return v;
      },
      delta.config(), !report.overall || delta.unsound());
}

// Decomposition given as expressions over x1.., w1.., xh1.., wh1...
inline DecompositionEvaluator make_user_decomposition(SystemPtr sys, std::vector<Expr> components,
                                                      std::string label = "user") {
  if (static_cast<int>(components.size()) != sys->n()) {
    throw DimensionError("user decomposition needs " + std::to_string(sys->n()) + " components");
  }
  std::vector<Program> programs;
  for (const auto& e : components) programs.emplace_back(e, sys->n(), sys->m());
  const int n = sys->n();
  const int m = sys->m();
  return DecompositionEvaluator(
      DecompositionKind::user_defined, std::move(sys), std::move(label),
      [programs, n, m](auto x, auto w, auto xh, auto wh, Orientation) {
        Vector slots(x.begin(), x.end());
        slots.insert(slots.end(), w.begin(), w.end());
        slots.insert(slots.end(), xh.begin(), xh.end());
        slots.insert(slots.end(), wh.begin(), wh.end());
        Vector out(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = programs[static_cast<std::size_t>(i)].eval(slots.data());
        (void)m;
        return out;
      });
}

inline DecompositionEvaluator make_user_decomposition(SystemPtr sys, const std::vector<std::string>& texts,
                                                      std::string label = "user") {
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    comps.push_back(parse_expr(texts[i], {sys->n(), sys->m(), true}, "decomposition[" + std::to_string(i) + "]"));
  }
  return make_user_decomposition(std::move(sys), std::move(comps), std::move(label));
}

// Reads the "decomposition" key of a system config.
inline DecompositionEvaluator parse_user_decomposition(const std::string& config_text, SystemPtr sys) {
  const auto j = detail::parse_json_text(config_text);
  if (!j.is_object() || !j.contains("decomposition")) throw ConfigError("config has no \"decomposition\" key");
  auto comps = detail::parse_expr_list(j.at("decomposition"), "decomposition", {sys->n(), sys->m(), true},
                                       static_cast<std::size_t>(sys->n()));
  const std::string label = j.contains("decomposition_name") ? j.at("decomposition_name").get<std::string>() : "user";
  return make_user_decomposition(std::move(sys), std::move(comps), label);
}

// Valid but deliberately loose decomposition for abs2d, used as the
// comparison baseline when checking that the tight one gives smaller boxes.
inline std::vector<std::string> abs2d_loose_decomposition() {
  return {"max(x1 - xh2, x2 - x1) - 0.5*(xh2 - x2)", "-xh1 - 0.5*(xh1 - x1)"};
}

// ---------------------------------------------------------------- checks ---

// Sampling region for a system: X clipped to a cube of half-width `half`.
inline Box default_sample_box(const SystemSpec& sys, double half = 2.0) {
  return sys.domain().clip(Box::cube(static_cast<std::size_t>(sys.n()), -half, half));
}

struct Condition1Report {
  int samples = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// max over sampled (x, w) of |d(x, w, x, w) - F(x, w)|_inf.
inline Condition1Report check_condition1(const DecompositionEvaluator& d, const SystemSpec& sys, int samples,
                                         std::uint64_t seed = 1, double tolerance = 1e-9,
                                         std::optional<Box> region = std::nullopt) {
  if (samples < 1) throw ConfigError("check_condition1: samples must be >= 1");
  const Box box = region ? *region : default_sample_box(sys, 5.0);
  std::vector<double> err(static_cast<std::size_t>(samples));
  parallel_for(err.size(), [&](std::size_t s) {
    Rng rng(seed, s);
    const Vector x = rng.in_box(box);
    const Vector w = rng.in_box(sys.disturbance());
    const Vector got = d(x, w, x, w);
    const Vector want = eval_field(sys, x, w);
    double e = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) e = std::max(e, std::abs(got[i] - want[i]));
    err[s] = e;
  });
  Condition1Report r;
  r.samples = samples;
  r.tolerance = tolerance;
  for (double e : err) r.max_error = std::max(r.max_error, e);
  r.pass = r.max_error <= tolerance;
  return r;
}

struct KamkeReport {
  int samples = 0;
  int checks = 0;
  int violations = 0;
  // Largest lhs - rhs over all checked inequalities (<= slack means pass).
  double worst_margin = -std::numeric_limits<double>::infinity();
  double slack = 0.0;
  bool pass() const { return violations == 0; }
};

// Sampled Kamke conditions:
//   C1: d_i(x, w, xh, wh) <= d_i(y, v, xh, wh) for x <= y, y_i = x_i, w <= v
//   C2: d_i(x, w, yh, vh) <= d_i(x, w, xh, wh) for xh <= yh, wh <= vh
// with every perturbed tuple kept inside T, the sample region and W.
inline KamkeReport check_kamke(const DecompositionEvaluator& d, int samples, std::uint64_t seed = 2,
                               double slack = 1e-9, std::optional<Box> region = std::nullopt) {
  if (samples < 1) throw ConfigError("check_kamke: samples must be >= 1");
  const SystemSpec& sys = *d.system();
  const Box box = region ? *region : default_sample_box(sys);
  const Box& wbox = sys.disturbance();
  const auto n = static_cast<std::size_t>(sys.n());

  struct Local {
    int checks = 0;
    int violations = 0;
    double worst = -std::numeric_limits<double>::infinity();
  };
  std::vector<Local> local(static_cast<std::size_t>(samples));

  parallel_for(local.size(), [&](std::size_t s) {
    Rng rng(seed, s);
    Local& out = local[s];
    auto record = [&](double lhs, double rhs) {
      const double margin = lhs - rhs;
      ++out.checks;
      out.worst = std::max(out.worst, margin);
      if (margin > slack) ++out.violations;
    };

    const bool ordered = rng.coin();
    Vector p = rng.in_box(box), q = rng.in_box(box);
    Vector pw = rng.in_box(wbox), qw = rng.in_box(wbox);
    Vector lo(n), hi(n), wlo(pw.size()), whi(pw.size());
    for (std::size_t j = 0; j < n; ++j) {
      lo[j] = std::min(p[j], q[j]);
      hi[j] = std::max(p[j], q[j]);
    }
    for (std::size_t k = 0; k < pw.size(); ++k) {
      wlo[k] = std::min(pw[k], qw[k]);
      whi[k] = std::max(pw[k], qw[k]);
    }
    const Vector& x = ordered ? lo : hi;
    const Vector& xh = ordered ? hi : lo;
    const Vector& w = ordered ? wlo : whi;
    const Vector& wh = ordered ? whi : wlo;
    const Vector base = d(x, w, xh, wh);

    for (std::size_t i = 0; i < n; ++i) {
      // C1: raise (x, w) with x_i pinned.
      Vector y = ordered ? rng.between(x, xh) : rng.between(x, box.upper);
      y[i] = x[i];
      const Vector v = ordered ? rng.between(w, wh) : rng.between(w, wbox.upper);
      record(base[i], d(y, v, xh, wh)[i]);

      // C2: raise (xh, wh).
      const Vector yh = ordered ? rng.between(xh, box.upper) : rng.between(xh, x);
      const Vector vh = ordered ? rng.between(wh, wbox.upper) : rng.between(wh, w);
      record(d(x, w, yh, vh)[i], base[i]);
    }
  });

  KamkeReport r;
  r.samples = samples;
  r.slack = slack;
  for (const auto& l : local) {
    r.checks += l.checks;
    r.violations += l.violations;
    r.worst_margin = std::max(r.worst_margin, l.worst);
  }
  return r;
}

}  // namespace mmreach
