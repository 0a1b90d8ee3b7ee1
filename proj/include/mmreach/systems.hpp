#pragma once

// Vector fields F(x, w) over a state domain X and a disturbance box W.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmreach/core.hpp"
#include "mmreach/expr.hpp"

namespace mmreach {

class SystemSpec {
 public:
  SystemSpec(std::string name, int n, int m, ExtendedBox domain, Box disturbance, std::vector<Expr> field,
             std::optional<std::string> closed_form = std::nullopt)
      : name_(std::move(name)),
        n_(n),
        m_(m),
        domain_(std::move(domain)),
        disturbance_(std::move(disturbance)),
        field_(std::move(field)),
        closed_form_(std::move(closed_form)) {
    if (n_ < 1) throw ConfigError("system '" + name_ + "': n must be >= 1");
    if (m_ < 0) throw ConfigError("system '" + name_ + "': m must be >= 0");
    if (static_cast<int>(domain_.dim()) != n_) throw DimensionError("system '" + name_ + "': domain has wrong dimension");
    if (static_cast<int>(disturbance_.dim()) != m_) {
      throw DimensionError("system '" + name_ + "': disturbance box has wrong dimension");
    }
    if (static_cast<int>(field_.size()) != n_) throw DimensionError("system '" + name_ + "': field needs n components");
    if (!domain_.has_nonempty_interior()) throw ConfigError("system '" + name_ + "': domain has empty interior");
    programs_.reserve(field_.size());
    for (const auto& e : field_) programs_.emplace_back(e, n_, m_);
  }

  const std::string& name() const { return name_; }
  int n() const { return n_; }
  int m() const { return m_; }
  const ExtendedBox& domain() const { return domain_; }
  const Box& disturbance() const { return disturbance_; }
  const std::vector<Expr>& field() const { return field_; }
  const Expr& field(int i) const { return field_[static_cast<std::size_t>(i)]; }
  const std::optional<std::string>& closed_form() const { return closed_form_; }

  // F_i evaluated on slots [x (n), w (m)].
  double eval_component(int i, const double* slots) const { return programs_[static_cast<std::size_t>(i)].eval(slots); }

  // Same system with a different disturbance box (e.g. a CLI override).
  SystemSpec with_disturbance(Box w) const {
    return SystemSpec(name_, n_, m_, domain_, std::move(w), field_, closed_form_);
  }

 private:
  std::string name_;
  int n_;
  int m_;
  ExtendedBox domain_;
  Box disturbance_;
  std::vector<Expr> field_;
  std::optional<std::string> closed_form_;
  std::vector<Program> programs_;
};

using SystemPtr = std::shared_ptr<const SystemSpec>;

inline Vector slots_of(std::span<const double> x, std::span<const double> w) {
  Vector s(x.begin(), x.end());
  s.insert(s.end(), w.begin(), w.end());
  return s;
}

inline Vector eval_field(const SystemSpec& sys, std::span<const double> x, std::span<const double> w) {
  detail::require_same_size(x.size(), static_cast<std::size_t>(sys.n()), "eval_field: x");
  detail::require_same_size(w.size(), static_cast<std::size_t>(sys.m()), "eval_field: w");
  const Vector slots = slots_of(x, w);
  Vector out(static_cast<std::size_t>(sys.n()));
  for (int i = 0; i < sys.n(); ++i) out[static_cast<std::size_t>(i)] = sys.eval_component(i, slots.data());
  return out;
}

// Backward-time dynamics xdot = -F(x, w).
inline SystemSpec negate_system(const SystemSpec& sys) {
  std::vector<Expr> neg;
  neg.reserve(sys.field().size());
  for (const auto& e : sys.field()) neg.push_back(-e);
  return SystemSpec(sys.name() + "-backward", sys.n(), sys.m(), sys.domain(), sys.disturbance(), std::move(neg));
}

struct SpecialCaseReport {
  std::vector<bool> per_component;
  bool overall = true;
};

// Syntactic test of "F_i does not depend on x_i" for every i.
inline SpecialCaseReport check_special_case(const SystemSpec& sys) {
  SpecialCaseReport r;
  for (int i = 0; i < sys.n(); ++i) {
    const bool ok = !occurs(sys.field(i), Op::state_var, i);
    r.per_component.push_back(ok);
    r.overall = r.overall && ok;
  }
  return r;
}

namespace detail {

inline std::vector<Expr> parse_expr_list(const nlohmann::json& arr, const char* key, ExprContext ctx,
                                         std::size_t expected) {
  if (!arr.is_array()) throw ConfigError(std::string("\"") + key + "\" must be an array of strings");
  if (arr.size() != expected) {
    throw DimensionError(std::string("\"") + key + "\" must have " + std::to_string(expected) + " entries, got " +
                         std::to_string(arr.size()));
  }
  std::vector<Expr> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string label = std::string(key) + "[" + std::to_string(i) + "]";
    if (!arr[i].is_string()) throw ConfigError(label + ": expected a string");
    out.push_back(parse_expr(arr[i].get<std::string>(), ctx, label));
  }
  return out;
}

inline nlohmann::json parse_json_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports a byte offset; convert it to line/column.
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(std::string("invalid JSON: ") + e.what(), "line " + std::to_string(line),
                     static_cast<int>(col));
  }
}

template <class T>
T get_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("key \"") + key + "\": " + e.what());
  }
}

}  // namespace detail

// Parses the JSON system schema:
//   {"name", "n", "m", "domain": box, "disturbance": box, "field": [expr...]}
// "disturbance" may be omitted when m == 0; "domain" defaults to R^n.
inline SystemSpec parse_system(const std::string& config_text) {
  const auto j = detail::parse_json_text(config_text);
  if (!j.is_object()) throw ConfigError("system config must be a JSON object");
  const auto name = j.contains("name") ? detail::get_field<std::string>(j, "name") : std::string("user");
  const int n = detail::get_field<int>(j, "n");
  const int m = j.contains("m") ? detail::get_field<int>(j, "m") : 0;
  if (n < 1 || m < 0) throw ConfigError("n must be >= 1 and m >= 0");
  ExtendedBox domain = j.contains("domain") ? detail::get_field<ExtendedBox>(j, "domain")
                                            : ExtendedBox::whole_space(static_cast<std::size_t>(n));
  Box dist;
  if (j.contains("disturbance")) {
    dist = detail::get_field<ExtendedBox>(j, "disturbance").finite();
  } else if (m > 0) {
    throw ConfigError("missing key \"disturbance\" (required when m > 0)");
  }
  if (!j.contains("field")) throw ConfigError("missing key \"field\"");
  auto field = detail::parse_expr_list(j.at("field"), "field", {n, m, false}, static_cast<std::size_t>(n));
  return SystemSpec(name, n, m, std::move(domain), std::move(dist), std::move(field));
}

// Names accepted by builtin().
inline std::vector<std::string> builtin_names() { return {"abs2d", "poly3d"}; }

inline SystemSpec builtin(const std::string& name) {
  if (name == "abs2d") {
    const ExprContext ctx{2, 0, false};
    return SystemSpec("abs2d", 2, 0, ExtendedBox::whole_space(2), Box(),
                      {parse_expr("abs(x1 - x2)", ctx), parse_expr("-x1", ctx)}, "abs2d");
  }
  if (name == "poly3d") {
    const ExprContext ctx{3, 2, false};
    return SystemSpec("poly3d", 3, 2, ExtendedBox::whole_space(3), Box({-0.25, 0.0}, {0.0, 0.25}),
                      {parse_expr("w1*x2^2 - x2 + w2", ctx), parse_expr("x3 + 2", ctx),
                       parse_expr("x1 - x2 - w1^3", ctx)},
                      "poly3d");
  }
  throw UnknownNameError("unknown built-in system '" + name + "'");
}

}  // namespace mmreach
