#pragma once

// Vectors, boxes and the two partial orders used throughout the library:
// the componentwise order on R^n and the southeast order on R^{2n}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmreach/error.hpp"

namespace mmreach {

using Vector = std::vector<double>;

namespace detail {

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
  }
}

inline bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

}  // namespace detail

// A real number or one of the two infinities, with the infinities carried as
// an explicit tag.
class ExtendedScalar {
 public:
  enum class Kind { finite, neg_inf, pos_inf };

  constexpr ExtendedScalar() = default;

  // Doubles holding +-inf map to the tagged infinities; NaN is rejected.
  ExtendedScalar(double v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v)) throw DomainError("ExtendedScalar: NaN is not an extended real");
    if (std::isinf(v)) {
      kind_ = v > 0 ? Kind::pos_inf : Kind::neg_inf;
    } else {
      value_ = v;
    }
  }

  static ExtendedScalar neg_inf() { return ExtendedScalar(Kind::neg_inf); }
  static ExtendedScalar pos_inf() { return ExtendedScalar(Kind::pos_inf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }

  // The finite value; infinities are rejected.
  double value() const {
    if (!is_finite()) throw UnboundedDomainError("finite value required, got " + to_string());
    return value_;
  }

  // IEEE view: infinities become +-inf doubles. Only used for comparisons.
  double as_double() const {
    switch (kind_) {
      case Kind::neg_inf: return -std::numeric_limits<double>::infinity();
      case Kind::pos_inf: return std::numeric_limits<double>::infinity();
      case Kind::finite: break;
    }
    return value_;
  }

  std::string to_string() const {
    if (kind_ == Kind::neg_inf) return "-inf";
    if (kind_ == Kind::pos_inf) return "inf";
    return std::to_string(value_);
  }

  friend bool operator==(const ExtendedScalar& a, const ExtendedScalar& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
  }
  friend bool operator<=(const ExtendedScalar& a, const ExtendedScalar& b) {
    return a.as_double() <= b.as_double();
  }

 private:
  explicit ExtendedScalar(Kind k) : kind_(k) {}

  Kind kind_ = Kind::finite;
  double value_ = 0.0;
};

// Finite axis-aligned box [lower, upper]. Zero-dimensional boxes are allowed
// (systems without disturbances carry an empty disturbance box).
struct Box {
  Vector lower;
  Vector upper;

  Box() = default;
  Box(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
    detail::require_same_size(lower.size(), upper.size(), "Box");
    if (!detail::all_finite(lower) || !detail::all_finite(upper)) {
      throw UnboundedDomainError("Box: bounds must be finite");
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!(lower[i] <= upper[i])) {
        throw OrderViolationError("Box: lower[" + std::to_string(i) + "] > upper[" +
                                  std::to_string(i) + "]");
      }
    }
  }

  static Box point(const Vector& p) { return Box(p, p); }
  static Box cube(std::size_t n, double lo, double hi) { return Box(Vector(n, lo), Vector(n, hi)); }

  std::size_t dim() const { return lower.size(); }
  double width(std::size_t i) const { return upper[i] - lower[i]; }
  double center(std::size_t i) const { return 0.5 * (lower[i] + upper[i]); }

  bool contains(std::span<const double> p, double tol = 0.0) const {
    detail::require_same_size(dim(), p.size(), "Box::contains");
    for (std::size_t i = 0; i < dim(); ++i) {
      if (p[i] < lower[i] - tol || p[i] > upper[i] + tol) return false;
    }
    return true;
  }

  // True iff `inner` is a subset of this box inflated by tol.
  bool contains(const Box& inner, double tol = 0.0) const {
    detail::require_same_size(dim(), inner.dim(), "Box::contains");
    for (std::size_t i = 0; i < dim(); ++i) {
      if (inner.lower[i] < lower[i] - tol || inner.upper[i] > upper[i] + tol) return false;
    }
    return true;
  }

  Box inflated(double amount) const {
    Box b = *this;
    for (std::size_t i = 0; i < dim(); ++i) {
      b.lower[i] -= amount;
      b.upper[i] += amount;
    }
    return b;
  }

  // Scales every axis about the box center.
  Box scaled(double factor) const {
    Box b = *this;
    for (std::size_t i = 0; i < dim(); ++i) {
      const double c = center(i);
      const double r = 0.5 * width(i) * factor;
      b.lower[i] = c - r;
      b.upper[i] = c + r;
    }
    return b;
  }

  friend bool operator==(const Box&, const Box&) = default;
};

// Hyperrectangle whose bounds may be infinite. Used for state domains.
class ExtendedBox {
 public:
  ExtendedBox() = default;
  ExtendedBox(std::vector<ExtendedScalar> lo, std::vector<ExtendedScalar> hi)
      : lower_(std::move(lo)), upper_(std::move(hi)) {
    detail::require_same_size(lower_.size(), upper_.size(), "ExtendedBox");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (!(lower_[i] <= upper_[i])) {
        throw OrderViolationError("ExtendedBox: lower[" + std::to_string(i) + "] > upper[" +
                                  std::to_string(i) + "]");
      }
    }
  }
  ExtendedBox(const Box& b)  // NOLINT(google-explicit-constructor)
      : lower_(b.lower.begin(), b.lower.end()), upper_(b.upper.begin(), b.upper.end()) {}

  static ExtendedBox whole_space(std::size_t n) {
    return ExtendedBox(std::vector<ExtendedScalar>(n, ExtendedScalar::neg_inf()),
                       std::vector<ExtendedScalar>(n, ExtendedScalar::pos_inf()));
  }

  std::size_t dim() const { return lower_.size(); }
  const std::vector<ExtendedScalar>& lower() const { return lower_; }
  const std::vector<ExtendedScalar>& upper() const { return upper_; }

  bool is_finite() const {
    auto fin = [](const ExtendedScalar& s) { return s.is_finite(); };
    return std::all_of(lower_.begin(), lower_.end(), fin) &&
           std::all_of(upper_.begin(), upper_.end(), fin);
  }

  bool has_nonempty_interior() const {
    for (std::size_t i = 0; i < dim(); ++i) {
      if (!(lower_[i].as_double() < upper_[i].as_double())) return false;
    }
    return true;
  }

  // Throws UnboundedDomainError if any bound is infinite.
  Box finite() const {
    Vector lo(dim()), hi(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      lo[i] = lower_[i].value();
      hi[i] = upper_[i].value();
    }
    return Box(std::move(lo), std::move(hi));
  }

  // Intersection with a finite box; the result is finite.
  Box clip(const Box& b) const {
    detail::require_same_size(dim(), b.dim(), "ExtendedBox::clip");
    Box out = b;
    for (std::size_t i = 0; i < dim(); ++i) {
      out.lower[i] = std::max(out.lower[i], lower_[i].as_double());
      out.upper[i] = std::min(out.upper[i], upper_[i].as_double());
      if (out.lower[i] > out.upper[i]) throw OrderViolationError("ExtendedBox::clip: empty intersection");
    }
    return out;
  }

  friend bool operator==(const ExtendedBox&, const ExtendedBox&) = default;

 private:
  std::vector<ExtendedScalar> lower_;
  std::vector<ExtendedScalar> upper_;
};

// A point (x, xhat) of R^{2n}. Membership in T_X means x <= xhat.
struct EmbeddingState {
  Vector x;
  Vector xhat;

  std::size_t dim() const { return x.size(); }

  bool in_TX(double tol = 0.0) const {
    detail::require_same_size(x.size(), xhat.size(), "EmbeddingState");
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] > xhat[i] + tol) return false;
    }
    return true;
  }

  // Largest amount by which some x_i exceeds xhat_i (<= 0 inside T_X).
  double order_violation() const {
    double v = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) v = std::max(v, x[i] - xhat[i]);
    return x.empty() ? 0.0 : v;
  }

  Vector flat() const {
    Vector v = x;
    v.insert(v.end(), xhat.begin(), xhat.end());
    return v;
  }

  static EmbeddingState from_flat(std::span<const double> v) {
    if (v.size() % 2 != 0) throw DimensionError("EmbeddingState: odd flat length");
    const std::size_t n = v.size() / 2;
    return {Vector(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)),
            Vector(v.begin() + static_cast<std::ptrdiff_t>(n), v.end())};
  }

  static EmbeddingState from_box(const Box& b) { return {b.lower, b.upper}; }

  friend bool operator==(const EmbeddingState&, const EmbeddingState&) = default;
};

// Componentwise order a <= b, with an optional absolute slack.
inline bool le(std::span<const double> a, std::span<const double> b, double tol = 0.0) {
  detail::require_same_size(a.size(), b.size(), "le");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i] + tol) return false;
  }
  return true;
}

// Southeast order: (x, x') <=_SE (y, y') iff x <= y and y' <= x'.
inline bool se_le(const EmbeddingState& p, const EmbeddingState& q, double tol = 0.0) {
  detail::require_same_size(p.x.size(), p.xhat.size(), "se_le");
  detail::require_same_size(p.x.size(), q.x.size(), "se_le");
  detail::require_same_size(q.x.size(), q.xhat.size(), "se_le");
  return le(p.x, q.x, tol) && le(q.xhat, p.xhat, tol);
}

// The box spanned by an ordered embedding state.
inline Box rect(const EmbeddingState& a) {
  detail::require_same_size(a.x.size(), a.xhat.size(), "rect");
  if (!a.in_TX()) throw OrderViolationError("rect: state is not ordered (x is not <= xhat)");
  return Box(a.x, a.xhat);
}

inline bool box_contains(const ExtendedBox& b, std::span<const double> p, double tol = 0.0) {
  detail::require_same_size(b.dim(), p.size(), "box_contains");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < b.lower()[i].as_double() - tol || p[i] > b.upper()[i].as_double() + tol) return false;
  }
  return true;
}

// ---- JSON: {"lower": [...], "upper": [...]}, infinities as "-inf"/"inf" ----

inline void to_json(nlohmann::json& j, const ExtendedScalar& s) {
  switch (s.kind()) {
    case ExtendedScalar::Kind::neg_inf: j = "-inf"; break;
    case ExtendedScalar::Kind::pos_inf: j = "inf"; break;
    case ExtendedScalar::Kind::finite: j = s.value(); break;
  }
}

inline void from_json(const nlohmann::json& j, ExtendedScalar& s) {
  if (j.is_string()) {
    const auto str = j.get<std::string>();
    if (str == "-inf") {
      s = ExtendedScalar::neg_inf();
    } else if (str == "inf" || str == "+inf") {
      s = ExtendedScalar::pos_inf();
    } else {
      throw ConfigError("bound must be a number, \"-inf\" or \"inf\"; got \"" + str + "\"");
    }
  } else if (j.is_number()) {
    s = ExtendedScalar(j.get<double>());
  } else {
    throw ConfigError("bound must be a number, \"-inf\" or \"inf\"");
  }
}

inline void to_json(nlohmann::json& j, const ExtendedBox& b) {
  j = nlohmann::json{{"lower", b.lower()}, {"upper", b.upper()}};
}

inline void from_json(const nlohmann::json& j, ExtendedBox& b) {
  if (!j.is_object() || !j.contains("lower") || !j.contains("upper")) {
    throw ConfigError("box must be an object with \"lower\" and \"upper\"");
  }
  b = ExtendedBox(j.at("lower").get<std::vector<ExtendedScalar>>(),
                  j.at("upper").get<std::vector<ExtendedScalar>>());
}

inline void to_json(nlohmann::json& j, const Box& b) { to_json(j, ExtendedBox(b)); }

inline void from_json(const nlohmann::json& j, Box& b) {
  ExtendedBox e;
  from_json(j, e);
  b = e.finite();
}

}  // namespace mmreach
