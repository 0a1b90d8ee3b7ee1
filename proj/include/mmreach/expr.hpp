#pragma once

// Small expression language for vector-field components:
//   constants, x1..xn, w1..wm (and xh1..xhn, wh1..whm in decomposition
//   expressions), unary -, + - * /, ^ with an integer exponent,
//   abs, min, max, sin, cos, exp.
//
// Expressions are parsed into an Expr tree and compiled into a flat postfix
// Program for evaluation. Variable indices are stored 0-based.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmreach/error.hpp"

namespace mmreach {

enum class Op : std::uint8_t {
  constant,
  state_var,
  dist_var,
  state_hat_var,
  dist_hat_var,
  neg,
  add,
  sub,
  mul,
  div,
  pow,
  abs,
  min,
  max,
  sin,
  cos,
  exp,
};

struct Expr {
  Op op = Op::constant;
  double value = 0.0;  // constant
  int index = 0;       // variable index (0-based) or integer exponent for pow
  std::vector<Expr> args;

  static Expr constant(double v) { return {Op::constant, v, 0, {}}; }
  static Expr state(int i) { return {Op::state_var, 0.0, i, {}}; }
  static Expr dist(int k) { return {Op::dist_var, 0.0, k, {}}; }
  static Expr state_hat(int i) { return {Op::state_hat_var, 0.0, i, {}}; }
  static Expr dist_hat(int k) { return {Op::dist_hat_var, 0.0, k, {}}; }
  static Expr unary(Op op, Expr a) { return {op, 0.0, 0, {std::move(a)}}; }
  static Expr binary(Op op, Expr a, Expr b) { return {op, 0.0, 0, {std::move(a), std::move(b)}}; }
  static Expr power(Expr base, int exponent) { return {Op::pow, 0.0, exponent, {std::move(base)}}; }

  friend bool operator==(const Expr&, const Expr&) = default;
};

inline Expr operator-(Expr a) { return Expr::unary(Op::neg, std::move(a)); }

// Which identifiers an expression may reference.
struct ExprContext {
  int n = 0;
  int m = 0;
  bool allow_hats = false;
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, ExprContext ctx, std::string field)
      : text_(text), ctx_(ctx), field_(std::move(field)) {}

  Expr parse() {
    skip_ws();
    if (at_end()) fail("empty expression");
    Expr e = parse_sum();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, field_, static_cast<int>(pos_) + 1);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Op::add, std::move(lhs), parse_product());
      } else if (accept('-')) {
        lhs = Expr::binary(Op::sub, std::move(lhs), parse_product());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Op::mul, std::move(lhs), parse_unary());
      } else if (accept('/')) {
        lhs = Expr::binary(Op::div, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  // Unary minus binds looser than ^, so -x^2 is -(x^2).
  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      bool negative = false;
      if (peek() == '-' || peek() == '+') {
        negative = peek() == '-';
        ++pos_;
        skip_ws();
      }
      if (peek() == '(') fail("exponent must be an integer literal");
      const double v = parse_number_literal();
      if (v != std::floor(v) || std::abs(v) > 1024) {
        pos_ = start;
        fail("non-integer exponent");
      }
      const int k = static_cast<int>(v);
      return Expr::power(std::move(base), negative ? -k : k);
    }
    return base;
  }

  double parse_number_literal() {
    skip_ws();
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) ++pos_;
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        pos_ = save;
      } else {
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
    }
    if (pos_ == start) fail("expected a number");
    double v = 0.0;
    const auto* first = text_.data() + start;
    const auto* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail("malformed number");
    }
    return v;
  }

  Expr parse_primary() {
    skip_ws();
    if (at_end()) fail("unexpected end of expression");
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr::constant(parse_number_literal());
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    const std::string_view id = text_.substr(start, pos_ - start);

    static constexpr std::array<std::pair<std::string_view, Op>, 6> functions{{
        {"abs", Op::abs}, {"min", Op::min}, {"max", Op::max},
        {"sin", Op::sin}, {"cos", Op::cos}, {"exp", Op::exp},
    }};
    for (const auto& [name, op] : functions) {
      if (id != name) continue;
      expect('(');
      Expr a = parse_sum();
      if (op == Op::min || op == Op::max) {
        expect(',');
        Expr b = parse_sum();
        expect(')');
        return Expr::binary(op, std::move(a), std::move(b));
      }
      expect(')');
      return Expr::unary(op, std::move(a));
    }

    // Variables: x<k>, w<k>, xh<k>, wh<k>.
    std::string_view prefix;
    std::string_view digits;
    for (std::string_view p : {"xh", "wh", "x", "w"}) {
      if (id.size() > p.size() && id.substr(0, p.size()) == p &&
          std::isdigit(static_cast<unsigned char>(id[p.size()]))) {
        prefix = p;
        digits = id.substr(p.size());
        break;
      }
    }
    int k = 0;
    if (!prefix.empty()) {
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
      if (ec != std::errc() || ptr != digits.data() + digits.size()) prefix = {};
    }
    if (prefix.empty()) {
      pos_ = start;
      fail("unknown identifier '" + std::string(id) + "'");
    }
    const bool hat = prefix.size() == 2;
    if (hat && !ctx_.allow_hats) {
      pos_ = start;
      fail("identifier '" + std::string(id) + "' is only allowed in decomposition expressions");
    }
    const bool is_state = prefix[0] == 'x';
    const int limit = is_state ? ctx_.n : ctx_.m;
    if (k < 1 || k > limit) {
      pos_ = start;
      fail("index out of range in '" + std::string(id) + "' (valid: 1.." + std::to_string(limit) + ")");
    }
    if (is_state) return hat ? Expr::state_hat(k - 1) : Expr::state(k - 1);
    return hat ? Expr::dist_hat(k - 1) : Expr::dist(k - 1);
  }

  std::string_view text_;
  ExprContext ctx_;
  std::string field_;
  std::size_t pos_ = 0;
};

inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

}  // namespace detail

// Parses `text`. `field` only labels error messages.
inline Expr parse_expr(std::string_view text, ExprContext ctx, std::string field = {}) {
  return detail::Parser(text, ctx, std::move(field)).parse();
}

// Prints an expression in the parser's syntax. Binary operations are fully
// parenthesized so the output re-parses to an identical tree modulo
// negative constants (printed as a negation).
inline std::string to_string(const Expr& e) {
  switch (e.op) {
    case Op::constant:
      return std::signbit(e.value) ? "(-" + detail::format_number(-e.value) + ")" : detail::format_number(e.value);
    case Op::state_var: return "x" + std::to_string(e.index + 1);
    case Op::dist_var: return "w" + std::to_string(e.index + 1);
    case Op::state_hat_var: return "xh" + std::to_string(e.index + 1);
    case Op::dist_hat_var: return "wh" + std::to_string(e.index + 1);
    case Op::neg: return "(-" + to_string(e.args[0]) + ")";
    case Op::add: return "(" + to_string(e.args[0]) + " + " + to_string(e.args[1]) + ")";
    case Op::sub: return "(" + to_string(e.args[0]) + " - " + to_string(e.args[1]) + ")";
    case Op::mul: return "(" + to_string(e.args[0]) + " * " + to_string(e.args[1]) + ")";
    case Op::div: return "(" + to_string(e.args[0]) + " / " + to_string(e.args[1]) + ")";
    case Op::pow: return "(" + to_string(e.args[0]) + "^" + std::to_string(e.index) + ")";
    case Op::abs: return "abs(" + to_string(e.args[0]) + ")";
    case Op::min: return "min(" + to_string(e.args[0]) + ", " + to_string(e.args[1]) + ")";
    case Op::max: return "max(" + to_string(e.args[0]) + ", " + to_string(e.args[1]) + ")";
    case Op::sin: return "sin(" + to_string(e.args[0]) + ")";
    case Op::cos: return "cos(" + to_string(e.args[0]) + ")";
    case Op::exp: return "exp(" + to_string(e.args[0]) + ")";
  }
  return {};
}

// True iff a variable of kind `var_op` with the given index occurs in e.
inline bool occurs(const Expr& e, Op var_op, int index) {
  if (e.op == var_op && e.index == index) return true;
  for (const auto& a : e.args) {
    if (occurs(a, var_op, index)) return true;
  }
  return false;
}

// Compiled postfix form. Variables are read from a flat slot array laid out
// as [x (n), w (m), xh (n), wh (m)]; field expressions only touch the first
// n + m slots.
class Program {
 public:
  static constexpr int max_stack = 256;

  Program() = default;
  Program(const Expr& e, int n, int m) {
    int depth = 0;
    emit(e, n, m, depth);
    if (max_depth_ > max_stack) throw ConfigError("expression nesting too deep");
  }

  double operator()(std::span<const double> slots) const { return eval(slots.data()); }

  double eval(const double* slots) const {
    std::array<double, max_stack> st;  // NOLINT: uninitialized on purpose
    int sp = 0;
    for (const Instr& in : code_) {
      switch (in.op) {
        case Op::constant: st[sp++] = in.value; break;
        case Op::state_var:
        case Op::dist_var:
        case Op::state_hat_var:
        case Op::dist_hat_var: st[sp++] = slots[in.arg]; break;
        case Op::neg: st[sp - 1] = -st[sp - 1]; break;
        case Op::add: --sp; st[sp - 1] += st[sp]; break;
        case Op::sub: --sp; st[sp - 1] -= st[sp]; break;
        case Op::mul: --sp; st[sp - 1] *= st[sp]; break;
        case Op::div:
          --sp;
          if (st[sp] == 0.0) throw DomainError("division by zero");
          st[sp - 1] /= st[sp];
          break;
        case Op::pow: st[sp - 1] = ipow(st[sp - 1], in.arg); break;
        case Op::abs: st[sp - 1] = std::abs(st[sp - 1]); break;
        case Op::min: --sp; st[sp - 1] = std::min(st[sp - 1], st[sp]); break;
        case Op::max: --sp; st[sp - 1] = std::max(st[sp - 1], st[sp]); break;
        case Op::sin: st[sp - 1] = std::sin(st[sp - 1]); break;
        case Op::cos: st[sp - 1] = std::cos(st[sp - 1]); break;
        case Op::exp: st[sp - 1] = std::exp(st[sp - 1]); break;
      }
    }
    return st[0];
  }

  std::size_t size() const { return code_.size(); }

  static double ipow(double base, int k) {
    if (k == 0) return 1.0;
    if (k < 0) {
      if (base == 0.0) throw DomainError("division by zero in negative power");
      return 1.0 / ipow(base, -k);
    }
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= base;
    return r;
  }

 private:
  struct Instr {
    Op op;
    int arg;
    double value;
  };

  void emit(const Expr& e, int n, int m, int& depth) {
    for (const auto& a : e.args) emit(a, n, m, depth);
    int arg = e.index;
    switch (e.op) {
      case Op::state_var: arg = e.index; break;
      case Op::dist_var: arg = n + e.index; break;
      case Op::state_hat_var: arg = n + m + e.index; break;
      case Op::dist_hat_var: arg = 2 * n + m + e.index; break;
      default: break;
    }
    code_.push_back({e.op, arg, e.value});
    const bool leaf = e.args.empty();
    depth += leaf ? 1 : 1 - static_cast<int>(e.args.size());
    max_depth_ = std::max(max_depth_, depth);
  }

  std::vector<Instr> code_;
  int max_depth_ = 0;
};

}  // namespace mmreach
