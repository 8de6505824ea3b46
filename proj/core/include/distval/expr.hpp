#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

namespace distval {

// Variables available to expressions. `n` is the sequence index used by
// schedule expressions (xi(n), centers(n), ...).
enum class Var : std::uint8_t { x = 0, y = 1, r = 2, n = 3 };
inline constexpr std::size_t kVarCount = 4;

std::string_view var_name(Var v);

enum class UnaryOp : std::uint8_t { neg, sin, cos, exp, ln, arctan, abs, sqrt };
enum class BinaryOp : std::uint8_t { add, sub, mul, div, pow };

enum class NodeKind : std::uint8_t {
  constant,
  variable,
  unary,
  binary,
  indicator,   // 1 on the open interval (lo, hi) of its argument, else 0
  piecewise,   // first branch with lo <= arg < hi, 0 if none matches
  bump,        // exp(-1/(1-t^2)) for |t| < 1, exactly 0 otherwise
  on_support,  // body if |arg| < 1, else 0; produced by bump derivatives
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Branch {
  double lo = 0.0;
  double hi = 0.0;
  NodePtr body;
};

struct Node {
  NodeKind kind = NodeKind::constant;
  double value = 0.0;
  Var var = Var::x;
  UnaryOp uop = UnaryOp::neg;
  BinaryOp bop = BinaryOp::add;
  NodePtr a;
  NodePtr b;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<Branch> branches;
};

class UnboundVariable : public std::runtime_error {
 public:
  explicit UnboundVariable(Var v);
  Var variable() const noexcept { return var_; }

 private:
  Var var_;
};

class NotDifferentiable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Variable bindings for evaluation. Unbound variables raise UnboundVariable,
// which is distinct from the NaN "undefined" value of a partial operation.
class Env {
 public:
  Env() = default;
  Env(std::initializer_list<std::pair<Var, double>> bindings);

  Env& set(Var v, double value) {
    values_[static_cast<std::size_t>(v)] = value;
    mask_ |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(v));
    return *this;
  }
  bool bound(Var v) const {
    return (mask_ >> static_cast<unsigned>(v)) & 1u;
  }
  double get(Var v) const {
    if (!bound(v)) throw UnboundVariable(v);
    return values_[static_cast<std::size_t>(v)];
  }

 private:
  std::array<double, kVarCount> values_{};
  std::uint8_t mask_ = 0;
};

inline bool is_undefined(double v) { return v != v; }

// Immutable expression tree. Copies share nodes; evaluation is reentrant.
class Expr {
 public:
  Expr();
  explicit Expr(NodePtr node);

  static Expr constant(double v);
  static Expr variable(Var v);
  static Expr unary(UnaryOp op, const Expr& a);
  static Expr binary(BinaryOp op, const Expr& a, const Expr& b);
  static Expr indicator(double lo, double hi, const Expr& arg);
  static Expr piecewise(const Expr& arg, const std::vector<std::tuple<double, double, Expr>>& branches);
  static Expr bump(const Expr& arg);
  static Expr on_support(const Expr& arg, const Expr& body);

  const Node& node() const { return *node_; }
  const NodePtr& ptr() const { return node_; }
  NodeKind kind() const { return node_->kind; }
  std::optional<double> constant_value() const;

  double eval(const Env& env) const;
  // Shorthand for an expression in x alone.
  double operator()(double x) const;
  double operator()(double x, double y) const;

  // Fully parenthesized text that parse() maps back to an equivalent tree.
  std::string str() const;

  bool uses(Var v) const;
  std::size_t size() const;

 private:
  NodePtr node_;
};

double eval_node(const Node& node, const Env& env);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& a, const Expr& b);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr arctan(const Expr& a);
Expr abs(const Expr& a);
Expr sqrt(const Expr& a);

// ---- parsing -------------------------------------------------------------

struct ParseError : std::runtime_error {
  ParseError(std::size_t offset, std::string expected, std::string found);
  std::size_t offset;
  std::string expected;
  std::string found;
};

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' base)?  |  '-' factor
//   base   := number | ident | ident '(' args ')' | '(' expr ')'
// Functions: sin cos exp ln arctan abs sqrt bump, chi(a,b[,t]),
// piecewise(t, lo1, hi1, e1, ...), onsupp(t, e). Constants: pi e inf.
// chi(a,b) is the indicator of the open interval (a,b) in x.
Expr parse(std::string_view text);
std::variant<Expr, ParseError> try_parse(std::string_view text);

// ---- symbolic differentiation -------------------------------------------

// Throws NotDifferentiable when an indicator or piecewise node depends on
// `v`.
Expr differentiate(const Expr& e, Var v);
Expr differentiate(const Expr& e, Var v, int order);

// ---- structural analysis -------------------------------------------------

enum class SingularKind : std::uint8_t { pole, essential_oscillation, boundary_of_support, kink };
std::string_view singular_kind_name(SingularKind k);

struct SingularPoint {
  double location = 0.0;
  SingularKind kind = SingularKind::kink;
  bool operator==(const SingularPoint&) const = default;
};

// Candidate singular points of e (as a function of `v`) in the closed
// interval [lo, hi], sorted. May over-report; never misses denominators,
// log/sqrt domain boundaries, indicator/piecewise endpoints or bump edges of
// the closed forms the grammar produces.
std::vector<SingularPoint> singularities(const Expr& e, double lo, double hi, Var v = Var::x);

// Angular frequency of the oscillation of e near an essential point s, as
// seen in the variable u = 1/(x - s); 0 when no oscillation is detected.
double oscillation_frequency(const Expr& e, double s, Var v = Var::x);

// Replaces every occurrence of `v` by `with`.
Expr substitute(const Expr& e, Var v, const Expr& with);

// If e is affine in v (a*v + b) with no other variables, returns (a, b).
std::optional<std::pair<double, double>> affine_coefficients(const Expr& e, Var v);

// Interval outside of which e vanishes identically in v; nullopt when no
// bound can be proven from the tree.
std::optional<std::pair<double, double>> support_hull(const Expr& e, Var v = Var::x);

}  // namespace distval
