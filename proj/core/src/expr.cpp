#include "distval/expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace distval {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

// Integer exponents up to this magnitude are unrolled into products.
constexpr double kMaxUnrolledPower = 64.0;

double int_power(double base, long k) {
  if (k == 0) return 1.0;
  const bool inv = k < 0;
  unsigned long m = static_cast<unsigned long>(inv ? -k : k);
  double acc = 1.0;
  double sq = base;
  while (m) {
    if (m & 1ul) acc *= sq;
    sq *= sq;
    m >>= 1;
  }
  if (inv) {
    if (acc == 0.0) return kNaN;
    return 1.0 / acc;
  }
  return acc;
}

double eval_pow(const Node& node, const Env& env) {
  const double base = eval_node(*node.a, env);
  if (node.b->kind == NodeKind::constant) {
    const double k = node.b->value;
    if (std::floor(k) == k && std::fabs(k) <= kMaxUnrolledPower) {
      if (is_undefined(base)) return kNaN;
      return int_power(base, static_cast<long>(k));
    }
  }
  const double ex = eval_node(*node.b, env);
  if (is_undefined(base) || is_undefined(ex)) return kNaN;
  if (std::floor(ex) == ex && std::fabs(ex) <= kMaxUnrolledPower) return int_power(base, static_cast<long>(ex));
  if (base > 0.0) return std::pow(base, ex);
  if (base == 0.0 && ex > 0.0) return 0.0;
  return kNaN;
}

void print_number(std::ostringstream& os, double v) {
  if (std::isinf(v)) {
    os << (v > 0 ? "inf" : "(-inf)");
    return;
  }
  if (is_undefined(v)) {
    os << "(0/0)";
    return;
  }
  std::ostringstream tmp;
  tmp.precision(17);
  tmp << std::fabs(v);
  if (std::signbit(v) && v != 0.0)
    os << "(-" << tmp.str() << ")";
  else
    os << tmp.str();
}

void print(std::ostringstream& os, const Node& n) {
  switch (n.kind) {
    case NodeKind::constant:
      print_number(os, n.value);
      return;
    case NodeKind::variable:
      os << var_name(n.var);
      return;
    case NodeKind::unary: {
      static constexpr const char* names[] = {"", "sin", "cos", "exp", "ln", "arctan", "abs", "sqrt"};
      if (n.uop == UnaryOp::neg) {
        os << "(-";
        print(os, *n.a);
        os << ")";
      } else {
        os << names[static_cast<int>(n.uop)] << "(";
        print(os, *n.a);
        os << ")";
      }
      return;
    }
    case NodeKind::binary: {
      static constexpr char ops[] = {'+', '-', '*', '/', '^'};
      os << "(";
      print(os, *n.a);
      os << ops[static_cast<int>(n.bop)];
      print(os, *n.b);
      os << ")";
      return;
    }
    case NodeKind::indicator:
      os << "chi(";
      print_number(os, n.lo);
      os << ",";
      print_number(os, n.hi);
      os << ",";
      print(os, *n.a);
      os << ")";
      return;
    case NodeKind::piecewise:
      os << "piecewise(";
      print(os, *n.a);
      for (const auto& br : n.branches) {
        os << ",";
        print_number(os, br.lo);
        os << ",";
        print_number(os, br.hi);
        os << ",";
        print(os, *br.body);
      }
      os << ")";
      return;
    case NodeKind::bump:
      os << "bump(";
      print(os, *n.a);
      os << ")";
      return;
    case NodeKind::on_support:
      os << "onsupp(";
      print(os, *n.a);
      os << ",";
      print(os, *n.b);
      os << ")";
      return;
  }
}

bool node_uses(const Node& n, Var v) {
  switch (n.kind) {
    case NodeKind::constant:
      return false;
    case NodeKind::variable:
      return n.var == v;
    case NodeKind::piecewise:
      if (node_uses(*n.a, v)) return true;
      for (const auto& br : n.branches)
        if (node_uses(*br.body, v)) return true;
      return false;
    default:
      return (n.a && node_uses(*n.a, v)) || (n.b && node_uses(*n.b, v));
  }
}

std::size_t node_size(const Node& n) {
  std::size_t s = 1;
  if (n.a) s += node_size(*n.a);
  if (n.b) s += node_size(*n.b);
  for (const auto& br : n.branches) s += node_size(*br.body);
  return s;
}

}  // namespace

std::string_view var_name(Var v) {
  switch (v) {
    case Var::x:
      return "x";
    case Var::y:
      return "y";
    case Var::r:
      return "r";
    case Var::n:
      return "n";
  }
  return "?";
}

UnboundVariable::UnboundVariable(Var v)
    : std::runtime_error("unbound variable '" + std::string(var_name(v)) + "'"), var_(v) {}

Env::Env(std::initializer_list<std::pair<Var, double>> bindings) {
  for (const auto& [v, value] : bindings) set(v, value);
}

double eval_node(const Node& n, const Env& env) {
  switch (n.kind) {
    case NodeKind::constant:
      return n.value;
    case NodeKind::variable:
      return env.get(n.var);
    case NodeKind::unary: {
      const double a = eval_node(*n.a, env);
      switch (n.uop) {
        case UnaryOp::neg:
          return -a;
        case UnaryOp::sin:
          return std::sin(a);
        case UnaryOp::cos:
          return std::cos(a);
        case UnaryOp::exp:
          return std::exp(a);
        case UnaryOp::ln:
          return a > 0.0 ? std::log(a) : kNaN;
        case UnaryOp::arctan:
          return std::atan(a);
        case UnaryOp::abs:
          return std::fabs(a);
        case UnaryOp::sqrt:
          return a >= 0.0 ? std::sqrt(a) : kNaN;
      }
      return kNaN;
    }
    case NodeKind::binary: {
      if (n.bop == BinaryOp::pow) return eval_pow(n, env);
      const double a = eval_node(*n.a, env);
      const double b = eval_node(*n.b, env);
      switch (n.bop) {
        case BinaryOp::add:
          return a + b;
        case BinaryOp::sub:
          return a - b;
        case BinaryOp::mul:
          return a * b;
        case BinaryOp::div:
          return b == 0.0 ? kNaN : a / b;
        case BinaryOp::pow:
          break;
      }
      return kNaN;
    }
    case NodeKind::indicator: {
      const double t = eval_node(*n.a, env);
      if (is_undefined(t)) return kNaN;
      return (t > n.lo && t < n.hi) ? 1.0 : 0.0;
    }
    case NodeKind::piecewise: {
      const double t = eval_node(*n.a, env);
      if (is_undefined(t)) return kNaN;
      if (n.value != 0.0) {
        // sorted, disjoint guards: the first match is the unique match
        auto it = std::upper_bound(n.branches.begin(), n.branches.end(), t,
                                   [](double v, const Branch& br) { return v < br.lo; });
        if (it == n.branches.begin()) return 0.0;
        --it;
        return t < it->hi ? eval_node(*it->body, env) : 0.0;
      }
      for (const auto& br : n.branches)
        if (t >= br.lo && t < br.hi) return eval_node(*br.body, env);
      return 0.0;
    }
    case NodeKind::bump: {
      const double t = eval_node(*n.a, env);
      if (is_undefined(t)) return kNaN;
      if (!(std::fabs(t) < 1.0)) return 0.0;
      return std::exp(-1.0 / (1.0 - t * t));
    }
    case NodeKind::on_support: {
      const double t = eval_node(*n.a, env);
      if (is_undefined(t)) return kNaN;
      if (!(std::fabs(t) < 1.0)) return 0.0;
      return eval_node(*n.b, env);
    }
  }
  return kNaN;
}

Expr::Expr() : node_(make_node(Node{})) {}
Expr::Expr(NodePtr node) : node_(std::move(node)) {}

Expr Expr::constant(double v) {
  Node n;
  n.kind = NodeKind::constant;
  n.value = v;
  return Expr(make_node(std::move(n)));
}

Expr Expr::variable(Var v) {
  Node n;
  n.kind = NodeKind::variable;
  n.var = v;
  return Expr(make_node(std::move(n)));
}

Expr Expr::unary(UnaryOp op, const Expr& a) {
  Node n;
  n.kind = NodeKind::unary;
  n.uop = op;
  n.a = a.ptr();
  return Expr(make_node(std::move(n)));
}

Expr Expr::binary(BinaryOp op, const Expr& a, const Expr& b) {
  Node n;
  n.kind = NodeKind::binary;
  n.bop = op;
  n.a = a.ptr();
  n.b = b.ptr();
  return Expr(make_node(std::move(n)));
}

Expr Expr::indicator(double lo, double hi, const Expr& arg) {
  Node n;
  n.kind = NodeKind::indicator;
  n.lo = lo;
  n.hi = hi;
  n.a = arg.ptr();
  return Expr(make_node(std::move(n)));
}

Expr Expr::piecewise(const Expr& arg, const std::vector<std::tuple<double, double, Expr>>& branches) {
  Node n;
  n.kind = NodeKind::piecewise;
  n.a = arg.ptr();
  n.branches.reserve(branches.size());
  for (const auto& [lo, hi, body] : branches) n.branches.push_back(Branch{lo, hi, body.ptr()});
  // value flags sorted disjoint guards, enabling binary search in eval
  bool sorted = true;
  for (std::size_t i = 0; i < n.branches.size(); ++i) {
    if (!(n.branches[i].lo < n.branches[i].hi)) sorted = false;
    if (i > 0 && n.branches[i].lo < n.branches[i - 1].hi) sorted = false;
  }
  n.value = sorted ? 1.0 : 0.0;
  return Expr(make_node(std::move(n)));
}

Expr Expr::bump(const Expr& arg) {
  Node n;
  n.kind = NodeKind::bump;
  n.a = arg.ptr();
  return Expr(make_node(std::move(n)));
}

Expr Expr::on_support(const Expr& arg, const Expr& body) {
  Node n;
  n.kind = NodeKind::on_support;
  n.a = arg.ptr();
  n.b = body.ptr();
  return Expr(make_node(std::move(n)));
}

std::optional<double> Expr::constant_value() const {
  if (node_->kind == NodeKind::constant) return node_->value;
  return std::nullopt;
}

double Expr::eval(const Env& env) const { return eval_node(*node_, env); }

double Expr::operator()(double x) const {
  Env env;
  env.set(Var::x, x);
  return eval_node(*node_, env);
}

double Expr::operator()(double x, double y) const {
  Env env;
  env.set(Var::x, x).set(Var::y, y);
  return eval_node(*node_, env);
}

std::string Expr::str() const {
  std::ostringstream os;
  print(os, *node_);
  return os.str();
}

bool Expr::uses(Var v) const { return node_uses(*node_, v); }
std::size_t Expr::size() const { return node_size(*node_); }

// Operators fold constants and neutral elements; the raw factories above do
// not, so parsed text keeps its exact shape.

Expr operator+(const Expr& a, const Expr& b) {
  auto ca = a.constant_value(), cb = b.constant_value();
  if (ca && cb) return Expr::constant(*ca + *cb);
  if (ca && *ca == 0.0) return b;
  if (cb && *cb == 0.0) return a;
  return Expr::binary(BinaryOp::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  auto ca = a.constant_value(), cb = b.constant_value();
  if (ca && cb) return Expr::constant(*ca - *cb);
  if (cb && *cb == 0.0) return a;
  if (ca && *ca == 0.0) return -b;
  return Expr::binary(BinaryOp::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  auto ca = a.constant_value(), cb = b.constant_value();
  if (ca && cb) return Expr::constant(*ca * *cb);
  if ((ca && *ca == 0.0) || (cb && *cb == 0.0)) return Expr::constant(0.0);
  if (ca && *ca == 1.0) return b;
  if (cb && *cb == 1.0) return a;
  if (ca && *ca == -1.0) return -b;
  if (cb && *cb == -1.0) return -a;
  return Expr::binary(BinaryOp::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  auto ca = a.constant_value(), cb = b.constant_value();
  if (ca && cb && *cb != 0.0) return Expr::constant(*ca / *cb);
  if (ca && *ca == 0.0) return Expr::constant(0.0);
  if (cb && *cb == 1.0) return a;
  return Expr::binary(BinaryOp::div, a, b);
}

Expr operator-(const Expr& a) {
  if (auto c = a.constant_value()) return Expr::constant(-*c);
  if (a.kind() == NodeKind::unary && a.node().uop == UnaryOp::neg) return Expr(a.node().a);
  return Expr::unary(UnaryOp::neg, a);
}

Expr pow(const Expr& a, const Expr& b) {
  auto ca = a.constant_value(), cb = b.constant_value();
  if (cb && *cb == 0.0) return Expr::constant(1.0);
  if (cb && *cb == 1.0) return a;
  if (ca && cb) return Expr::constant(eval_node(Expr::binary(BinaryOp::pow, a, b).node(), Env{}));
  return Expr::binary(BinaryOp::pow, a, b);
}

namespace {
Expr fold_unary(UnaryOp op, const Expr& a) {
  Expr e = Expr::unary(op, a);
  if (a.constant_value()) return Expr::constant(e.eval(Env{}));
  return e;
}
}  // namespace

Expr sin(const Expr& a) { return fold_unary(UnaryOp::sin, a); }
Expr cos(const Expr& a) { return fold_unary(UnaryOp::cos, a); }
Expr exp(const Expr& a) { return fold_unary(UnaryOp::exp, a); }
Expr ln(const Expr& a) { return fold_unary(UnaryOp::ln, a); }
Expr arctan(const Expr& a) { return fold_unary(UnaryOp::arctan, a); }
Expr abs(const Expr& a) { return fold_unary(UnaryOp::abs, a); }
Expr sqrt(const Expr& a) { return fold_unary(UnaryOp::sqrt, a); }

}  // namespace distval
