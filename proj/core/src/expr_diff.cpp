#include <cmath>

#include "distval/expr.hpp"

namespace distval {

namespace {

Expr c(double v) { return Expr::constant(v); }

Expr d(const Expr& e, Var v);

// d/dx bump(t) = bump(t) * (-2t) / (1-t^2)^2 * t'. When t = sqrt(s) the t
// cancels: d/dx bump(sqrt(s)) = bump(sqrt(s)) * (-1) / (1-s)^2 * s', which
// stays defined at s = 0 (the centre of a radial bump).
Expr d_bump(const Expr& e, Var v) {
  const Expr t(e.node().a);
  if (!t.uses(v)) return c(0.0);
  if (t.kind() == NodeKind::unary && t.node().uop == UnaryOp::sqrt) {
    const Expr s(t.node().a);
    const Expr body = e * c(-1.0) / pow(c(1.0) - s, c(2.0)) * d(s, v);
    return Expr::on_support(t, body);
  }
  const Expr body = e * (c(-2.0) * t) / pow(c(1.0) - t * t, c(2.0)) * d(t, v);
  return Expr::on_support(t, body);
}

Expr d_pow(const Expr& e, Var v) {
  const Expr base(e.node().a);
  const Expr ex(e.node().b);
  const Expr db = d(base, v);
  if (auto k = ex.constant_value()) {
    if (*k == 0.0) return c(0.0);
    // k * base^(k-1) * base'; integer powers keep integer exponents.
    return c(*k) * pow(base, c(*k - 1.0)) * db;
  }
  const Expr de = d(ex, v);
  if (!base.uses(v) && base.constant_value()) {
    return e * ln(base) * de;
  }
  return e * (de * ln(base) + ex * db / base);
}

Expr d(const Expr& e, Var v) {
  const Node& n = e.node();
  if (!e.uses(v)) return c(0.0);
  switch (n.kind) {
    case NodeKind::constant:
      return c(0.0);
    case NodeKind::variable:
      return c(n.var == v ? 1.0 : 0.0);
    case NodeKind::unary: {
      const Expr a(n.a);
      const Expr da = d(a, v);
      switch (n.uop) {
        case UnaryOp::neg:
          return -da;
        case UnaryOp::sin:
          return cos(a) * da;
        case UnaryOp::cos:
          return -(sin(a) * da);
        case UnaryOp::exp:
          return e * da;
        case UnaryOp::ln:
          return da / a;
        case UnaryOp::arctan:
          return da / (c(1.0) + a * a);
        case UnaryOp::abs:
          return a / e * da;
        case UnaryOp::sqrt:
          return da / (c(2.0) * e);
      }
      break;
    }
    case NodeKind::binary: {
      const Expr a(n.a), b(n.b);
      switch (n.bop) {
        case BinaryOp::add:
          return d(a, v) + d(b, v);
        case BinaryOp::sub:
          return d(a, v) - d(b, v);
        case BinaryOp::mul:
          return d(a, v) * b + a * d(b, v);
        case BinaryOp::div:
          if (!b.uses(v)) return d(a, v) / b;
          return (d(a, v) * b - a * d(b, v)) / (b * b);
        case BinaryOp::pow:
          return d_pow(e, v);
      }
      break;
    }
    case NodeKind::indicator:
      throw NotDifferentiable("indicator chi(" + std::to_string(n.lo) + "," + std::to_string(n.hi) +
                              ") depends on the differentiation variable");
    case NodeKind::piecewise:
      throw NotDifferentiable("piecewise node depends on the differentiation variable");
    case NodeKind::bump:
      return d_bump(e, v);
    case NodeKind::on_support: {
      // Bodies produced by bump derivatives vanish with all derivatives at
      // |arg| = 1, so the guard commutes with differentiation.
      const Expr arg(n.a), body(n.b);
      const Expr db = d(body, v);
      if (db.constant_value() && *db.constant_value() == 0.0) return c(0.0);
      return Expr::on_support(arg, db);
    }
  }
  return c(0.0);
}

}  // namespace

Expr differentiate(const Expr& e, Var v) { return d(e, v); }

Expr differentiate(const Expr& e, Var v, int order) {
  Expr out = e;
  for (int i = 0; i < order; ++i) out = d(out, v);
  return out;
}

}  // namespace distval
