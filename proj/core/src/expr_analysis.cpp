#include <algorithm>
#include <cmath>
#include <limits>

#include "distval/expr.hpp"

namespace distval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Hull {
  double lo = kInf;  // empty when lo > hi
  double hi = -kInf;
  static Hull empty() { return {}; }
  static Hull all() { return {-kInf, kInf}; }
  bool is_empty() const { return lo > hi; }
};

Hull hull_union(Hull a, Hull b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Hull hull_intersect(Hull a, Hull b) {
  Hull h{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  if (h.lo > h.hi) return Hull::empty();
  return h;
}

bool uses_any_var(const Expr& e) {
  return e.uses(Var::x) || e.uses(Var::y) || e.uses(Var::r) || e.uses(Var::n);
}

// Preimage under t = a*v + b of the set {lo < t < hi}.
Hull affine_preimage(std::pair<double, double> ab, double lo, double hi) {
  const auto [a, b] = ab;
  if (a == 0.0) return (b > lo && b < hi) ? Hull::all() : Hull::empty();
  double p = (lo - b) / a, q = (hi - b) / a;
  if (std::isnan(p)) p = a > 0 ? -kInf : kInf;
  if (std::isnan(q)) q = a > 0 ? kInf : -kInf;
  return {std::min(p, q), std::max(p, q)};
}

Hull hull_of(const Expr& e, Var v) {
  const Node& n = e.node();
  if (!e.uses(v)) {
    if (uses_any_var(e)) return Hull::all();
    const double c = e.eval(Env{});
    return c == 0.0 ? Hull::empty() : Hull::all();
  }
  switch (n.kind) {
    case NodeKind::constant:
    case NodeKind::variable:
      return Hull::all();
    case NodeKind::unary: {
      const Expr a(n.a);
      switch (n.uop) {
        case UnaryOp::neg:
        case UnaryOp::sin:
        case UnaryOp::arctan:
        case UnaryOp::abs:
        case UnaryOp::sqrt:
          return hull_of(a, v);
        default:
          return Hull::all();
      }
    }
    case NodeKind::binary: {
      const Expr a(n.a), b(n.b);
      switch (n.bop) {
        case BinaryOp::add:
        case BinaryOp::sub:
          return hull_union(hull_of(a, v), hull_of(b, v));
        case BinaryOp::mul:
          return hull_intersect(hull_of(a, v), hull_of(b, v));
        case BinaryOp::div:
          return hull_of(a, v);
        case BinaryOp::pow:
          if (auto k = b.constant_value(); k && *k > 0.0) return hull_of(a, v);
          return Hull::all();
      }
      return Hull::all();
    }
    case NodeKind::indicator: {
      auto ab = affine_coefficients(Expr(n.a), v);
      if (!ab) return Hull::all();
      return affine_preimage(*ab, n.lo, n.hi);
    }
    case NodeKind::piecewise: {
      auto ab = affine_coefficients(Expr(n.a), v);
      if (!ab) return Hull::all();
      Hull h = Hull::empty();
      for (const auto& br : n.branches) {
        Hull g = affine_preimage(*ab, br.lo, br.hi);
        // a branch boundary point belongs to the guard; widen by nothing, the
        // closed hull already contains it
        h = hull_union(h, hull_intersect(g, Hull::all()));
      }
      return h;
    }
    case NodeKind::bump:
    case NodeKind::on_support: {
      auto ab = affine_coefficients(Expr(n.a), v);
      if (!ab) return Hull::all();
      Hull h = affine_preimage(*ab, -1.0, 1.0);
      if (n.kind == NodeKind::on_support) h = hull_intersect(h, Hull::all());
      return h;
    }
  }
  return Hull::all();
}

// ---- root finding --------------------------------------------------------

double eval_at(const Expr& g, Var v, double t) {
  Env env;
  env.set(v, t);
  return g.eval(env);
}

double bisect(const Expr& g, Var v, double a, double b, bool defined_boundary) {
  double fa = eval_at(g, v, a);
  for (int i = 0; i < 200 && b - a > 1e-15 * (1.0 + std::fabs(a)); ++i) {
    const double m = 0.5 * (a + b);
    const double fm = eval_at(g, v, m);
    bool left;
    if (defined_boundary)
      left = is_undefined(fa) != is_undefined(fm);
    else
      left = (fa < 0) != (fm < 0);
    if (fm == 0.0 && !defined_boundary) return m;
    if (left) {
      b = m;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

// Zeros of g in [lo, hi] plus boundaries of the region where g is undefined.
std::vector<double> zeros(const Expr& g, Var v, double lo, double hi) {
  std::vector<double> out;
  if (auto ab = affine_coefficients(g, v)) {
    const auto [a, b] = *ab;
    if (a != 0.0) {
      const double z = -b / a;
      if (z >= lo && z <= hi) out.push_back(z);
    }
    return out;
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    lo = std::max(lo, -1e6);
    hi = std::min(hi, 1e6);
  }
  if (!(hi > lo)) return out;
  constexpr int M = 2048;
  std::vector<double> ts(M + 1), fs(M + 1);
  double scale = 0.0;
  for (int i = 0; i <= M; ++i) {
    ts[i] = lo + (hi - lo) * i / M;
    fs[i] = eval_at(g, v, ts[i]);
    if (!is_undefined(fs[i]) && std::isfinite(fs[i])) scale = std::max(scale, std::fabs(fs[i]));
  }
  for (int i = 0; i <= M; ++i) {
    if (fs[i] == 0.0) out.push_back(ts[i]);
    if (i == M) break;
    const double a = fs[i], b = fs[i + 1];
    if (is_undefined(a) != is_undefined(b)) {
      out.push_back(bisect(g, v, ts[i], ts[i + 1], true));
    } else if (!is_undefined(a) && a != 0.0 && b != 0.0 && ((a < 0) != (b < 0))) {
      out.push_back(bisect(g, v, ts[i], ts[i + 1], false));
    }
  }
  // touching zeros: local minima of |g| that are tiny relative to the scale
  for (int i = 1; i < M; ++i) {
    const double a = std::fabs(fs[i - 1]), m = std::fabs(fs[i]), b = std::fabs(fs[i + 1]);
    if (is_undefined(a) || is_undefined(m) || is_undefined(b)) continue;
    if (!(m <= a && m <= b) || m == 0.0) continue;
    double l = ts[i - 1], r = ts[i + 1];
    for (int k = 0; k < 100; ++k) {
      const double m1 = l + (r - l) / 3.0, m2 = r - (r - l) / 3.0;
      if (std::fabs(eval_at(g, v, m1)) < std::fabs(eval_at(g, v, m2)))
        r = m2;
      else
        l = m1;
    }
    const double z = 0.5 * (l + r);
    if (std::fabs(eval_at(g, v, z)) <= 1e-10 * std::max(1.0, scale)) out.push_back(z);
  }
  return out;
}

// Points where g equals `level`.
std::vector<double> level_set(const Expr& g, Var v, double level, double lo, double hi) {
  if (!std::isfinite(level)) return {};
  return zeros(g - Expr::constant(level), v, lo, hi);
}

struct Collector {
  Var v;
  double lo, hi;
  std::vector<SingularPoint> out;

  void add(const std::vector<double>& xs, SingularKind kind) {
    for (double x : xs)
      if (x >= lo && x <= hi) out.push_back({x, kind});
  }

  void walk(const Expr& e, bool in_trig) {
    const Node& n = e.node();
    if (!e.uses(v)) return;
    switch (n.kind) {
      case NodeKind::constant:
      case NodeKind::variable:
        return;
      case NodeKind::unary: {
        const Expr a(n.a);
        switch (n.uop) {
          case UnaryOp::sin:
          case UnaryOp::cos:
            walk(a, true);
            return;
          case UnaryOp::ln:
            add(zeros(a, v, lo, hi), SingularKind::pole);
            break;
          case UnaryOp::sqrt:
          case UnaryOp::abs:
            add(zeros(a, v, lo, hi), SingularKind::kink);
            break;
          default:
            break;
        }
        walk(a, in_trig);
        return;
      }
      case NodeKind::binary: {
        const Expr a(n.a), b(n.b);
        if (n.bop == BinaryOp::div) {
          add(zeros(b, v, lo, hi), in_trig ? SingularKind::essential_oscillation : SingularKind::pole);
        } else if (n.bop == BinaryOp::pow) {
          auto k = b.constant_value();
          const bool integer = k && std::floor(*k) == *k;
          if (!k || !integer || *k < 0.0) {
            SingularKind kind = (k && *k < 0.0) ? (in_trig ? SingularKind::essential_oscillation : SingularKind::pole)
                                                : SingularKind::kink;
            add(zeros(a, v, lo, hi), kind);
          }
        }
        walk(a, in_trig);
        walk(b, in_trig);
        return;
      }
      case NodeKind::indicator: {
        const Expr a(n.a);
        add(level_set(a, v, n.lo, lo, hi), SingularKind::kink);
        add(level_set(a, v, n.hi, lo, hi), SingularKind::kink);
        walk(a, in_trig);
        return;
      }
      case NodeKind::piecewise: {
        const Expr a(n.a);
        for (const auto& br : n.branches) {
          add(level_set(a, v, br.lo, lo, hi), SingularKind::kink);
          add(level_set(a, v, br.hi, lo, hi), SingularKind::kink);
          walk(Expr(br.body), in_trig);
        }
        walk(a, in_trig);
        return;
      }
      case NodeKind::bump:
      case NodeKind::on_support: {
        const Expr a(n.a);
        add(level_set(a, v, 1.0, lo, hi), SingularKind::boundary_of_support);
        add(level_set(a, v, -1.0, lo, hi), SingularKind::boundary_of_support);
        walk(a, in_trig);
        if (n.b) walk(Expr(n.b), in_trig);
        return;
      }
    }
  }
};

int kind_priority(SingularKind k) {
  switch (k) {
    case SingularKind::essential_oscillation:
      return 3;
    case SingularKind::pole:
      return 2;
    case SingularKind::boundary_of_support:
      return 1;
    case SingularKind::kink:
      return 0;
  }
  return 0;
}

void collect_trig_args(const Expr& e, std::vector<Expr>& out) {
  const Node& n = e.node();
  if (n.kind == NodeKind::unary && (n.uop == UnaryOp::sin || n.uop == UnaryOp::cos)) out.emplace_back(n.a);
  if (n.a) collect_trig_args(Expr(n.a), out);
  if (n.b) collect_trig_args(Expr(n.b), out);
  for (const auto& br : n.branches) collect_trig_args(Expr(br.body), out);
}

}  // namespace

std::string_view singular_kind_name(SingularKind k) {
  switch (k) {
    case SingularKind::pole:
      return "pole";
    case SingularKind::essential_oscillation:
      return "essential-oscillation";
    case SingularKind::boundary_of_support:
      return "boundary-of-support";
    case SingularKind::kink:
      return "kink";
  }
  return "?";
}

std::vector<SingularPoint> singularities(const Expr& e, double lo, double hi, Var v) {
  for (Var other : {Var::x, Var::y, Var::r, Var::n})
    if (other != v && e.uses(other))
      throw std::invalid_argument("singularities: expression depends on '" + std::string(var_name(other)) +
                                  "' besides '" + std::string(var_name(v)) + "'");
  Collector col{v, lo, hi, {}};
  col.walk(e, false);
  auto& pts = col.out;
  std::sort(pts.begin(), pts.end(), [](const SingularPoint& a, const SingularPoint& b) {
    return a.location < b.location;
  });
  std::vector<SingularPoint> merged;
  for (const auto& p : pts) {
    if (!merged.empty() && std::fabs(p.location - merged.back().location) <= 1e-13 * (1.0 + std::fabs(p.location))) {
      if (kind_priority(p.kind) > kind_priority(merged.back().kind)) merged.back().kind = p.kind;
      continue;
    }
    merged.push_back(p);
  }
  return merged;
}

double oscillation_frequency(const Expr& e, double s, Var v) {
  std::vector<Expr> args;
  collect_trig_args(e, args);
  double omega = 0.0;
  for (const Expr& g : args) {
    if (!g.uses(v)) continue;
    for (double side : {1.0, -1.0}) {
      const double u1 = 1e4, u2 = 2e4;
      const double g1 = eval_at(g, v, s + side / u1);
      const double g2 = eval_at(g, v, s + side / u2);
      if (is_undefined(g1) || is_undefined(g2) || !std::isfinite(g1) || !std::isfinite(g2)) continue;
      omega = std::max(omega, std::fabs(g2 - g1) / (u2 - u1));
    }
  }
  return omega < 1e-9 ? 0.0 : omega;
}

Expr substitute(const Expr& e, Var v, const Expr& with) {
  const Node& n = e.node();
  if (!e.uses(v)) return e;
  switch (n.kind) {
    case NodeKind::constant:
      return e;
    case NodeKind::variable:
      return n.var == v ? with : e;
    case NodeKind::unary:
      return Expr::unary(n.uop, substitute(Expr(n.a), v, with));
    case NodeKind::binary:
      return Expr::binary(n.bop, substitute(Expr(n.a), v, with), substitute(Expr(n.b), v, with));
    case NodeKind::indicator:
      return Expr::indicator(n.lo, n.hi, substitute(Expr(n.a), v, with));
    case NodeKind::piecewise: {
      std::vector<std::tuple<double, double, Expr>> branches;
      for (const auto& br : n.branches) branches.emplace_back(br.lo, br.hi, substitute(Expr(br.body), v, with));
      return Expr::piecewise(substitute(Expr(n.a), v, with), branches);
    }
    case NodeKind::bump:
      return Expr::bump(substitute(Expr(n.a), v, with));
    case NodeKind::on_support:
      return Expr::on_support(substitute(Expr(n.a), v, with), substitute(Expr(n.b), v, with));
  }
  return e;
}

std::optional<std::pair<double, double>> affine_coefficients(const Expr& e, Var v) {
  const Node& n = e.node();
  if (!e.uses(v)) {
    if (uses_any_var(e)) return std::nullopt;
    return std::pair{0.0, e.eval(Env{})};
  }
  switch (n.kind) {
    case NodeKind::variable:
      return std::pair{1.0, 0.0};
    case NodeKind::unary:
      if (n.uop == UnaryOp::neg) {
        auto a = affine_coefficients(Expr(n.a), v);
        if (!a) return std::nullopt;
        return std::pair{-a->first, -a->second};
      }
      return std::nullopt;
    case NodeKind::binary: {
      auto a = affine_coefficients(Expr(n.a), v);
      auto b = affine_coefficients(Expr(n.b), v);
      if (!a || !b) return std::nullopt;
      switch (n.bop) {
        case BinaryOp::add:
          return std::pair{a->first + b->first, a->second + b->second};
        case BinaryOp::sub:
          return std::pair{a->first - b->first, a->second - b->second};
        case BinaryOp::mul:
          if (a->first == 0.0) return std::pair{a->second * b->first, a->second * b->second};
          if (b->first == 0.0) return std::pair{b->second * a->first, b->second * a->second};
          return std::nullopt;
        case BinaryOp::div:
          if (b->first != 0.0 || b->second == 0.0) return std::nullopt;
          return std::pair{a->first / b->second, a->second / b->second};
        case BinaryOp::pow:
          if (auto k = Expr(n.b).constant_value(); k && *k == 1.0) return a;
          return std::nullopt;
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

std::optional<std::pair<double, double>> support_hull(const Expr& e, Var v) {
  Hull h = hull_of(e, v);
  if (h.is_empty()) return std::pair{0.0, 0.0};
  if (!std::isfinite(h.lo) || !std::isfinite(h.hi)) return std::nullopt;
  return std::pair{h.lo, h.hi};
}

}  // namespace distval
