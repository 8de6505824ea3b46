#include "distval/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace distval {

namespace {

Expr num(double v) { return Expr::constant(v); }

int order_sum(const MultiIndex& k) { return k[0] + k[1]; }

void check_term(const DeltaTerm& t) {
  if (t.order[0] < 0 || t.order[1] < 0 || order_sum(t.order) > kMaxDeltaOrder)
    throw std::invalid_argument("delta derivative order must be in [0, 6]");
  if (!std::isfinite(t.coefficient)) throw std::invalid_argument("delta coefficient must be finite");
}

// Adds `t`, merging with an existing term of the same location and order.
void merge_term(std::vector<DeltaTerm>& terms, const DeltaTerm& t) {
  for (auto& u : terms) {
    if (u.location == t.location && u.order == t.order) {
      u.coefficient += t.coefficient;
      return;
    }
  }
  terms.push_back(t);
}

void drop_zero_terms(std::vector<DeltaTerm>& terms) {
  std::erase_if(terms, [](const DeltaTerm& t) { return t.coefficient == 0.0; });
}

}  // namespace

double sphere_area(int d) {
  if (d < 1) throw std::invalid_argument("sphere_area: d >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

Distribution Distribution::regular1(const Expr& f) {
  if (f.uses(Var::y) || f.uses(Var::r) || f.uses(Var::n))
    throw std::invalid_argument("a 1-d regular part may only use x");
  Distribution d;
  d.dim_ = 1;
  d.regular_ = f;
  return d;
}

Distribution Distribution::regular2(const Expr& f) {
  if (f.uses(Var::r) || f.uses(Var::n)) throw std::invalid_argument("a 2-d regular part may only use x and y");
  Distribution d;
  d.dim_ = 2;
  d.regular_ = f;
  return d;
}

Distribution Distribution::radial(const Expr& profile, int d) {
  if (d < 1) throw std::invalid_argument("radial dimension must be >= 1");
  if (profile.uses(Var::x) || profile.uses(Var::y) || profile.uses(Var::n))
    throw std::invalid_argument("a radial profile may only use r");
  Distribution out;
  out.dim_ = d == 1 ? 1 : 2;
  out.geometry_ = Geometry::radial;
  out.radial_dim_ = d;
  out.regular_ = profile;
  return out;
}

Distribution Distribution::delta(const Point& location, const MultiIndex& order, double coefficient, int dim) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("delta: dim must be 1 or 2");
  Distribution d;
  d.dim_ = dim;
  d.add_delta({location, order, coefficient});
  return d;
}

Distribution& Distribution::add_delta(const DeltaTerm& t) {
  check_term(t);
  DeltaTerm u = t;
  if (dim_ == 1) {
    if (u.order[1] != 0) throw std::invalid_argument("1-d delta term with a y derivative");
    u.location[1] = 0.0;
  }
  merge_term(deltas_, u);
  return *this;
}

Distribution Distribution::with_deltas(std::vector<DeltaTerm> terms) const {
  Distribution out = *this;
  out.deltas_.clear();
  for (const auto& t : terms) out.add_delta(t);
  return out;
}

Distribution& Distribution::set_principal_value(bool pv) {
  pv_ = pv;
  return *this;
}

Distribution& Distribution::set_regular(const Expr& f) {
  regular_ = f;
  return *this;
}

double Distribution::regular_at(const Point& p) const {
  if (!regular_) return 0.0;
  if (geometry_ == Geometry::radial) {
    Env env;
    env.set(Var::r, std::hypot(p[0], p[1]));
    return regular_->eval(env);
  }
  return dim_ == 1 ? (*regular_)(p[0]) : (*regular_)(p[0], p[1]);
}

Distribution Distribution::resolved() const {
  if (identity_affine()) return *this;
  Distribution out = *this;
  out.shift_ = {0.0, 0.0};
  out.scale_ = 1.0;
  const Point s = shift_;
  const double k = scale_;
  const int d = geometry_ == Geometry::radial ? radial_dim_ : dim_;
  if (regular_) {
    const Expr x = Expr::variable(Var::x), y = Expr::variable(Var::y);
    if (geometry_ == Geometry::radial) {
      if (s[0] == 0.0 && s[1] == 0.0) {
        out.regular_ = substitute(*regular_, Var::r, num(k) * Expr::variable(Var::r));
      } else if (radial_dim_ <= 2) {
        // a shifted radial function is no longer radial about the origin
        const Expr rr = radial_dim_ == 1 ? abs(num(s[0]) + num(k) * x)
                                         : sqrt(pow(num(s[0]) + num(k) * x, num(2.0)) + pow(num(s[1]) + num(k) * y, num(2.0)));
        out.regular_ = substitute(*regular_, Var::r, rr);
        out.geometry_ = Geometry::cartesian;
      } else {
        throw std::invalid_argument("shifted radial distributions need d <= 2");
      }
    } else {
      Expr g = substitute(*regular_, Var::x, num(s[0]) + num(k) * x);
      if (dim_ == 2) g = substitute(g, Var::y, num(s[1]) + num(k) * y);
      out.regular_ = g;
    }
  }
  out.deltas_.clear();
  for (const auto& t : deltas_) {
    DeltaTerm u = t;
    u.location = {(t.location[0] - s[0]) / k, dim_ == 2 ? (t.location[1] - s[1]) / k : 0.0};
    u.coefficient = t.coefficient * std::pow(k, -d - order_sum(t.order));
    merge_term(out.deltas_, u);
  }
  return out;
}

namespace {

// Integral of |g(s + dir * e^t)| e^t w(e^t) over t in [ln a, ln b].
double log_excision(const std::function<double(double)>& g, double a, double b) {
  QuadratureOptions opt;
  opt.abs_tol = 1e-8;
  opt.max_segments = 4000;
  auto q = adaptive_gk(
      [&](double t) {
        const double rho = std::exp(t);
        const double v = g(rho);
        return std::isfinite(v) ? std::fabs(v) * rho : 0.0;
      },
      std::log(a), std::log(b), opt);
  return q.value;
}

// True when rho -> m(rho) (>= 0) looks non-integrable near rho = 0 against
// the weight already folded into m.
bool non_integrable(const std::function<double(double)>& m, double reach) {
  double peak = 0.0;
  for (int k = 3; k <= 10; ++k) {
    const double v = m(std::pow(10.0, -k) * reach);
    if (std::isfinite(v)) peak = std::max(peak, std::fabs(v));
  }
  double typical = 0.0;
  for (int i = 1; i <= 8; ++i) {
    const double v = m(reach * i / 8.0);
    if (std::isfinite(v)) typical = std::max(typical, std::fabs(v));
  }
  if (peak <= 1e6 * (1.0 + typical)) return false;  // bounded near the point
  const double coarse = log_excision(m, 1e-4 * reach, reach);
  const double fine = log_excision(m, 1e-8 * reach, reach);
  return fine - coarse > 0.5 * (1.0 + coarse);
}

}  // namespace

std::optional<std::string> Distribution::integrability_problem(double half_width) const {
  if (!regular_) return std::nullopt;
  const Distribution g = resolved();
  const Expr& f = *g.regular_;
  const double h = half_width;
  if (g.geometry_ == Geometry::radial) {
    const int d = g.radial_dim_;
    auto weighted = [&](double rho) {
      Env env;
      env.set(Var::r, rho);
      return f.eval(env) * std::pow(rho, d - 1);
    };
    if (non_integrable(weighted, h)) return "radial profile is not integrable against r^(d-1) near r = 0";
    return std::nullopt;
  }
  if (dim_ == 1) {
    for (const auto& sp : singularities(f, -h, h)) {
      const double s = sp.location;
      for (double dir : {-1.0, 1.0}) {
        auto side = [&](double rho) { return f(s + dir * rho); };
        if (!non_integrable(side, h)) continue;
        if (pv_ && sp.kind == SingularKind::pole) {
          // principal value: the symmetric combination must be integrable
          auto sym = [&](double rho) { return f(s + rho) + f(s - rho); };
          if (!non_integrable(sym, h)) break;
          return "pole at " + std::to_string(s) + " is not simple: principal value diverges";
        }
        return "regular part is not locally integrable near x = " + std::to_string(s) +
               (sp.kind == SingularKind::pole ? " (pole; set pv for a principal value)" : "");
      }
    }
    return std::nullopt;
  }
  // d = 2: angular mean of |f| about the affine origin, weighted by rho
  auto m = [&](double rho) {
    double acc = 0.0;
    for (int j = 0; j < 16; ++j) {
      const double a = 2 * std::numbers::pi * (j + 0.5) / 16.0;
      const double v = f(rho * std::cos(a), rho * std::sin(a));
      if (std::isfinite(v)) acc += std::fabs(v);
    }
    return acc / 16.0 * rho;
  };
  if (non_integrable(m, h)) return "regular part is not locally integrable near the origin";
  return std::nullopt;
}

std::string Distribution::describe() const {
  std::ostringstream os;
  os.precision(10);
  bool first = true;
  if (regular_) {
    os << (geometry_ == Geometry::radial ? "radial[" + std::to_string(radial_dim_) + "](" : "") << regular_->str()
       << (geometry_ == Geometry::radial ? ")" : "");
    first = false;
  }
  for (const auto& t : deltas_) {
    if (!first) os << " + ";
    first = false;
    os << t.coefficient << "*D^(" << t.order[0];
    if (dim_ == 2) os << "," << t.order[1];
    os << ")delta(" << t.location[0];
    if (dim_ == 2) os << "," << t.location[1];
    os << ")";
  }
  if (first) os << "0";
  if (pv_) os << " [pv]";
  if (!identity_affine()) os << " at (" << shift_[0] << (dim_ == 2 ? "," + std::to_string(shift_[1]) : "") << ") + " << scale_ << "*x";
  return os.str();
}

Distribution operator+(const Distribution& a, const Distribution& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("sum of distributions of different dimension");
  const Distribution ra = a.resolved(), rb = b.resolved();
  if (ra.geometry() != rb.geometry() && ra.regular() && rb.regular())
    throw std::invalid_argument("sum of radial and cartesian regular parts");
  Distribution out = ra.regular() ? ra : rb;
  if (ra.regular() && rb.regular()) out.set_regular(*ra.regular() + *rb.regular());
  if (!ra.regular()) {
    out = rb;
    for (const auto& t : ra.deltas()) out.add_delta(t);
  } else {
    for (const auto& t : rb.deltas()) out.add_delta(t);
  }
  out.set_principal_value(ra.principal_value() || rb.principal_value());
  return out;
}

Distribution operator*(double c, const Distribution& f) {
  Distribution out = f.resolved();
  if (out.regular_) out.regular_ = num(c) * *out.regular_;
  for (auto& t : out.deltas_) t.coefficient *= c;
  drop_zero_terms(out.deltas_);
  return out;
}

Distribution translate_scale(const Distribution& f, const Point& x0, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("translate_scale: eps must be positive");
  Distribution g = f;
  // f(s + k (x0 + eps x)) = f((s + k x0) + k eps x)
  g.shift_ = {f.shift_[0] + f.scale_ * x0[0], f.dim_ == 2 ? f.shift_[1] + f.scale_ * x0[1] : 0.0};
  g.scale_ = f.scale_ * eps;
  return g;
}

namespace {

Distribution parity_part(const Distribution& f, double sign) {
  if (f.dim() != 1) throw std::invalid_argument("even/odd parts need d = 1");
  const Distribution g = f.resolved();
  if (g.geometry() == Geometry::radial) {
    // radial in d = 1 is even already
    return sign > 0 ? g : 0.0 * g;
  }
  Distribution out = g;
  if (g.regular()) {
    const Expr& r = *g.regular();
    out.set_regular(num(0.5) * (r + num(sign) * substitute(r, Var::x, -Expr::variable(Var::x))));
  }
  std::vector<DeltaTerm> terms;
  for (const auto& t : g.deltas()) {
    merge_term(terms, {t.location, t.order, 0.5 * t.coefficient});
    // D^k delta(-x - a) = (-1)^k (D^k delta)(x + a)
    const double refl = (t.order[0] % 2 == 0 ? 1.0 : -1.0) * sign;
    merge_term(terms, {{-t.location[0], 0.0}, t.order, 0.5 * refl * t.coefficient});
  }
  drop_zero_terms(terms);
  return out.with_deltas(std::move(terms));
}

}  // namespace

Distribution even_part(const Distribution& f) { return parity_part(f, 1.0); }
Distribution odd_part(const Distribution& f) { return parity_part(f, -1.0); }

// ---- radial components -------------------------------------------------------

namespace {

struct Table {
  std::vector<double> r, v, d;
  double value(double x) const {
    x = std::fabs(x);
    if (x >= r.back()) return 0.0;
    const auto it = std::upper_bound(r.begin(), r.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
    const double h = r[i + 1] - r[i], t = x - r[i];
    const double slope = (v[i + 1] - v[i]) / h;
    const double c2 = (3 * slope - 2 * d[i] - d[i + 1]) / h;
    const double c3 = (d[i] + d[i + 1] - 2 * slope) / (h * h);
    return v[i] + t * (d[i] + t * (c2 + t * c3));
  }
};

}  // namespace

RadialComponent radialize_testfn(const TestFunction& phi, std::size_t M) {
  if (phi.dim() != 2) throw std::invalid_argument("radialize_testfn: d = 2 test function required");
  if (M < 4) throw std::invalid_argument("radialize_testfn: need at least 4 angles");
  const Point c = phi.support_center();
  const double R = std::hypot(c[0], c[1]) + phi.support_radius();
  std::vector<double> cs(M), sn(M);
  for (std::size_t j = 0; j < M; ++j) {
    const double a = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(M);
    cs[j] = std::cos(a);
    sn[j] = std::sin(a);
  }
  // Exact directional derivatives when the body is differentiable, central
  // differences otherwise (tabulated profiles are piecewise).
  bool symbolic = true;
  try {
    (void)phi.derivative({1, 0}, {0.5 * R, 0.0});
  } catch (const NotDifferentiable&) {
    symbolic = false;
  }
  const double fd = 1e-6 * R;
  auto along = [&](double x, double y, double ct, double st) {
    if (symbolic) return phi.derivative({1, 0}, {x, y}) * ct + phi.derivative({0, 1}, {x, y}) * st;
    return (phi(x + fd * ct, y + fd * st) - phi(x - fd * ct, y - fd * st)) / (2 * fd);
  };
  auto tabulate = [&](std::size_t K) {
    Table t;
    for (std::size_t i = 0; i <= K; ++i) {
      const double r = R * static_cast<double>(i) / static_cast<double>(K);
      double v = 0.0, dv = 0.0;
      for (std::size_t j = 0; j < M; ++j) {
        const double x = r * cs[j], y = r * sn[j];
        v += phi(x, y);
        if (r > 0.0) dv += along(x, y, cs[j], sn[j]);
      }
      t.r.push_back(r);
      t.v.push_back(v / static_cast<double>(M));
      t.d.push_back(dv / static_cast<double>(M));
    }
    t.v.back() = 0.0;
    t.d.back() = 0.0;
    return t;
  };
  std::size_t K = 16;
  Table prev = tabulate(K);
  Table cur = prev;
  for (;;) {
    K *= 2;
    cur = tabulate(K);
    double diff = 0.0;
    for (std::size_t i = 0; i < 4 * K; ++i) {
      const double x = R * (static_cast<double>(i) + 0.5) / static_cast<double>(4 * K);
      diff = std::max(diff, std::fabs(cur.value(x) - prev.value(x)));
    }
    if (diff < 1e-9 || K >= 8192) break;
    prev = cur;
  }
  const Expr ar = abs(Expr::variable(Var::r));
  std::vector<std::tuple<double, double, Expr>> pieces;
  for (std::size_t i = 0; i + 1 < cur.r.size(); ++i) {
    const double h = cur.r[i + 1] - cur.r[i];
    const double slope = (cur.v[i + 1] - cur.v[i]) / h;
    const double c2 = (3 * slope - 2 * cur.d[i] - cur.d[i + 1]) / h;
    const double c3 = (cur.d[i] + cur.d[i + 1] - 2 * slope) / (h * h);
    const Expr t = ar - num(cur.r[i]);
    pieces.emplace_back(cur.r[i], cur.r[i + 1], num(cur.v[i]) + t * (num(cur.d[i]) + t * (num(c2) + t * num(c3))));
  }
  RadialComponent rc;
  rc.profile = Expr::piecewise(ar, pieces);
  rc.source_dim = 2;
  rc.support = R;
  rc.grid = K;
  return rc;
}

TestFunction lift_radial(const RadialComponent& rc) {
  const Expr x = Expr::variable(Var::x), y = Expr::variable(Var::y);
  const Expr body = substitute(rc.profile, Var::r, sqrt(x * x + y * y));
  return TestFunction::from_expr(2, body, {0.0, 0.0}, rc.support, true);
}

Expr radial_pullback(const Distribution& f, int d) {
  if (f.geometry() != Geometry::radial || !f.regular()) throw std::invalid_argument("radial_pullback: radial distribution required");
  const Distribution g = f.resolved();
  const Expr r = Expr::variable(Var::r);
  if (d == 1) return *g.regular();
  return *g.regular() * pow(r, num(static_cast<double>(d - 1)));
}

}  // namespace distval
