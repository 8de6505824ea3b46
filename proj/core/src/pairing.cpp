#include "distval/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace distval {

PairingOptions PairingOptions::oracle() {
  PairingOptions o;
  o.quad.abs_tol = 1e-12;
  o.quad.max_segments *= 2;
  o.quad.max_depth = 50;
  return o;
}

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void worsen(QuadratureResult& r, QuadStatus s) {
  if (static_cast<int>(s) > static_cast<int>(r.status)) r.status = s;
}

// Number of half-periods of the oscillation about s across [a, b] in u.
double half_periods(double omega, double a, double b, double s) {
  return omega * std::fabs(1.0 / (a - s) - 1.0 / (b - s)) / std::numbers::pi;
}

// Regular part over [lo, hi] with breakpoints; essential points inside are
// integrated side by side in u = 1/|x - s|, simple poles under pv by the
// symmetric combination.
template <class F>
QuadratureResult integrate_1d(F&& g, const Expr& f, double lo, double hi, std::vector<double> breaks, bool pv,
                              const QuadratureOptions& opt) {
  QuadratureResult out;
  if (!(hi > lo)) return out;
  const auto sing = singularities(f, lo, hi);
  out.flagged = sing;
  for (const auto& sp : sing) breaks.push_back(sp.location);

  // essential point inside: two semi-infinite u-integrals
  for (const auto& sp : sing) {
    if (sp.kind != SingularKind::essential_oscillation || !(sp.location > lo && sp.location < hi)) continue;
    const double s = sp.location;
    const double omega = oscillation_frequency(f, s);
    if (omega <= 0.0) break;
    QuadratureOptions side = opt;
    side.abs_tol = opt.abs_tol / 4.0;
    QuadratureResult left = essential_side(g, s, lo, omega, side);
    QuadratureResult right = essential_side(g, s, hi, omega, side);
    out.value = left.value + right.value;
    out.error = left.error + right.error;
    out.subdivisions = left.subdivisions + right.subdivisions;
    worsen(out, left.status);
    worsen(out, right.status);
    return out;
  }
  // essential point just outside with many oscillations across the interval
  for (const auto& sp : singularities(f, lo - (hi - lo), hi + (hi - lo))) {
    if (sp.kind != SingularKind::essential_oscillation) continue;
    const double s = sp.location;
    if (s >= lo && s <= hi) continue;
    const double omega = oscillation_frequency(f, s);
    if (omega > 0.0 && half_periods(omega, lo, hi, s) > 40.0) {
      QuadratureResult q = essential_near(g, lo, hi, s, omega, opt);
      q.flagged = sing;
      return q;
    }
  }

  if (pv) {
    for (const auto& sp : sing) {
      if (sp.kind != SingularKind::pole || !(sp.location > lo && sp.location < hi)) continue;
      const double s = sp.location;
      const double h = std::min(s - lo, hi - s);
      QuadratureOptions part = opt;
      part.abs_tol = opt.abs_tol / 3.0;
      auto sym = [&](double t) { return g(s + t) + g(s - t); };
      QuadratureResult mid = adaptive_gk(sym, 0.0, h, part);
      if (!mid.ok()) mid.status = QuadStatus::divergent;
      out += mid;
      std::vector<double> left_b, right_b;
      for (double b : breaks) (b < s ? left_b : right_b).push_back(b);
      out += integrate_1d(g, f, lo, s - h, left_b, pv, part);
      out += integrate_1d(g, f, s + h, hi, right_b, pv, part);
      out.flagged = sing;
      return out;
    }
  }
  std::sort(breaks.begin(), breaks.end());
  QuadratureResult q = adaptive_gk(g, lo, hi, breaks, opt);
  q.flagged = sing;
  const bool has_pole = std::any_of(sing.begin(), sing.end(), [](const SingularPoint& p) { return p.kind == SingularKind::pole; });
  if (!q.ok() && has_pole && !std::isfinite(q.value)) q.status = QuadStatus::divergent;
  return q;
}

std::vector<double> component_breaks(const TestFunction& psi) {
  std::vector<double> b;
  for (const auto& c : psi.components()) b.insert(b.end(), {c.center[0] - c.radius, c.center[0], c.center[0] + c.radius});
  return b;
}

// Union of the r-intervals where the ray o + r w meets the support discs.
std::vector<std::pair<double, double>> ray_cover(const std::vector<std::pair<Point, double>>& discs, const Point& o,
                                                 double ct, double st) {
  std::vector<std::pair<double, double>> iv;
  for (const auto& [c, rho] : discs) {
    const double px = c[0] - o[0], py = c[1] - o[1];
    const double b = px * ct + py * st;
    const double D = b * b - (px * px + py * py) + rho * rho;
    if (D <= 0.0) continue;
    const double sq = std::sqrt(D);
    const double lo = std::max(0.0, b - sq), hi = b + sq;
    if (hi > lo) iv.emplace_back(lo, hi);
  }
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& p : iv) {
    if (!merged.empty() && p.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, p.second);
    } else {
      merged.push_back(p);
    }
  }
  return merged;
}

QuadratureResult integrate_2d(const Distribution& f, const TestFunction& psi, Point o, const QuadratureOptions& opt) {
  // Polar coordinates about f's origin keep its angular structure exact, but
  // a small support far from that origin spans a tiny angle and the rays
  // lose precision; there the support centre is the better pole.
  {
    const Point c = psi.support_center();
    if (std::hypot(c[0] - o[0], c[1] - o[1]) > 2.0 * psi.support_radius()) o = c;
  }
  std::vector<std::pair<Point, double>> discs;
  if (psi.generic()) {
    discs.emplace_back(psi.support_center(), psi.support_radius());
  } else {
    for (const auto& c : psi.components()) discs.emplace_back(c.center, c.radius);
  }
  // angular breakpoints: tangent directions of the discs, their centres and
  // the singular directions of f about o
  std::vector<double> tb;
  double rmax = 0.0;
  for (const auto& [c, rho] : discs) {
    const double px = c[0] - o[0], py = c[1] - o[1];
    const double d = std::hypot(px, py);
    rmax = std::max(rmax, d + rho);
    if (d > rho) {
      const double a = std::atan2(py, px), w = std::asin(rho / d);
      for (double t : {a - w, a, a + w}) tb.push_back(std::remainder(t, 2 * std::numbers::pi));
    }
  }
  if (f.regular()) {
    const Expr t = Expr::variable(Var::x);
    for (double frac : {0.25, 0.5, 0.9}) {
      const double rr = frac * rmax;
      Expr g;
      if (f.geometry() == Geometry::radial) {
        g = substitute(*f.regular(), Var::r,
                       sqrt(pow(Expr::constant(o[0]) + Expr::constant(rr) * cos(t), Expr::constant(2.0)) +
                            pow(Expr::constant(o[1]) + Expr::constant(rr) * sin(t), Expr::constant(2.0))));
      } else {
        g = substitute(*f.regular(), Var::y, Expr::constant(o[1]) + Expr::constant(rr) * sin(t));
        g = substitute(g, Var::x, Expr::constant(o[0]) + Expr::constant(rr) * cos(t));
      }
      for (const auto& sp : singularities(g, -std::numbers::pi, std::numbers::pi)) tb.push_back(sp.location);
    }
  }
  std::sort(tb.begin(), tb.end());
  tb.erase(std::unique(tb.begin(), tb.end()), tb.end());

  QuadratureOptions inner = opt;
  inner.abs_tol = opt.abs_tol / (2 * std::numbers::pi);
  QuadStatus worst = QuadStatus::ok;
  std::size_t subdivisions = 0;
  auto ring = [&](double theta) {
    const double ct = std::cos(theta), st = std::sin(theta);
    double acc = 0.0;
    for (const auto& [a, b] : ray_cover(discs, o, ct, st)) {
      auto g = [&](double r) {
        const Point p{o[0] + r * ct, o[1] + r * st};
        const double w = psi(p[0], p[1]);
        if (w == 0.0) return 0.0;
        return f.regular_at(p) * w * r;
      };
      QuadratureResult q = adaptive_gk(g, a, b, inner);
      subdivisions += q.subdivisions;
      if (static_cast<int>(q.status) > static_cast<int>(worst)) worst = q.status;
      acc += q.value;
    }
    return acc;
  };
  QuadratureResult out = adaptive_gk(ring, -std::numbers::pi, std::numbers::pi, tb, opt);
  out.subdivisions += subdivisions;
  worsen(out, worst);
  return out;
}

// f radial about the origin in R^d, psi radial about the origin: the
// pairing reduces to omega_d * int_0^R f1(r) psi(r) r^(d-1) dr.
QuadratureResult integrate_radial(const Distribution& f, const TestFunction& psi, const QuadratureOptions& opt) {
  const int d = f.radial_dim();
  const double R = psi.support_radius();
  const Expr& f1 = *f.regular();
  auto g = [&](double r) {
    const double w = psi(r, 0.0);
    if (w == 0.0) return 0.0;
    Env env;
    env.set(Var::r, r);
    return f1.eval(env) * w * std::pow(r, d - 1);
  };
  QuadratureOptions o = opt;
  const double area = sphere_area(d);
  o.abs_tol = opt.abs_tol / area;
  std::vector<double> breaks;
  for (const auto& c : psi.components()) breaks.push_back(c.radius);
  Expr fr = substitute(f1, Var::r, Expr::variable(Var::x));
  for (const auto& sp : singularities(fr, 0.0, R)) breaks.push_back(sp.location);
  QuadratureResult q = adaptive_gk(g, 0.0, R, breaks, o);
  q.scale(area);
  return q;
}

}  // namespace

QuadratureResult integrate_against(const Expr& f, const TestFunction& phi, const QuadratureOptions& opt, bool pv) {
  if (phi.dim() != 1) throw std::invalid_argument("integrate_against: d = 1 test function required");
  auto g = [&](double x) {
    const double w = phi(x);
    if (w == 0.0) return 0.0;
    return f(x) * w;
  };
  auto [lo, hi] = phi.support_interval();
  return integrate_1d(g, f, lo, hi, component_breaks(phi), pv, opt);
}

QuadratureResult pair(const Distribution& f, const TestFunction& phi, const PairingOptions& opt) {
  if (phi.dim() != f.dim() && !(f.geometry() == Geometry::radial && phi.dim() == 1))
    throw std::invalid_argument("pair: dimension mismatch between distribution and test function");
  // <f(s + k x), phi(x)> = <f(y), k^-d phi((y - s) / k)>
  const TestFunction psi = f.identity_affine() ? phi : phi.transformed(f.shift(), f.scale());
  QuadratureResult out;

  if (f.regular()) {
    if (f.geometry() == Geometry::radial && (f.radial_dim() >= 3 || (f.dim() == 2 && psi.is_radial()))) {
      if (psi.dim() == 2 && !psi.is_radial()) throw std::invalid_argument("pair: radial distribution needs a radial test function");
      out = integrate_radial(f, psi, opt.quad);
    } else if (f.dim() == 1) {
      Expr g = *f.regular();
      if (f.geometry() == Geometry::radial) g = substitute(g, Var::r, abs(Expr::variable(Var::x)));
      out = integrate_against(g, psi, opt.quad, f.principal_value());
    } else {
      out = integrate_2d(f, psi, f.shift(), opt.quad);
    }
  }
  for (const auto& t : f.deltas()) {
    const int k = t.order[0] + t.order[1];
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    out.value += t.coefficient * sign * psi.derivative(t.order, t.location);
  }
  return out;
}

MomentTable moments(const Distribution& f0, int K) {
  if (f0.dim() != 1) throw std::invalid_argument("moments: d = 1 only");
  if (K < 0) throw std::invalid_argument("moments: K >= 0");
  const Distribution f = f0.resolved();
  MomentTable table;
  table.mu.assign(static_cast<std::size_t>(K) + 1, 0.0);
  table.error.assign(static_cast<std::size_t>(K) + 1, 0.0);
  if (f.regular()) {
    Expr g = *f.regular();
    if (f.geometry() == Geometry::radial) g = substitute(g, Var::r, abs(Expr::variable(Var::x)));
    if (!(g.constant_value() && *g.constant_value() == 0.0)) {
      const auto hull = support_hull(g);
      if (!hull || !std::isfinite(hull->first) || !std::isfinite(hull->second))
        throw std::invalid_argument("moments: regular part must have bounded support");
      QuadratureOptions opt;
      opt.abs_tol = 1e-13;
      for (int k = 0; k <= K; ++k) {
        auto h = [&](double x) { return g(x) * std::pow(x, k); };
        const double lo = hull->first, hi = hull->second;
        if (!(hi > lo)) continue;
        QuadratureResult q = integrate_1d(h, g, lo, hi, {}, f.principal_value(), opt);
        table.mu[static_cast<std::size_t>(k)] = q.value;
        table.error[static_cast<std::size_t>(k)] = q.error;
      }
    }
  }
  for (const auto& t : f.deltas()) {
    const int j = t.order[0];
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    for (int k = j; k <= K; ++k) {
      // <D^j delta(x - a), x^k> = (-1)^j k!/(k-j)! a^(k-j)
      table.mu[static_cast<std::size_t>(k)] +=
          t.coefficient * sign * factorial(k) / factorial(k - j) * std::pow(t.location[0], k - j);
    }
  }
  return table;
}

double moment_expansion_remainder(const Distribution& f, const TestFunction& phi, double lambda, int Q) {
  if (f.dim() != 1) throw std::invalid_argument("moment expansion: d = 1 only");
  if (!(lambda > 0.0)) throw std::invalid_argument("moment expansion: lambda > 0");
  if (Q < 0 || Q > kMaxDeltaOrder) throw std::invalid_argument("moment expansion: Q in [0, 6]");
  const MomentTable mt = moments(f, Q);
  PairingOptions opt;
  // the remainder is O(lambda^-(Q+2)); resolve it well below that
  opt.quad.abs_tol = 1e-19;
  opt.quad.max_depth = 50;
  const double lhs = pair(translate_scale(f, {0.0, 0.0}, lambda), phi, opt).value;
  double series = 0.0;
  for (int q = 0; q <= Q; ++q) {
    series += mt.mu[static_cast<std::size_t>(q)] * phi.derivative({q, 0}, {0.0, 0.0}) /
              (factorial(q) * std::pow(lambda, q + 1));
  }
  return lhs - series;
}

}  // namespace distval
