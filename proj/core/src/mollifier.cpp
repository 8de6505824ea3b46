#include "distval/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace distval {

namespace {

constexpr int kMaxOrder = 6;

double compute_bump_integral(int dim) {
  QuadratureOptions opt;
  opt.abs_tol = 1e-16;
  opt.max_depth = 50;
  if (dim == 1) return adaptive_gk([](double t) { return bump_core(t); }, -1.0, 1.0, opt).value;
  return 2.0 * std::numbers::pi * adaptive_gk([](double r) { return bump_core(r) * r; }, 0.0, 1.0, opt).value;
}

const Expr& bump1_derivative(int k) {
  static std::once_flag once;
  static std::vector<Expr> table;
  std::call_once(once, [] {
    Expr e = Expr::bump(Expr::variable(Var::x));
    table.push_back(e);
    for (int i = 1; i <= kMaxOrder; ++i) table.push_back(differentiate(table.back(), Var::x));
  });
  return table.at(static_cast<std::size_t>(k));
}

// Partial derivatives of bump(sqrt(x^2 + y^2)), built lazily.
Expr bump2_derivative(int kx, int ky) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, Expr> table;
  std::lock_guard<std::mutex> lock(mu);
  auto it = table.find({kx, ky});
  if (it != table.end()) return it->second;
  const Expr x = Expr::variable(Var::x), y = Expr::variable(Var::y);
  Expr e = Expr::bump(sqrt(x * x + y * y));
  e = differentiate(e, Var::x, kx);
  e = differentiate(e, Var::y, ky);
  table.emplace(std::make_pair(kx, ky), e);
  return e;
}

Expr num(double v) { return Expr::constant(v); }

Expr component_expr(int dim, const BumpComponent& c) {
  const Expr x = Expr::variable(Var::x);
  const double amp = c.weight / (std::pow(c.radius, dim) * bump_integral(dim));
  if (dim == 1) return num(amp) * Expr::bump((x - num(c.center[0])) / num(c.radius));
  const Expr y = Expr::variable(Var::y);
  const Expr u = (x - num(c.center[0])) / num(c.radius);
  const Expr v = (y - num(c.center[1])) / num(c.radius);
  return num(amp) * Expr::bump(sqrt(u * u + v * v));
}

Expr generic_transform(int dim, const Expr& body, const Point& shift, double scale) {
  Expr out = substitute(body, Var::x, (Expr::variable(Var::x) - num(shift[0])) / num(scale));
  if (dim == 2) out = substitute(out, Var::y, (Expr::variable(Var::y) - num(shift[1])) / num(scale));
  return num(std::pow(scale, -dim)) * out;
}

}  // namespace

double bump_core(double t) {
  const double a = std::fabs(t);
  if (a >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - a * a));
}

double bump_core_derivative(int k, double t) {
  if (k == 0) return bump_core(t);
  if (k < 0 || k > kMaxOrder) throw std::invalid_argument("derivative order must be in [0, 6]");
  if (std::fabs(t) >= 1.0) return 0.0;
  return bump1_derivative(k)(t);
}

double bump_integral(int dim) {
  static const double n1 = compute_bump_integral(1);
  static const double n2 = compute_bump_integral(2);
  if (dim == 1) return n1;
  if (dim == 2) return n2;
  throw std::invalid_argument("bump_integral: dim must be 1 or 2");
}

TestFunction TestFunction::from_components(int dim, std::vector<BumpComponent> comps) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("test function dimension must be 1 or 2");
  if (comps.empty()) throw std::invalid_argument("test function needs at least one component");
  TestFunction tf;
  tf.dim_ = dim;
  double total = 0.0;
  Expr body = num(0.0);
  for (auto& c : comps) {
    if (!(c.radius > 0.0)) throw std::invalid_argument("bump radius must be positive");
    if (c.weight < 0.0) throw std::invalid_argument("mixture weight must be nonnegative");
    if (dim == 1) c.center[1] = 0.0;
    total += c.weight;
    body = body + component_expr(dim, c);
  }
  tf.comps_ = std::move(comps);
  tf.body_ = body;
  tf.normalization_ = total;
  tf.normalization_error_ = total * 1e-15;
  return tf;
}

TestFunction TestFunction::from_expr(int dim, Expr body, Point center, double support_radius, bool radial) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("test function dimension must be 1 or 2");
  if (!(support_radius > 0.0)) throw std::invalid_argument("support radius must be positive");
  TestFunction tf;
  tf.dim_ = dim;
  tf.body_ = std::move(body);
  tf.generic_center_ = center;
  if (dim == 1) tf.generic_center_[1] = 0.0;
  tf.generic_radius_ = support_radius;
  tf.generic_radial_ = radial;
  QuadratureOptions opt;
  opt.abs_tol = 1e-12;
  QuadratureResult q;
  if (dim == 1) {
    q = adaptive_gk([&](double x) { return tf.body_(x); }, center[0] - support_radius, center[0] + support_radius, opt);
  } else {
    q = integrate_disc([&](double x, double y) { return tf.body_(x, y); }, center[0], center[1], support_radius, opt);
  }
  tf.normalization_ = q.value;
  tf.normalization_error_ = q.error;
  return tf;
}

double TestFunction::operator()(double x) const {
  if (comps_.empty()) return dim_ == 1 ? body_(x) : body_(x, 0.0);
  double s = 0.0;
  const double n = bump_integral(dim_);
  for (const auto& c : comps_) {
    if (dim_ == 1) {
      s += c.weight / (c.radius * n) * bump_core((x - c.center[0]) / c.radius);
    } else {
      const double dx = (x - c.center[0]) / c.radius, dy = c.center[1] / c.radius;
      s += c.weight / (c.radius * c.radius * n) * bump_core(std::sqrt(dx * dx + dy * dy));
    }
  }
  return s;
}

double TestFunction::operator()(double x, double y) const {
  if (dim_ == 1) return (*this)(x);
  if (comps_.empty()) return body_(x, y);
  double s = 0.0;
  const double n = bump_integral(2);
  for (const auto& c : comps_) {
    const double dx = (x - c.center[0]) / c.radius, dy = (y - c.center[1]) / c.radius;
    const double t2 = dx * dx + dy * dy;
    if (t2 >= 1.0) continue;
    s += c.weight / (c.radius * c.radius * n) * std::exp(-1.0 / (1.0 - t2));
  }
  return s;
}

double TestFunction::derivative(const MultiIndex& k, const Point& at) const {
  if (k[0] < 0 || k[1] < 0 || k[0] + k[1] > kMaxOrder) throw std::invalid_argument("derivative order must be <= 6");
  if (dim_ == 1 && k[1] != 0) return 0.0;
  if (comps_.empty()) {
    Expr e = differentiate(body_, Var::x, k[0]);
    if (dim_ == 2) e = differentiate(e, Var::y, k[1]);
    Env env;
    env.set(Var::x, at[0]).set(Var::y, at[1]);
    return e.eval(env);
  }
  const double n = bump_integral(dim_);
  double s = 0.0;
  if (dim_ == 1) {
    for (const auto& c : comps_) {
      const double t = (at[0] - c.center[0]) / c.radius;
      if (std::fabs(t) >= 1.0) continue;
      s += c.weight / n * std::pow(c.radius, -1 - k[0]) * bump_core_derivative(k[0], t);
    }
    return s;
  }
  const Expr d = bump2_derivative(k[0], k[1]);
  for (const auto& c : comps_) {
    const double u = (at[0] - c.center[0]) / c.radius, v = (at[1] - c.center[1]) / c.radius;
    if (u * u + v * v >= 1.0) continue;
    s += c.weight / n * std::pow(c.radius, -2 - k[0] - k[1]) * d(u, v);
  }
  return s;
}

Point TestFunction::support_center() const {
  if (comps_.empty()) return generic_center_;
  if (dim_ == 1) {
    auto [lo, hi] = support_interval();
    return {0.5 * (lo + hi), 0.0};
  }
  Point c{0.0, 0.0};
  for (const auto& b : comps_) {
    c[0] += b.center[0];
    c[1] += b.center[1];
  }
  c[0] /= static_cast<double>(comps_.size());
  c[1] /= static_cast<double>(comps_.size());
  return c;
}

double TestFunction::support_radius() const {
  if (comps_.empty()) return generic_radius_;
  const Point c = support_center();
  double r = 0.0;
  for (const auto& b : comps_) r = std::max(r, std::hypot(b.center[0] - c[0], b.center[1] - c[1]) + b.radius);
  return r;
}

std::pair<double, double> TestFunction::support_interval() const {
  if (comps_.empty()) return {generic_center_[0] - generic_radius_, generic_center_[0] + generic_radius_};
  double lo = comps_[0].center[0] - comps_[0].radius, hi = comps_[0].center[0] + comps_[0].radius;
  for (const auto& b : comps_) {
    lo = std::min(lo, b.center[0] - b.radius);
    hi = std::max(hi, b.center[0] + b.radius);
  }
  return {lo, hi};
}

bool TestFunction::is_even(double tol) const {
  const Point c = support_center();
  const double R = std::hypot(c[0], c[1]) + support_radius();
  const double scale = std::max(1.0, std::fabs((*this)(0.0, 0.0)));
  for (int i = 0; i <= 200; ++i) {
    const double x = -R + 2.0 * R * i / 200.0;
    if (dim_ == 1) {
      if (std::fabs((*this)(x) - (*this)(-x)) > tol * scale) return false;
    } else {
      for (int j = 0; j <= 40; ++j) {
        const double y = -R + 2.0 * R * j / 40.0;
        if (std::fabs((*this)(x, y) - (*this)(-x, -y)) > tol * scale) return false;
      }
    }
  }
  return true;
}

bool TestFunction::is_radial() const {
  if (comps_.empty()) return generic_radial_;
  for (const auto& b : comps_)
    if (b.center[0] != 0.0 || b.center[1] != 0.0) return false;
  return true;
}

TestFunction TestFunction::transformed(const Point& shift, double scale) const {
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  if (comps_.empty()) {
    TestFunction tf = *this;
    tf.body_ = generic_transform(dim_, body_, shift, scale);
    tf.generic_center_ = {shift[0] + scale * generic_center_[0], shift[1] + scale * generic_center_[1]};
    tf.generic_radius_ = scale * generic_radius_;
    tf.generic_radial_ = generic_radial_ && shift[0] == 0.0 && shift[1] == 0.0;
    return tf;
  }
  std::vector<BumpComponent> out = comps_;
  for (auto& b : out) {
    b.center = {shift[0] + scale * b.center[0], dim_ == 2 ? shift[1] + scale * b.center[1] : 0.0};
    b.radius *= scale;
  }
  return from_components(dim_, std::move(out));
}

TestFunction TestFunction::rotated(double angle) const {
  if (dim_ == 1) return reflected();
  const double c = std::cos(angle), s = std::sin(angle);
  if (comps_.empty()) {
    const Expr x = Expr::variable(Var::x), y = Expr::variable(Var::y);
    // phi(T^-1 p): T^-1 (x, y) = (c x + s y, -s x + c y)
    Expr e = substitute(body_, Var::x, Expr::variable(Var::r));
    e = substitute(e, Var::y, num(-s) * x + num(c) * y);
    e = substitute(e, Var::r, num(c) * x + num(s) * y);
    TestFunction tf = *this;
    tf.body_ = e;
    tf.generic_center_ = {c * generic_center_[0] - s * generic_center_[1], s * generic_center_[0] + c * generic_center_[1]};
    return tf;
  }
  std::vector<BumpComponent> out = comps_;
  for (auto& b : out) b.center = {c * b.center[0] - s * b.center[1], s * b.center[0] + c * b.center[1]};
  return from_components(2, std::move(out));
}

TestFunction TestFunction::reflected() const {
  if (dim_ == 2) return rotated(std::numbers::pi);
  if (comps_.empty()) {
    TestFunction tf = *this;
    tf.body_ = substitute(body_, Var::x, -Expr::variable(Var::x));
    tf.generic_center_[0] = -generic_center_[0];
    return tf;
  }
  std::vector<BumpComponent> out = comps_;
  for (auto& b : out) b.center[0] = -b.center[0];
  return from_components(1, std::move(out));
}

TestFunctionCheck TestFunction::verify() const {
  TestFunctionCheck chk;
  QuadratureOptions opt;
  opt.abs_tol = 1e-12;
  if (dim_ == 1) {
    auto [lo, hi] = support_interval();
    for (int i = 0; i < 1000; ++i) {
      const double x = lo + (hi - lo) * (i + 0.5) / 1000.0;
      if (!((*this)(x) >= 0.0)) chk.positive = false;
    }
    std::vector<double> breaks;
    for (const auto& b : comps_) {
      breaks.push_back(b.center[0] - b.radius);
      breaks.push_back(b.center[0]);
      breaks.push_back(b.center[0] + b.radius);
    }
    // independent of the certificate: integrate the symbolic body
    auto q = adaptive_gk([&](double x) { return body_(x); }, lo, hi, breaks, opt);
    chk.integral = q.value;
    chk.integral_error = q.error;
    const double w = hi - lo;
    for (double x : {lo - 1e-9 * w, lo - 0.25 * w, hi + 1e-9 * w, hi + 0.25 * w})
      if ((*this)(x) != 0.0 || body_(x) != 0.0) chk.support_ok = false;
  } else {
    const Point c = support_center();
    const double R = support_radius();
    for (int i = 0; i < 32; ++i) {
      for (int j = 0; j < 32; ++j) {
        const double x = c[0] - R + 2 * R * (i + 0.5) / 32.0, y = c[1] - R + 2 * R * (j + 0.5) / 32.0;
        if (!((*this)(x, y) >= 0.0)) chk.positive = false;
      }
    }
    double total = 0.0, err = 0.0;
    if (comps_.empty()) {
      auto q = integrate_disc([&](double x, double y) { return body_(x, y); }, c[0], c[1], R, opt);
      total = q.value;
      err = q.error;
    } else {
      // each component separately, through the symbolic body restricted to it
      for (const auto& b : comps_) {
        const Expr piece = component_expr(2, b);
        auto q = integrate_disc([&](double x, double y) { return piece(x, y); }, b.center[0], b.center[1], b.radius, opt);
        total += q.value;
        err += q.error;
      }
    }
    chk.integral = total;
    chk.integral_error = err;
    for (int k = 0; k < 16; ++k) {
      const double a = 2 * std::numbers::pi * k / 16.0;
      const double x = c[0] + R * (1 + 1e-9) * std::cos(a), y = c[1] + R * (1 + 1e-9) * std::sin(a);
      if ((*this)(x, y) != 0.0 || body_(x, y) != 0.0) chk.support_ok = false;
    }
  }
  chk.normalized = std::fabs(chk.integral - 1.0) <= 1e-9;
  return chk;
}

std::string TestFunction::describe() const {
  std::ostringstream os;
  os.precision(6);
  if (comps_.empty()) {
    os << "expr[" << body_.str() << "]";
    return os.str();
  }
  os << "mix[";
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    if (i) os << " + ";
    os << comps_[i].weight << "*B(" << comps_[i].center[0];
    if (dim_ == 2) os << "," << comps_[i].center[1];
    os << ";" << comps_[i].radius << ")";
  }
  os << "]";
  return os.str();
}

TestFunction canonical_bump(int dim) { return TestFunction::from_components(dim, {{1.0, {0.0, 0.0}, 1.0}}); }

TestFunction affine_bump(const Point& center, double radius, int dim) {
  if (!(radius > 0.0)) throw std::invalid_argument("affine_bump: radius must be positive");
  return TestFunction::from_components(dim, {{1.0, center, radius}});
}

TestFunction affine_bump(double center, double radius) { return affine_bump(Point{center, 0.0}, radius, 1); }

TestFunction mixture(const std::vector<std::pair<double, TestFunction>>& parts) {
  if (parts.empty()) throw std::invalid_argument("mixture: empty");
  const int dim = parts.front().second.dim();
  std::vector<BumpComponent> comps;
  double total = 0.0;
  for (const auto& [w, tf] : parts) {
    if (w < 0.0) throw std::invalid_argument("mixture: negative weight");
    if (tf.generic()) throw std::invalid_argument("mixture: only bump mixtures can be combined");
    if (tf.dim() != dim) throw std::invalid_argument("mixture: dimension mismatch");
    total += w;
    for (auto c : tf.components()) {
      c.weight *= w;
      comps.push_back(c);
    }
  }
  if (std::fabs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture: weights must sum to 1");
  return TestFunction::from_components(dim, std::move(comps));
}

TestFunction symmetrize(const TestFunction& phi) { return mixture({{0.5, phi}, {0.5, phi.reflected()}}); }

// ---- delta sequences --------------------------------------------------------

namespace {

double eval_n(const Expr& e, std::size_t n) {
  Env env;
  env.set(Var::n, static_cast<double>(n));
  return e.eval(env);
}

}  // namespace

TestFunction DeltaSequenceSpec::member(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("sequence index starts at 1");
  switch (kind) {
    case SequenceKind::standard: {
      const double s = eval_n(xi, n);
      if (!(s > 0.0) || !std::isfinite(s)) throw std::domain_error("xi(n) must be positive and finite");
      return base->transformed({0.0, 0.0}, 1.0 / s);
    }
    case SequenceKind::shifted:
      return affine_bump(center(n), radius(n), dim);
    case SequenceKind::explicit_list:
      return members.at(n - 1);
  }
  throw std::logic_error("unknown sequence kind");
}

Point DeltaSequenceSpec::center(std::size_t n) const {
  switch (kind) {
    case SequenceKind::standard:
      return {0.0, 0.0};
    case SequenceKind::shifted: {
      const double c = eval_n(centers, n);
      if (dim == 1) return {c, 0.0};
      return {c * std::cos(direction), c * std::sin(direction)};
    }
    case SequenceKind::explicit_list:
      return members.at(n - 1).support_center();
  }
  return {0.0, 0.0};
}

double DeltaSequenceSpec::radius(std::size_t n) const {
  switch (kind) {
    case SequenceKind::standard: {
      const Point c = base->support_center();
      return (std::hypot(c[0], c[1]) + base->support_radius()) / eval_n(xi, n);
    }
    case SequenceKind::shifted: {
      const double c = std::fabs(eval_n(centers, n));
      double r = std::min(eval_n(radii, n), 1.0 / static_cast<double>(n));
      if (c > 0.0) r = std::min(r, 0.5 * c);
      return r;
    }
    case SequenceKind::explicit_list:
      return members.at(n - 1).support_radius();
  }
  return 0.0;
}

double DeltaSequenceSpec::scale(std::size_t n) const {
  if (kind == SequenceKind::standard) return eval_n(xi, n);
  return 1.0 / radius(n);
}

double DeltaSequenceSpec::param(std::size_t n) const {
  if (kind == SequenceKind::standard) return 1.0 / eval_n(xi, n);
  const Point c = center(n);
  const double d = std::hypot(c[0], c[1]);
  return d > 0.0 ? d : radius(n);
}

DeltaSequenceSpec standard_sequence(const TestFunction& base, const Expr& xi, std::size_t N) {
  if (xi.uses(Var::x) || xi.uses(Var::y) || xi.uses(Var::r)) throw std::invalid_argument("xi must depend on n only");
  DeltaSequenceSpec s;
  s.kind = SequenceKind::standard;
  s.dim = base.dim();
  s.length = N;
  s.base = base;
  s.xi = xi;
  double prev = 0.0;
  for (std::size_t n = 1; n <= N; ++n) {
    const double v = eval_n(xi, n);
    if (!(v > 0.0)) throw std::invalid_argument("xi(n) must be positive for n = 1..N (fails at n = " + std::to_string(n) + ")");
    if (v <= prev && s.warnings.empty()) s.warnings.push_back("xi(n) is not increasing at n = " + std::to_string(n));
    prev = v;
  }
  if (std::fabs(base.normalization() - 1.0) > 1e-9) s.warnings.push_back("base test function is not normalized");
  s.label = "standard " + base.describe() + " xi=" + xi.str();
  return s;
}

DeltaSequenceSpec shifted_sequence(const Expr& centers, const Expr& radii, std::size_t N, int dim, double direction) {
  DeltaSequenceSpec s;
  s.kind = SequenceKind::shifted;
  s.dim = dim;
  s.length = N;
  s.centers = centers;
  s.radii = radii;
  s.direction = direction;
  for (std::size_t n = 1; n <= N; ++n) {
    if (!(s.radius(n) > 0.0)) throw std::invalid_argument("radii(n) must be positive (n = " + std::to_string(n) + ")");
  }
  // centres -> 0 heuristic: the tail of |centres| must shrink below the first
  const double c1 = std::fabs(eval_n(centers, 1)), cN = std::fabs(eval_n(centers, N));
  if (!(cN < 0.5 * c1 || cN < 1e-8)) s.warnings.push_back("centers(n) does not appear to tend to 0");
  s.label = "shifted centers=" + centers.str() + " radii=" + radii.str();
  return s;
}

DeltaSequenceSpec explicit_sequence(std::vector<TestFunction> members) {
  if (members.empty()) throw std::invalid_argument("explicit sequence is empty");
  DeltaSequenceSpec s;
  s.kind = SequenceKind::explicit_list;
  s.dim = members.front().dim();
  s.length = members.size();
  s.members = std::move(members);
  s.label = "explicit";
  return s;
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::F:
      return "F";
    case Family::F_sy:
      return "F_sy";
    case Family::F_rad:
      return "F_rad";
    case Family::F_all:
      return "F_all";
  }
  return "?";
}

std::optional<Family> family_from_name(std::string_view name) {
  for (Family f : {Family::F, Family::F_sy, Family::F_rad, Family::F_all})
    if (family_name(f) == name) return f;
  return std::nullopt;
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() {
  // 53 random bits; independent of the standard library's distributions,
  // which are not reproducible across implementations
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

namespace {

Point random_point(Rng& rng, int dim, double rmax) {
  if (dim == 1) return {rng.uniform(-rmax, rmax), 0.0};
  const double r = rmax * std::sqrt(rng.uniform());
  const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return {r * std::cos(a), r * std::sin(a)};
}

std::vector<double> random_weights(Rng& rng, std::size_t m) {
  std::vector<double> w(m);
  double total = 0.0;
  for (auto& x : w) total += (x = rng.uniform(0.1, 1.0));
  for (auto& x : w) x /= total;
  return w;
}

TestFunction random_mixture(Rng& rng, int dim, std::size_t cap) {
  const std::size_t m = 1 + rng.below(cap);
  const auto w = random_weights(rng, m);
  std::vector<BumpComponent> comps;
  for (std::size_t i = 0; i < m; ++i) comps.push_back({w[i], random_point(rng, dim, 0.8), rng.uniform(0.2, 1.0)});
  return TestFunction::from_components(dim, std::move(comps));
}

TestFunction random_radial(Rng& rng, int dim, std::size_t cap) {
  const std::size_t m = 1 + rng.below(cap);
  const auto w = random_weights(rng, m);
  std::vector<BumpComponent> comps;
  for (std::size_t i = 0; i < m; ++i) comps.push_back({w[i], {0.0, 0.0}, rng.uniform(0.2, 1.0)});
  return TestFunction::from_components(dim, std::move(comps));
}

// Mixture supported inside the unit ball.
TestFunction random_contained(Rng& rng, int dim, std::size_t cap) {
  const std::size_t m = 1 + rng.below(cap);
  const auto w = random_weights(rng, m);
  std::vector<BumpComponent> comps;
  for (std::size_t i = 0; i < m; ++i) {
    const Point c = random_point(rng, dim, 0.5);
    const double room = 1.0 - std::hypot(c[0], c[1]);
    comps.push_back({w[i], c, room * rng.uniform(0.3, 1.0)});
  }
  return TestFunction::from_components(dim, std::move(comps));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::vector<DeltaSequenceSpec> sample_family(const FamilySampler& s, std::size_t count) {
  if (count == 0) throw std::invalid_argument("sample_family: count must be >= 1");
  if (s.max_mixture == 0) throw std::invalid_argument("sample_family: mixture cap must be >= 1");
  Rng rng(s.seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(s.family) + 1)));
  const Expr n = Expr::variable(Var::n);
  std::vector<DeltaSequenceSpec> out;
  for (std::size_t i = 0; i < count; ++i) {
    switch (s.family) {
      case Family::F:
        out.push_back(standard_sequence(random_mixture(rng, s.dim, s.max_mixture), n, s.length));
        break;
      case Family::F_sy:
        out.push_back(standard_sequence(symmetrize(random_mixture(rng, s.dim, s.max_mixture)), n, s.length));
        break;
      case Family::F_rad:
        out.push_back(standard_sequence(random_radial(rng, s.dim, s.max_mixture), n, s.length));
        break;
      case Family::F_all: {
        if (i % 2 == 0) {
          // c n^-p centres with support radius kappa * c_n^2 (clamped to
          // min(1/n, |c_n|/2)): shrinking, shifted, never centred
          const double c = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(1e-3, 5e-3);
          const double p = rng.uniform(s.p_lo, s.p_hi);
          const double kappa = rng.uniform(0.005, 0.05);
          const double dir = s.dim == 2 ? rng.uniform(0.0, 2.0 * std::numbers::pi) : 0.0;
          const Expr centers = parse(fmt(c) + "*n^(" + fmt(-p) + ")");
          const Expr radii = parse(fmt(kappa) + "*(" + fmt(c) + "*n^(" + fmt(-p) + "))^2");
          out.push_back(shifted_sequence(centers, radii, s.length, s.dim, dir));
        } else {
          const double a = rng.uniform(1.0, 2.0);
          out.push_back(standard_sequence(random_contained(rng, s.dim, s.max_mixture), parse(fmt(a) + "*n"), s.length));
        }
        break;
      }
    }
    out.back().label = std::string(family_name(s.family)) + "#" + std::to_string(i) + " " + out.back().label;
  }
  return out;
}

std::vector<double> tail_mass(const DeltaSequenceSpec& seq, std::pair<double, double> B, std::pair<double, double> U) {
  if (seq.dim != 1) throw std::invalid_argument("tail_mass: d = 1 only");
  if (!(B.first <= U.first && U.second <= B.second && U.first < 0.0 && 0.0 < U.second))
    throw std::invalid_argument("tail_mass: need U inside B, both containing 0");
  QuadratureOptions opt;
  opt.abs_tol = 1e-12;
  std::vector<double> out;
  for (std::size_t n = 1; n <= seq.length; ++n) {
    const TestFunction phi = seq.member(n);
    auto [lo, hi] = phi.support_interval();
    std::vector<double> breaks;
    for (const auto& c : phi.components()) breaks.insert(breaks.end(), {c.center[0] - c.radius, c.center[0], c.center[0] + c.radius});
    auto f = [&](double x) { return phi(x); };
    double mass = 0.0;
    const double a1 = std::max(B.first, lo), b1 = std::min(U.first, hi);
    if (a1 < b1) mass += adaptive_gk(f, a1, b1, breaks, opt).value;
    const double a2 = std::max(U.second, lo), b2 = std::min(B.second, hi);
    if (a2 < b2) mass += adaptive_gk(f, a2, b2, breaks, opt).value;
    out.push_back(mass);
  }
  return out;
}

double delta_probe_error(const DeltaSequenceSpec& seq, std::size_t n) {
  // Smooth probes; the last one has a small slope at 0 so that mixtures with
  // off-centre mass still show their O(1/n) first-moment error.
  static const std::vector<Expr> probes1 = {parse("cos(x)"), parse("exp(-x^2)"), parse("1/(1+x^2)"), parse("1+x^2"),
                                            parse("1+0.1*sin(x)")};
  static const std::vector<Expr> probes2 = {parse("cos(x)*cos(y)"), parse("exp(-x^2-y^2)"), parse("1/(1+x^2+y^2)"),
                                            parse("1+x^2+y^2"), parse("1+0.1*sin(x+y)")};
  const TestFunction phi = seq.member(n);
  QuadratureOptions opt;
  opt.abs_tol = 1e-11;
  double worst = 0.0;
  const auto& probes = seq.dim == 1 ? probes1 : probes2;
  for (const auto& g : probes) {
    double value = 0.0;
    for (const auto& c : phi.components()) {
      // integrate component by component over its own support
      const TestFunction part = TestFunction::from_components(seq.dim, {c});
      if (seq.dim == 1) {
        value += adaptive_gk([&](double x) { return part(x) * g(x); }, c.center[0] - c.radius, c.center[0] + c.radius, opt).value;
      } else {
        value += integrate_disc([&](double x, double y) { return part(x, y) * g(x, y); }, c.center[0], c.center[1], c.radius, opt).value;
      }
    }
    worst = std::max(worst, std::fabs(value - g(0.0, 0.0)));
  }
  return worst;
}

}  // namespace distval
