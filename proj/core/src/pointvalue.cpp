#include "distval/pointvalue.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "distval/parallel.hpp"

namespace distval {

std::string_view verdict_name(VerdictTag t) {
  switch (t) {
    case VerdictTag::converged:
      return "Converged";
    case VerdictTag::diverged:
      return "Diverged";
    case VerdictTag::non_constant_profile:
      return "NonConstantProfile";
    case VerdictTag::inconclusive:
      return "Inconclusive";
  }
  return "?";
}

LimitVerdict classify_series(std::vector<RawSample> raw, const std::vector<double>& param,
                             const std::vector<double>& scale, const LimitOptions& opt) {
  LimitVerdict v;
  v.raw = std::move(raw);
  const std::size_t n = v.raw.size();
  std::size_t bad = 0;
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = v.raw[i].value;
    if (v.raw[i].status != QuadStatus::ok || !std::isfinite(values[i])) ++bad;
  }
  if (static_cast<double>(bad) > opt.max_inaccurate * static_cast<double>(n)) {
    v.note = std::to_string(bad) + " of " + std::to_string(n) + " pairings inaccurate";
    return v;
  }
  if (n < opt.window) {
    v.note = "series shorter than the tail window";
    return v;
  }
  const GrowthFit g = growth_fit(scale, values);
  v.growth_exponent = g.exponent;
  v.growth_r2 = g.r2;
  if (g.diverged) {
    v.tag = VerdictTag::diverged;
    return v;
  }
  const TailCheck t = tail_criterion(param, values, opt.tail());
  if (t.converged) {
    v.tag = VerdictTag::converged;
    v.gamma = t.value;
    v.error = t.error;
    v.accelerated = t.accelerated;
  } else {
    v.gamma = t.value;
    v.error = t.error;
    v.note = "tail did not settle";
  }
  return v;
}

LimitVerdict sequence_limit(const Distribution& f, const Point& x0, const DeltaSequenceSpec& seq, std::size_t N,
                            const LimitOptions& opt) {
  if (N < 16) throw std::invalid_argument("sequence_limit: N must be >= 16");
  if (seq.dim != f.dim()) throw std::invalid_argument("sequence_limit: dimension mismatch");
  if (seq.kind == SequenceKind::explicit_list && seq.members.size() < N)
    throw std::invalid_argument("sequence_limit: explicit sequence shorter than N");
  const Distribution g = translate_scale(f, x0, 1.0);
  std::vector<RawSample> raw(N);
  std::vector<double> param(N), scale(N);
  parallel_for(N, opt.threads, [&](std::size_t i) {
    const std::size_t n = i + 1;
    const QuadratureResult q = pair(g, seq.member(n), opt.pairing);
    raw[i] = {static_cast<double>(n), q.value, q.error, q.status};
    param[i] = seq.param(n);
    scale[i] = seq.scale(n);
  });
  return classify_series(std::move(raw), param, scale, opt);
}

std::vector<double> default_eps_grid() {
  std::vector<double> eps;
  for (int j = 0; j <= 20; ++j) eps.push_back(std::ldexp(1.0, -j));
  return eps;
}

namespace {

std::vector<TestFunction> make_basis(int dim) {
  std::vector<TestFunction> b;
  if (dim == 1) {
    for (double c : {0.2, 0.5, 0.8}) {
      b.push_back(affine_bump(c, 1.0));
      b.push_back(affine_bump(-c, 1.0));
    }
    b.push_back(mixture({{0.5, affine_bump(-0.3, 0.5)}, {0.5, affine_bump(0.6, 0.4)}}));
    b.push_back(mixture({{0.3, affine_bump(0.1, 0.3)}, {0.7, affine_bump(-0.4, 0.6)}}));
    b.push_back(mixture({{0.25, affine_bump(-0.5, 0.5)}, {0.5, affine_bump(0.0, 0.5)}, {0.25, affine_bump(0.5, 0.5)}}));
    for (double r : {0.5, 1.0, 1.5}) b.push_back(affine_bump(0.0, r));
    return b;
  }
  for (double c : {0.2, 0.5, 0.8}) {
    const double a = 0.7 * c;  // on the diagonal for the middle pair
    b.push_back(affine_bump({c, 0.0}, 1.0, 2));
    b.push_back(affine_bump(c == 0.5 ? Point{-a, a} : Point{0.0, -c}, 1.0, 2));
  }
  b.push_back(mixture({{0.5, affine_bump({-0.3, 0.1}, 0.5, 2)}, {0.5, affine_bump({0.4, 0.3}, 0.4, 2)}}));
  b.push_back(mixture({{0.3, affine_bump({0.1, -0.2}, 0.3, 2)}, {0.7, affine_bump({-0.4, 0.2}, 0.6, 2)}}));
  b.push_back(mixture({{0.5, affine_bump({-0.4, 0.0}, 0.5, 2)}, {0.5, affine_bump({0.4, 0.0}, 0.5, 2)}}));
  for (double r : {0.5, 1.0, 1.5}) b.push_back(affine_bump({0.0, 0.0}, r, 2));
  return b;
}

}  // namespace

const std::vector<TestFunction>& default_basis(int dim) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("default_basis: dim must be 1 or 2");
  static const std::vector<TestFunction> b1 = make_basis(1);
  static const std::vector<TestFunction> b2 = make_basis(2);
  return dim == 1 ? b1 : b2;
}

const std::vector<TestFunction>& even_basis() {
  static const std::vector<TestFunction> b = [] {
    std::vector<TestFunction> out;
    for (double r : {0.5, 1.0, 1.5}) out.push_back(affine_bump(0.0, r));
    for (double c : {0.2, 0.5, 0.8}) out.push_back(symmetrize(affine_bump(c, 1.0)));
    out.push_back(mixture({{0.25, affine_bump(-0.5, 0.5)}, {0.5, affine_bump(0.0, 0.5)}, {0.25, affine_bump(0.5, 0.5)}}));
    return out;
  }();
  return b;
}

const std::vector<TestFunction>& radial_basis() {
  static const std::vector<TestFunction> b = [] {
    std::vector<TestFunction> out;
    for (double r : {0.5, 1.0, 1.5}) out.push_back(affine_bump({0.0, 0.0}, r, 2));
    out.push_back(mixture({{0.5, affine_bump({0.0, 0.0}, 0.4, 2)}, {0.5, affine_bump({0.0, 0.0}, 1.0, 2)}}));
    out.push_back(lift_radial(radialize_testfn(affine_bump({0.3, 0.1}, 0.6, 2))));
    out.push_back(lift_radial(radialize_testfn(affine_bump({-0.2, 0.4}, 0.5, 2))));
    return out;
  }();
  return b;
}

LimitVerdict combine_verdicts(const std::vector<LimitVerdict>& parts, double tol) {
  LimitVerdict out;
  if (parts.empty()) {
    out.note = "no probes";
    return out;
  }
  bool all_converged = true;
  bool any_diverged = false;
  double exponent = 0.0;
  for (const auto& p : parts) {
    all_converged = all_converged && p.converged();
    if (p.tag == VerdictTag::diverged) {
      any_diverged = true;
      exponent = std::max(exponent, p.growth_exponent);
    }
  }
  if (any_diverged) {
    out.tag = VerdictTag::diverged;
    out.growth_exponent = exponent;
    return out;
  }
  if (!all_converged) {
    std::size_t k = 0;
    for (const auto& p : parts) k += p.converged() ? 0 : 1;
    out.note = std::to_string(k) + " of " + std::to_string(parts.size()) + " probes did not converge";
    return out;
  }
  double lo = parts[0].gamma, hi = parts[0].gamma, sum = 0.0, err = 0.0;
  for (const auto& p : parts) {
    lo = std::min(lo, p.gamma);
    hi = std::max(hi, p.gamma);
    sum += p.gamma;
    err = std::max(err, p.error);
  }
  if (hi - lo <= tol) {
    out.tag = VerdictTag::converged;
    out.gamma = sum / static_cast<double>(parts.size());
    out.error = (hi - lo) + err;
    return out;
  }
  out.tag = VerdictTag::non_constant_profile;
  for (std::size_t i = 0; i < parts.size(); ++i) out.profile.emplace_back(static_cast<double>(i), parts[i].gamma);
  out.note = "probe limits spread over " + std::to_string(hi - lo);
  return out;
}

LojasiewiczResult lojasiewicz_value(const Distribution& f, const Point& x0, const std::vector<TestFunction>& basis,
                                    const std::vector<double>& eps_grid, const LimitOptions& opt) {
  if (basis.empty()) throw std::invalid_argument("lojasiewicz_value: empty basis");
  if (eps_grid.size() < opt.window) throw std::invalid_argument("lojasiewicz_value: eps grid shorter than the window");
  for (std::size_t j = 0; j < eps_grid.size(); ++j) {
    if (!(eps_grid[j] > 0.0) || (j > 0 && !(eps_grid[j] < eps_grid[j - 1])))
      throw std::invalid_argument("lojasiewicz_value: eps grid must be positive and decreasing");
  }
  for (const auto& phi : basis)
    if (phi.dim() != f.dim()) throw std::invalid_argument("lojasiewicz_value: basis dimension mismatch");

  const std::size_t P = basis.size(), E = eps_grid.size();
  std::vector<RawSample> raw(P * E);
  parallel_for(P * E, opt.threads, [&](std::size_t t) {
    const std::size_t i = t / E, j = t % E;
    const double eps = eps_grid[j];
    const QuadratureResult q = pair(translate_scale(f, x0, eps), basis[i], opt.pairing);
    const double norm = basis[i].normalization();
    raw[t] = {eps, q.value / norm, q.error / norm, q.status};
  });

  LojasiewiczResult out;
  std::vector<double> scale(E);
  for (std::size_t j = 0; j < E; ++j) scale[j] = 1.0 / eps_grid[j];
  for (std::size_t i = 0; i < P; ++i) {
    std::vector<RawSample> series(raw.begin() + static_cast<std::ptrdiff_t>(i * E),
                                  raw.begin() + static_cast<std::ptrdiff_t>((i + 1) * E));
    out.per_phi.push_back(classify_series(std::move(series), eps_grid, scale, opt));
    out.labels.push_back(basis[i].describe());
  }
  out.verdict = combine_verdicts(out.per_phi, opt.tol);
  for (const auto& p : out.per_phi)
    for (const auto& s : p.raw) out.verdict.raw.push_back(s);
  return out;
}

std::pair<double, double> half_line_masses(const TestFunction& phi) {
  if (phi.dim() != 1) throw std::invalid_argument("half_line_masses: d = 1 only");
  const auto [lo, hi] = phi.support_interval();
  QuadratureOptions q;
  q.abs_tol = 1e-13;
  auto g = [&](double x) { return phi(x); };
  double minus = 0.0, plus = 0.0;
  if (lo < 0.0) minus = adaptive_gk(g, lo, std::min(0.0, hi), q).value;
  if (hi > 0.0) plus = adaptive_gk(g, std::max(0.0, lo), hi, q).value;
  return {minus, plus};
}

JumpFit fit_jump(const std::vector<std::pair<double, double>>& masses, const std::vector<double>& limits) {
  JumpFit fit;
  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!std::isfinite(limits[i])) continue;
    const auto [m, p] = masses[i];
    a11 += m * m;
    a12 += m * p;
    a22 += p * p;
    b1 += m * limits[i];
    b2 += p * limits[i];
    ++used;
  }
  fit.used = used;
  const double det = a11 * a22 - a12 * a12;
  if (used < 2 || std::fabs(det) <= 1e-12 * std::max(1.0, a11 * a22)) return fit;
  fit.gamma_minus = (a22 * b1 - a12 * b2) / det;
  fit.gamma_plus = (a11 * b2 - a12 * b1) / det;
  double ss = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!std::isfinite(limits[i])) continue;
    const double r = limits[i] - fit.gamma_minus * masses[i].first - fit.gamma_plus * masses[i].second;
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(used));
  return fit;
}

namespace {

// Local variation of f on the ball of radius rho about p.
double local_variation(const Distribution& f, const Point& p, double rho) {
  double lo = f.regular_at(p), hi = lo;
  if (f.dim() == 1) {
    for (int i = 0; i <= 32; ++i) {
      const double v = f.regular_at({p[0] + rho * (-1.0 + i / 16.0), 0.0});
      if (std::isnan(v)) return std::numeric_limits<double>::infinity();
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  } else {
    for (int k = 1; k <= 4; ++k) {
      for (int a = 0; a < 16; ++a) {
        const double t = 2.0 * std::numbers::pi * a / 16.0, r = rho * k / 4.0;
        const double v = f.regular_at({p[0] + r * std::cos(t), p[1] + r * std::sin(t)});
        if (std::isnan(v)) return std::numeric_limits<double>::infinity();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  return hi - lo;
}

// argmax of sign * (f(x0 + c) - gamma) over |c| <= R.
Point extremal_offset(const Distribution& f, const Point& x0, double gamma, double sign, double R) {
  auto score = [&](const Point& c) {
    const double v = f.regular_at({x0[0] + c[0], x0[1] + c[1]});
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : sign * (v - gamma);
  };
  Point best{0.0, 0.0};
  double best_s = -std::numeric_limits<double>::infinity();
  if (f.dim() == 1) {
    constexpr int G = 2000;
    int bi = 0;
    for (int i = 0; i <= G; ++i) {
      const Point c{R * (-1.0 + 2.0 * i / G), 0.0};
      const double s = score(c);
      if (s > best_s) {
        best_s = s;
        best = c;
        bi = i;
      }
    }
    // golden section on the bracketing cells
    double a = R * (-1.0 + 2.0 * std::max(bi - 1, 0) / G), b = R * (-1.0 + 2.0 * std::min(bi + 1, G) / G);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = b - g * (b - a), c2 = a + g * (b - a);
    double s1 = score({c1, 0.0}), s2 = score({c2, 0.0});
    for (int it = 0; it < 60; ++it) {
      if (s1 > s2) {
        b = c2;
        c2 = c1;
        s2 = s1;
        c1 = b - g * (b - a);
        s1 = score({c1, 0.0});
      } else {
        a = c1;
        c1 = c2;
        s1 = s2;
        c2 = a + g * (b - a);
        s2 = score({c2, 0.0});
      }
    }
    const Point c{0.5 * (a + b), 0.0};
    if (score(c) > best_s) best = c;
    return best;
  }
  for (int k = 0; k <= 16; ++k) {
    for (int a = 0; a < (k == 0 ? 1 : 64); ++a) {
      const double r = R * k / 16.0, t = 2.0 * std::numbers::pi * a / 64.0;
      const Point c{r * std::cos(t), r * std::sin(t)};
      const double s = score(c);
      if (s > best_s) {
        best_s = s;
        best = c;
      }
    }
  }
  // pattern search, kept inside the ball
  double step = R / 16.0;
  for (int it = 0; it < 40 && step > R * 1e-9; ++it) {
    bool moved = false;
    for (int a = 0; a < 8; ++a) {
      const double t = 2.0 * std::numbers::pi * a / 8.0;
      const Point c{best[0] + step * std::cos(t), best[1] + step * std::sin(t)};
      if (std::hypot(c[0], c[1]) > R) continue;
      const double s = score(c);
      if (s > best_s) {
        best_s = s;
        best = c;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

}  // namespace

std::vector<DeltaSequenceSpec> adversarial_sequences(const Distribution& f, const Point& x0, double gamma,
                                                     std::size_t N) {
  if (!f.regular()) return {};
  const Distribution g = f.resolved();
  std::vector<DeltaSequenceSpec> out;
  for (double sign : {1.0, -1.0}) {
    std::vector<TestFunction> members;
    members.reserve(N);
    for (std::size_t n = 1; n <= N; ++n) {
      // centres within half the ball so the support fits inside radius 1/n
      const double R = 0.5 / static_cast<double>(n);
      const Point c = extremal_offset(g, x0, gamma, sign, R);
      double rho = 0.99 * (2.0 * R - std::hypot(c[0], c[1]));
      rho = std::min(rho, R);
      const Point p{x0[0] + c[0], x0[1] + c[1]};
      while (rho > R * 1e-9 && local_variation(g, p, rho) > 0.01) rho *= 0.5;
      members.push_back(affine_bump(c, rho, g.dim()));
    }
    auto s = explicit_sequence(std::move(members));
    s.label = sign > 0 ? "adversarial upper" : "adversarial lower";
    out.push_back(std::move(s));
  }
  return out;
}

FamilyResult family_value(const Distribution& f, const Point& x0, const FamilySampler& sampler, std::size_t samples,
                          std::size_t N, const FamilyOptions& opt) {
  if (samples < 1) throw std::invalid_argument("family_value: samples must be >= 1");
  if (sampler.dim != f.dim()) throw std::invalid_argument("family_value: sampler dimension mismatch");
  FamilySampler s = sampler;
  s.length = N;
  std::vector<DeltaSequenceSpec> seqs = sample_family(s, samples);

  FamilyResult out;
  for (const auto& q : seqs) {
    out.members.push_back(sequence_limit(f, x0, q, N, opt.limit));
    out.labels.push_back(q.label);
  }

  // candidate value: median of the converged sampled limits, else f(x0)
  std::vector<double> lims;
  for (const auto& m : out.members)
    if (m.converged()) lims.push_back(m.gamma);
  if (!lims.empty()) {
    std::sort(lims.begin(), lims.end());
    out.candidate = lims[lims.size() / 2];
  } else if (f.regular()) {
    out.candidate = f.resolved().regular_at(x0);
  }

  if (s.family == Family::F_all && opt.adversarial && f.regular() && f.deltas().empty() &&
      std::isfinite(out.candidate)) {
    for (auto& q : adversarial_sequences(f, x0, out.candidate, N)) {
      LimitVerdict v = sequence_limit(f, x0, q, N, opt.limit);
      // escapes when the tail stays away from the candidate
      const std::size_t m = std::min(opt.limit.window, v.raw.size());
      double closest = std::numeric_limits<double>::infinity();
      for (std::size_t i = v.raw.size() - m; i < v.raw.size(); ++i)
        closest = std::min(closest, std::fabs(v.raw[i].value - out.candidate));
      if (closest > 10.0 * opt.limit.tol) out.witness = true;
      out.members.push_back(std::move(v));
      out.labels.push_back(q.label);
    }
  }

  out.aggregate = combine_verdicts(out.members, opt.limit.tol);
  if (out.aggregate.tag == VerdictTag::non_constant_profile) out.witness = true;

  if (s.family == Family::F && f.dim() == 1) {
    std::vector<std::pair<double, double>> masses;
    std::vector<double> limits;
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      masses.push_back(half_line_masses(*seqs[i].base));
      limits.push_back(out.members[i].converged() ? out.members[i].gamma : std::numeric_limits<double>::quiet_NaN());
    }
    out.jump = fit_jump(masses, limits);
  }
  return out;
}

LojasiewiczResult symmetric_value(const Distribution& f, const Point& x0, const std::vector<TestFunction>& basis,
                                  const std::vector<double>& eps_grid, const LimitOptions& opt) {
  if (f.dim() != 1) throw std::invalid_argument("symmetric_value: d = 1 only");
  std::vector<TestFunction> evens;
  for (const auto& phi : basis.empty() ? even_basis() : basis)
    if (phi.is_even()) evens.push_back(phi);
  if (evens.empty()) throw std::invalid_argument("symmetric_value: basis has no even member");
  const Distribution g = even_part(translate_scale(f, x0, 1.0));
  return lojasiewicz_value(g, {0.0, 0.0}, evens, eps_grid, opt);
}

LojasiewiczResult radial_value(const Distribution& f, const Point& x0, const std::vector<TestFunction>& basis,
                               const std::vector<double>& eps_grid, const LimitOptions& opt) {
  if (f.dim() != 2) throw std::invalid_argument("radial_value: d = 2 only");
  std::vector<TestFunction> radial;
  for (const auto& phi : basis.empty() ? radial_basis() : basis)
    radial.push_back(phi.is_radial() ? phi : lift_radial(radialize_testfn(phi)));
  return lojasiewicz_value(f, x0, radial, eps_grid, opt);
}

JumpFitReport jump_fit(const Distribution& f, const Point& x0, const std::vector<TestFunction>& basis,
                       const std::vector<double>& eps_grid, const LimitOptions& opt) {
  if (f.dim() != 1) throw std::invalid_argument("jump_fit: d = 1 only");
  const auto& b = basis.empty() ? default_basis(1) : basis;
  JumpFitReport out;
  out.limits = lojasiewicz_value(f, x0, b, eps_grid, opt);
  std::vector<double> limits;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto m = half_line_masses(b[i]);
    const double norm = b[i].normalization();
    out.masses.emplace_back(m.first / norm, m.second / norm);
    const auto& v = out.limits.per_phi[i];
    limits.push_back(v.converged() ? v.gamma : std::numeric_limits<double>::quiet_NaN());
  }
  out.fit = fit_jump(out.masses, limits);
  return out;
}

AngularProfile angular_profile(const Distribution& f, const Point& x0, const std::vector<double>& angles,
                               const TestFunction& rho, const std::vector<double>& eps_grid, const LimitOptions& opt) {
  if (f.dim() != 2) throw std::invalid_argument("angular_profile: d = 2 only");
  if (rho.dim() != 1) throw std::invalid_argument("angular_profile: rho must be a 1-d test function");
  const auto [lo, hi] = rho.support_interval();
  if (!(lo > 0.0)) throw std::invalid_argument("angular_profile: rho must be supported in (0, inf)");
  if (!f.regular()) throw std::invalid_argument("angular_profile: f has no regular part");
  const Distribution g = f.resolved();
  const double mass = rho.normalization();

  const std::size_t A = angles.size(), E = eps_grid.size();
  std::vector<RawSample> raw(A * E);
  std::vector<double> theta(A);
  for (std::size_t i = 0; i < A; ++i) {
    double t = std::fmod(angles[i], 2.0 * std::numbers::pi);
    if (t < 0.0) t += 2.0 * std::numbers::pi;
    theta[i] = t;
  }
  parallel_for(A * E, opt.threads, [&](std::size_t k) {
    const std::size_t i = k / E, j = k % E;
    const double c = std::cos(theta[i]), s = std::sin(theta[i]), eps = eps_grid[j];
    auto h = [&](double r) { return g.regular_at({x0[0] + r * eps * c, x0[1] + r * eps * s}) * rho(r); };
    const QuadratureResult q = adaptive_gk(h, lo, hi, opt.pairing.quad);
    raw[k] = {eps, q.value / mass, q.error / mass, q.status};
  });

  AngularProfile out;
  std::vector<double> scale(E);
  for (std::size_t j = 0; j < E; ++j) scale[j] = 1.0 / eps_grid[j];
  for (std::size_t i = 0; i < A; ++i) {
    std::vector<RawSample> series(raw.begin() + static_cast<std::ptrdiff_t>(i * E),
                                  raw.begin() + static_cast<std::ptrdiff_t>((i + 1) * E));
    const LimitVerdict v = classify_series(std::move(series), eps_grid, scale, opt);
    out.samples.push_back({theta[i], v.gamma, v.error, v.converged()});
  }
  return out;
}

DeltaSequenceSpec rotated_sequence(const DeltaSequenceSpec& seq, double angle) {
  if (seq.kind == SequenceKind::standard) {
    DeltaSequenceSpec r = standard_sequence(seq.base->rotated(angle), seq.xi, seq.length);
    r.label = seq.label + " rotated";
    return r;
  }
  std::vector<TestFunction> members;
  for (std::size_t n = 1; n <= seq.length; ++n) members.push_back(seq.member(n).rotated(angle));
  DeltaSequenceSpec r = explicit_sequence(std::move(members));
  r.label = seq.label + " rotated";
  return r;
}

std::vector<InvarianceRow> orthogonal_invariance_check(const Distribution& f, const Point& x0,
                                                       const DeltaSequenceSpec& seq,
                                                       const std::vector<double>& rotations, std::size_t N,
                                                       const LimitOptions& opt) {
  std::vector<double> angles;
  if (f.dim() == 1) {
    angles = {0.0, std::numbers::pi};
  } else {
    angles.push_back(0.0);
    for (double a : rotations)
      if (a != 0.0) angles.push_back(a);
  }
  std::vector<InvarianceRow> rows;
  for (double a : angles) {
    InvarianceRow row;
    row.angle = a;
    row.verdict = sequence_limit(f, x0, a == 0.0 ? seq : rotated_sequence(seq, a), N, opt);
    row.flagged = !row.verdict.converged();
    rows.push_back(std::move(row));
  }
  const LimitVerdict& id = rows.front().verdict;
  for (auto& row : rows)
    if (id.converged() && row.verdict.converged()) row.deviation = std::fabs(row.verdict.gamma - id.gamma);
  return rows;
}

}  // namespace distval
