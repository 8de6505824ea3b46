#include "distval/limitlab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "distval/parallel.hpp"

namespace distval {

namespace mp = boost::multiprecision;
using Rational = mp::cpp_rational;

std::string_view constancy_name(Constancy c) {
  switch (c) {
    case Constancy::constant:
      return "Constant";
    case Constancy::non_constant:
      return "NonConstant";
    case Constancy::mixed:
      return "Mixed";
  }
  return "?";
}

ScalingProbeReport scaling_probe(const Expr& f, const Expr& xi, const std::vector<double>& a_grid, std::size_t N,
                                 const LimitOptions& opt) {
  if (a_grid.empty()) throw std::invalid_argument("scaling_probe: empty a grid");
  for (double a : a_grid)
    if (!(a > 0.0)) throw std::invalid_argument("scaling_probe: a must be positive");
  if (N < opt.window) throw std::invalid_argument("scaling_probe: N shorter than the tail window");
  ScalingProbeReport rep;
  rep.a_grid = a_grid;
  rep.per_a.resize(a_grid.size());
  LimitOptions strict = opt;
  strict.max_inaccurate = 0.0;  // any undefined value makes the verdict inconclusive
  std::vector<double> xis(N), param(N), scale(N);
  for (std::size_t i = 0; i < N; ++i) {
    Env env;
    env.set(Var::n, static_cast<double>(i + 1));
    xis[i] = xi.eval(env);
    param[i] = 1.0 / static_cast<double>(i + 1);
    scale[i] = static_cast<double>(i + 1);
  }
  parallel_for(a_grid.size(), opt.threads, [&](std::size_t k) {
    std::vector<RawSample> raw(N);
    for (std::size_t i = 0; i < N; ++i) {
      const double v = f(a_grid[k] * xis[i]);
      const bool ok = std::isfinite(v);
      raw[i] = {static_cast<double>(i + 1), v, 0.0, ok ? QuadStatus::ok : QuadStatus::inaccurate};
    }
    rep.per_a[k] = classify_series(std::move(raw), param, scale, strict);
    if (rep.per_a[k].tag == VerdictTag::inconclusive && rep.per_a[k].note.empty())
      rep.per_a[k].note = "undefined evaluations";
  });
  bool all = true;
  double lo = 0.0, hi = 0.0, sum = 0.0;
  for (std::size_t k = 0; k < rep.per_a.size(); ++k) {
    const auto& v = rep.per_a[k];
    if (!v.converged()) {
      all = false;
      break;
    }
    lo = k == 0 ? v.gamma : std::min(lo, v.gamma);
    hi = k == 0 ? v.gamma : std::max(hi, v.gamma);
    sum += v.gamma;
  }
  if (!all) {
    rep.constancy = Constancy::mixed;
  } else if (hi - lo <= opt.tol) {
    rep.constancy = Constancy::constant;
    rep.limit = sum / static_cast<double>(rep.per_a.size());
  } else {
    rep.constancy = Constancy::non_constant;
  }
  return rep;
}

LimitVerdict continuous_tail_limit(const Expr& f, double x_max, std::size_t points, const LimitOptions& opt) {
  if (!(x_max > 1.0)) throw std::invalid_argument("continuous_tail_limit: X_max must exceed 1");
  if (points < opt.window) throw std::invalid_argument("continuous_tail_limit: too few points");
  std::vector<double> xs;
  for (std::size_t i = 0; i < points; ++i)
    xs.push_back(std::pow(x_max, static_cast<double>(i) / static_cast<double>(points - 1)));
  for (const auto& s : singularities(f, 1.0, x_max))
    if (s.kind == SingularKind::kink || s.kind == SingularKind::boundary_of_support) xs.push_back(s.location);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<RawSample> raw;
  std::vector<double> param, scale;
  for (double x : xs) {
    const double v = f(x);
    raw.push_back({x, v, 0.0, std::isfinite(v) ? QuadStatus::ok : QuadStatus::inaccurate});
    param.push_back(1.0 / x);
    scale.push_back(x);
  }
  LimitOptions strict = opt;
  strict.max_inaccurate = 0.0;
  return classify_series(std::move(raw), param, scale, strict);
}

// ---- Example 1 / 2 ---------------------------------------------------------

namespace {

Rational to_rational(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite value has no rational form");
  int e = 0;
  const double m = std::frexp(v, &e);  // v = m 2^e, |m| in [0.5, 1)
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  Rational r{mp::cpp_int(mant)};
  const int shift = e - 53;
  if (shift >= 0) {
    r *= Rational(mp::cpp_int(1) << shift);
  } else {
    r /= Rational(mp::cpp_int(1) << (-shift));
  }
  return r;
}

std::string fraction_string(const Rational& r) {
  return mp::numerator(r).str() + "/" + mp::denominator(r).str();
}

// Blocks longer than this get a certified upper bound instead of the exact
// union measure: the exact sum's denominator is lcm(N_k..N_{k+1}-1).
constexpr std::int64_t kExactBlock = 4096;

struct MeasureA {
  Rational value;
  bool exact = true;
};

MeasureA measure_of_A(const SetFamily& s, int k) {
  const Rational lo = to_rational(s.B[k - 1].lo), hi = to_rational(s.B[k - 1].hi);
  if (s.N[k] - s.N[k - 1] > kExactBlock) {
    // union <= sum_j w / j <= w (N_{k+1} - N_k) / N_k
    return {(hi - lo) * Rational(s.N[k] - s.N[k - 1]) / Rational(s.N[k - 1]), false};
  }
  // B_k / j for decreasing j has increasing endpoints; merge in that order
  Rational total = 0, cur_lo = 0, cur_hi = 0;
  bool open = false;
  for (std::int64_t j = s.N[k] - 1; j >= s.N[k - 1]; --j) {
    const Rational a = lo / j, b = hi / j;
    if (open && a <= cur_hi) {
      if (b > cur_hi) cur_hi = b;
    } else {
      if (open) total += cur_hi - cur_lo;
      cur_lo = a;
      cur_hi = b;
      open = true;
    }
  }
  if (open) total += cur_hi - cur_lo;
  return {total, true};
}

}  // namespace

std::pair<std::string, std::string> exact_fraction(double v) {
  const Rational r = to_rational(v);
  return {mp::numerator(r).str(), mp::denominator(r).str()};
}

double SetFamily::indicator(double x) const {
  for (const auto& b : B)
    if (x > b.lo && x < b.hi) return 1.0;
  return 0.0;
}

bool SetFamily::in_A(int k, double x) const {
  if (k < 1 || k > K) throw std::out_of_range("in_A: k outside 1..K");
  if (!(x > 0.0)) return false;
  const Rational X = to_rational(x);
  const Rational lo = to_rational(B[k - 1].lo) / X, hi = to_rational(B[k - 1].hi) / X;
  // smallest integer j with j > lo
  mp::cpp_int j = mp::numerator(lo) / mp::denominator(lo) + 1;
  j = mp::max(j, mp::cpp_int(N[k - 1]));
  return j < N[k] && Rational(j) < hi;
}

int SetFamily::first_hit(double x, int k0) const {
  for (int q = std::max(k0, 1); q <= K; ++q)
    if (in_A(q, x)) return q;
  return 0;
}

Expr SetFamily::indicator_expr() const {
  Expr sum = Expr::constant(0.0);
  const Expr x = Expr::variable(Var::x);
  for (const auto& b : B) sum = sum + Expr::indicator(b.lo, b.hi, x);
  return sum;
}

SetFamilyCheck SetFamily::check() const {
  SetFamilyCheck c;
  if (static_cast<int>(N.size()) != K + 1 || static_cast<int>(B.size()) != K || static_cast<int>(eta.size()) != K) {
    c.growth = c.containment = c.measure = c.summable = false;
    c.details.push_back("inconsistent sizes");
    return c;
  }
  for (int k = 1; k <= K; ++k) {
    if (!(static_cast<std::int64_t>(k) * N[k - 1] < N[k])) {
      c.growth = false;
      c.details.push_back("k N_k < N_{k+1} fails at k = " + std::to_string(k));
    }
    const Rational lo = to_rational(B[k - 1].lo), hi = to_rational(B[k - 1].hi);
    if (!(Rational(N[k - 1] - 1) <= lo && lo < hi && hi <= Rational(N[k - 1]))) {
      c.containment = false;
      c.details.push_back("B_" + std::to_string(k) + " not inside (N_k - 1, N_k)");
    }
    const Rational mu = measure_of_A(*this, k).value;
    if (!(eta[k - 1] > 0.0) || !(mu < to_rational(eta[k - 1]))) {
      c.measure = false;
      c.details.push_back("mu(A_" + std::to_string(k) + ") = " + fraction_string(mu) + " is not below eta_k");
    }
    if (!(eta[k - 1] > 0.0) || (k > 1 && eta[k - 1] > eta[k - 2])) {
      c.summable = false;
      c.details.push_back("eta is not positive and non-increasing at k = " + std::to_string(k));
    }
  }
  return c;
}

SetFamily build_example1(int K, const Expr& eta) {
  if (K < 1 || K > 8) throw std::invalid_argument("build_example1: K must be in 1..8");
  SetFamily s;
  s.K = K;
  s.N.push_back(2);
  for (int k = 1; k <= K; ++k) s.N.push_back(static_cast<std::int64_t>(k) * s.N.back() + 1);
  for (int k = 1; k <= K; ++k) {
    Env env;
    env.set(Var::n, k);
    const double e = eta.eval(env);
    if (!(e > 0.0) || !std::isfinite(e)) throw std::invalid_argument("build_example1: eta_k must be positive");
    s.eta.push_back(e);
    const double Nk = static_cast<double>(s.N[k - 1]);
    const double block = static_cast<double>(s.N[k] - s.N[k - 1]);
    double w = std::min(0.5, e * Nk / (2.0 * block));
    const double grid = std::ldexp(1.0, -32);
    double wd = std::floor(w / grid) * grid;
    if (wd <= 0.0) {
      wd = std::ldexp(1.0, static_cast<int>(std::floor(std::log2(w))));
      s.warnings.push_back("B_" + std::to_string(k) + " width below 2^-32; shrunk to a power of two");
    }
    const double mid = Nk - 0.5;
    s.B.push_back({mid - 0.5 * wd, mid + 0.5 * wd});
  }
  for (int k = 1; k <= K; ++k) {
    const MeasureA mu = measure_of_A(s, k);
    s.measure_A.push_back(static_cast<double>(mu.value));
    s.measure_A_exact.push_back((mu.exact ? "" : "<=") + fraction_string(mu.value));
  }
  return s;
}

Expr build_example2(const SetFamily& s) {
  std::vector<std::tuple<double, double, Expr>> branches;
  const Expr x = Expr::variable(Var::x);
  for (const auto& b : s.B) {
    const double mid = 0.5 * (b.lo + b.hi);
    branches.emplace_back(b.lo, mid, (x - Expr::constant(b.lo)) / Expr::constant(mid - b.lo));
    branches.emplace_back(mid, b.hi, (Expr::constant(b.hi) - x) / Expr::constant(b.hi - mid));
  }
  return Expr::piecewise(x, branches);
}

NonConvergenceEstimate nonconvergence_fraction(const SetFamily& s, std::size_t samples, std::uint64_t seed, int k0) {
  NonConvergenceEstimate est;
  est.samples = samples;
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    double x = rng.uniform();
    while (x == 0.0) x = rng.uniform();
    if (s.first_hit(x, k0) > 0) ++est.hits;
  }
  if (samples > 0) {
    est.fraction = static_cast<double>(est.hits) / static_cast<double>(samples);
    est.sigma = std::sqrt(std::max(est.fraction * (1.0 - est.fraction), 1.0 / static_cast<double>(samples)) /
                          static_cast<double>(samples));
  }
  for (int k = std::max(k0, 1); k <= s.K; ++k) est.bound += s.eta[k - 1];
  return est;
}

MeasureStat convergence_in_measure(const Expr& f, double L, double eps, double C, const std::vector<double>& x_grid,
                                   std::size_t samples, std::uint64_t seed) {
  if (!(C > 1.0) || !(eps > 0.0)) throw std::invalid_argument("convergence_in_measure: need C > 1 and eps > 0");
  if (samples == 0) throw std::invalid_argument("convergence_in_measure: samples must be >= 1");
  MeasureStat st;
  st.x_grid = x_grid;
  st.samples = samples;
  st.ratio.resize(x_grid.size());
  st.error.resize(x_grid.size());
  const std::size_t strata = std::min<std::size_t>(samples, 1000);
  const std::size_t per = std::max<std::size_t>(1, samples / strata);
  parallel_for(x_grid.size(), 0, [&](std::size_t i) {
    Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
    const double x = x_grid[i], width = (C - 1.0) * x;
    std::size_t hits = 0, total = 0;
    for (std::size_t s = 0; s < strata; ++s) {
      for (std::size_t k = 0; k < per; ++k) {
        const double t = x + width * (static_cast<double>(s) + rng.uniform()) / static_cast<double>(strata);
        const double v = f(t);
        if (!(std::fabs(v - L) <= eps)) ++hits;  // undefined counts as deviating
        ++total;
      }
    }
    const double r = static_cast<double>(hits) / static_cast<double>(total);
    st.ratio[i] = r;
    st.error[i] = std::sqrt(r * (1.0 - r) / static_cast<double>(total));
  });
  return st;
}

MeasureStat convergence_in_measure_tents(const SetFamily& s, double L, double eps, double C,
                                         const std::vector<double>& x_grid) {
  if (!(C > 1.0) || !(eps > 0.0)) throw std::invalid_argument("convergence_in_measure: need C > 1 and eps > 0");
  const Expr g = build_example2(s);
  MeasureStat st;
  st.x_grid = x_grid;
  st.exact = true;
  for (double x : x_grid) {
    const double a = x, b = C * x;
    // on each piece between breakpoints g is monotone and |g - L| - eps keeps
    // its sign, so a midpoint test classifies the whole piece
    std::vector<double> cuts{a, b};
    for (const auto& B : s.B) {
      const double mid = 0.5 * (B.lo + B.hi), h = 0.5 * (B.hi - B.lo);
      for (double p : {B.lo, mid, B.hi}) cuts.push_back(p);
      for (double level : {L - eps, L + eps}) {
        if (level > 0.0 && level < 1.0) {
          cuts.push_back(mid - (1.0 - level) * h);
          cuts.push_back(mid + (1.0 - level) * h);
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());
    double measure = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = std::max(cuts[i], a), hi = std::min(cuts[i + 1], b);
      if (!(hi > lo)) continue;
      if (std::fabs(g(0.5 * (lo + hi)) - L) > eps) measure += hi - lo;
    }
    st.ratio.push_back(measure / (b - a));
    st.error.push_back(0.0);
  }
  return st;
}

std::vector<SmoothedRow> smoothed_scaling_probe(const Expr& f, const TestFunction& phi,
                                                const std::vector<double>& lambda_grid, const PairingOptions& opt) {
  if (phi.dim() != 1) throw std::invalid_argument("smoothed_scaling_probe: phi must be 1-d");
  if (!(phi.support_interval().first > 0.0))
    throw std::invalid_argument("smoothed_scaling_probe: phi must be supported in (0, inf)");
  const Distribution F = Distribution::regular1(f);
  std::vector<SmoothedRow> rows(lambda_grid.size());
  parallel_for(lambda_grid.size(), 0, [&](std::size_t i) {
    const double lam = lambda_grid[i];
    if (!(lam > 0.0)) throw std::invalid_argument("smoothed_scaling_probe: lambda must be positive");
    const QuadratureResult q = pair(translate_scale(F, {0.0, 0.0}, lam), phi, opt);
    rows[i] = {lam, q.value, q.error, q.status};
  });
  return rows;
}

}  // namespace distval
