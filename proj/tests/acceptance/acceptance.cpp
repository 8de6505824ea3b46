// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "distval/boundedness.hpp"
#include "distval/extrapolation.hpp"
#include "distval/limitlab.hpp"
#include "distval/pairing.hpp"
#include "distval/pointvalue.hpp"

using namespace distval;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "[failed] ") + what;
  }
};

std::string tag(const LimitVerdict& v) { return std::string(verdict_name(v.tag)); }

Outcome sin_recip() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto r = lojasiewicz_value(Distribution::regular1(parse("sin(1/x)")), {0.0, 0.0}, default_basis(1));
  const double secs = seconds_since(t0);
  o.require(r.verdict.converged() && std::fabs(r.verdict.gamma) <= 1e-3,
            tag(r.verdict) + fmt(" gamma = %.3g", r.verdict.gamma));
  o.require(secs < 10.0, fmt("%.2f s", secs));
  return o;
}

Outcome example3() {
  Outcome o;
  const Distribution f = Distribution::regular1(parse("sin(1/x)"));
  const auto seq = shifted_sequence(parse("1/(2*pi*n+pi/6)"), parse("0.1*(1/(2*pi*n+pi/6))^2"), 50);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= 50; ++n) {
    const TestFunction phi = seq.member(n);
    lowest = std::min(lowest, pair(f, phi).value / phi.normalization());
  }
  o.require(lowest > 0.25, fmt("min pairing over n <= 50: %.4f", lowest));
  FamilySampler fs;
  fs.family = Family::F_all;
  const FamilyResult fam = family_value(f, {0.0, 0.0}, fs, 8, 100);
  const bool zero = fam.aggregate.converged() && std::fabs(fam.aggregate.gamma) <= 1e-3;
  o.require(!zero, "F_all aggregate " + tag(fam.aggregate));
  return o;
}

Outcome log_spiral() {
  Outcome o;
  const Expr f = parse("sin(2*pi*ln(x))");
  const std::vector<double> a{0.5, 1.0, 2.0, 4.0};
  const auto r = scaling_probe(f, parse("exp(n+1/n)"), a, 100);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = std::fabs(r.per_a[i].gamma - std::sin(2 * std::numbers::pi * std::log(a[i])));
    worst = r.per_a[i].converged() && std::isfinite(e) ? std::max(worst, e) : std::numeric_limits<double>::infinity();
  }
  o.require(worst <= 1e-3, fmt("max per-a error %.3g", worst));
  o.require(r.constancy == Constancy::non_constant, std::string(constancy_name(r.constancy)));
  const auto lin = scaling_probe(f, parse("n"), a, 10000);
  o.require(lin.constancy != Constancy::constant, "xi = n: " + std::string(constancy_name(lin.constancy)));
  return o;
}

Outcome heaviside() {
  Outcome o;
  const Distribution H = Distribution::regular1(parse("chi(0,inf)"));
  FamilySampler fs;
  fs.family = Family::F;
  const FamilyResult fam = family_value(H, {0.0, 0.0}, fs, 8, 100);
  if (fam.jump) {
    o.require(std::fabs(fam.jump->gamma_minus) <= 1e-6 && std::fabs(fam.jump->gamma_plus - 1.0) <= 1e-6 &&
                  fam.jump->residual <= 1e-6,
              fmt("jump (%.3g, %.9g), residual %.3g", fam.jump->gamma_minus, fam.jump->gamma_plus, fam.jump->residual));
  } else {
    o.require(false, "no jump regression");
  }
  const auto sym = symmetric_value(H, {0.0, 0.0});
  o.require(sym.verdict.converged() && std::fabs(sym.verdict.gamma - 0.5) <= 1e-6,
            "symmetric " + tag(sym.verdict) + fmt(" %.9g", sym.verdict.gamma));
  const auto loj = lojasiewicz_value(H, {0.0, 0.0}, default_basis(1));
  o.require(loj.verdict.tag == VerdictTag::non_constant_profile, "lojasiewicz " + tag(loj.verdict));
  return o;
}

Outcome delta() {
  Outcome o;
  const auto seq = standard_sequence(canonical_bump(1), parse("n"), 100);
  const LimitVerdict v = sequence_limit(Distribution::delta(), {0.0, 0.0}, seq, 100);
  o.require(v.tag == VerdictTag::diverged, tag(v));
  o.require(v.growth_exponent >= 0.9 && v.growth_exponent <= 1.1, fmt("exponent %.4f", v.growth_exponent));
  return o;
}

Outcome radial_xy() {
  Outcome o;
  const Distribution f = Distribution::regular2(parse("x*y/(x^2+y^2)"));
  const auto rad = radial_value(f, {0.0, 0.0});
  o.require(rad.verdict.converged() && std::fabs(rad.verdict.gamma) <= 1e-3,
            "radial " + tag(rad.verdict) + fmt(" %.3g", rad.verdict.gamma));
  const auto seq = standard_sequence(affine_bump({0.35, 0.35}, 0.6, 2), parse("n"), 32);
  const auto rows = orthogonal_invariance_check(f, {0.0, 0.0}, seq, {std::numbers::pi / 2}, 32);
  double gid = std::numeric_limits<double>::quiet_NaN(), dev = 0.0;
  for (const auto& r : rows) {
    if (r.angle == 0.0) gid = r.verdict.gamma;
    if (std::isfinite(r.deviation)) dev = std::max(dev, r.deviation);
  }
  o.require(std::fabs(gid) >= 0.05 && dev >= 0.1, fmt("gamma_id %.4f, deviation %.4f", gid, dev));
  return o;
}

Outcome moment_slopes() {
  Outcome o;
  const Distribution f = Distribution::regular1(parse("chi(0,1)"));
  const TestFunction phi = affine_bump(0.25, 1.0);
  const double lo[2] = {-2.3, -4.4}, hi[2] = {-1.7, -3.6};
  int i = 0;
  for (int Q : {0, 2}) {
    std::vector<double> lx, ly;
    for (double lam : {50.0, 100.0, 200.0, 400.0}) {
      lx.push_back(std::log(lam));
      ly.push_back(std::log(std::fabs(moment_expansion_remainder(f, phi, lam, Q))));
    }
    const double s = linear_fit(lx, ly).slope;
    o.require(s >= lo[i] && s <= hi[i], fmt("Q=%g slope %.4f", Q, s));
    ++i;
  }
  return o;
}

Outcome example1_and_2() {
  Outcome o;
  const SetFamily s = build_example1(4, parse("2^(-n)"));
  o.require(s.check().ok(), "set invariants");
  const auto nc = nonconvergence_fraction(s, 10000, 42);
  o.require(nc.fraction <= nc.bound + 2 * nc.sigma, fmt("fraction %.4f <= %.4f + 2 * %.4f", nc.fraction, nc.bound, nc.sigma));
  const Expr g = build_example2(s);
  const LimitVerdict tail = continuous_tail_limit(g, static_cast<double>(s.N[s.K - 1]));
  o.require(tail.tag == VerdictTag::inconclusive, "tail " + tag(tail));
  const auto sp = scaling_probe(g, parse("n"), {1.0, std::numbers::sqrt2, 2.0, 3.0}, 200);
  o.require(sp.constancy == Constancy::constant && sp.limit == 0.0,
            "scaling " + std::string(constancy_name(sp.constancy)) + fmt(" %.3g", sp.limit));
  return o;
}

Outcome measure_stat() {
  Outcome o;
  const SetFamily s = build_example1(4, parse("2^(-n)"));
  const double x_max = static_cast<double>(s.N[s.K - 1]);
  std::vector<double> xg;
  for (int i = 0; i < 40; ++i) xg.push_back(std::pow(x_max, i / 39.0));
  const MeasureStat ms = convergence_in_measure_tents(s, 0.0, 0.5, 2.0, xg);
  o.require(ms.ratio.back() <= 0.05, fmt("ratio at x = %g: %.4g", xg.back(), ms.ratio.back()));
  const KendallResult kt = kendall_tau(xg, ms.ratio);
  o.require(kt.tau < 0 && kt.p_lower < 0.01, fmt("tau %.3f, p %.3g", kt.tau, kt.p_lower));
  return o;
}

Outcome linf_suite() {
  Outcome o;
  const Region sin_u{{0.0, 0.0}, {10.0, 0.0}};
  const Distribution sinx = Distribution::regular1(parse("sin(x)"));
  const LinfEstimate n = linf_norm_estimate(sinx, sin_u);
  o.require(n.value >= 0.99 && n.value <= 1.0 + 1e-6, fmt("||sin||_inf %.9g", n.value));
  const EssBounds e = esssup_essinf(sinx, sin_u);
  o.require(std::fabs(e.sup - 1.0) <= 1e-2 && std::fabs(e.inf + 1.0) <= 1e-2, fmt("ess (%.6f, %.6f)", e.sup, e.inf));
  const BoundednessReport b = boundedness_probe(Distribution::regular1(parse("ln(abs(x))")), {{-1.0, 0.0}, {1.0, 0.0}});
  o.require(b.verdict == BoundTag::unbounded_witness, "ln|x| " + std::string(bound_tag_name(b.verdict)));
  return o;
}

// Sampled families against the deterministic point values.
struct CorpusEntry {
  const char* label;
  Distribution f;
  Point x0;
};

bool agree(const LimitVerdict& a, const LimitVerdict& b, double& gap) {
  if (a.converged() != b.converged()) {
    gap = std::numeric_limits<double>::infinity();
    return false;
  }
  gap = a.converged() ? std::fabs(a.gamma - b.gamma) : 0.0;
  return gap <= 5e-3;
}

Outcome corpus() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::vector<CorpusEntry> one_d = {
      {"cos(x)", Distribution::regular1(parse("cos(x)")), {0.0, 0.0}},
      {"exp(x)*chi(-1,1)", Distribution::regular1(parse("exp(x)*chi(-1,1)")), {0.3, 0.0}},
      {"x*sin(1/x)", Distribution::regular1(parse("x*sin(1/x)")), {0.0, 0.0}},
      {"chi(0,inf)", Distribution::regular1(parse("chi(0,inf)")), {0.0, 0.0}},
      {"abs(x)/x+cos(x)", Distribution::regular1(parse("abs(x)/x+cos(x)")), {0.0, 0.0}},
      {"sqrt(abs(x))+x^2", Distribution::regular1(parse("sqrt(abs(x))+x^2")), {0.0, 0.0}},
  };
  const std::vector<CorpusEntry> two_d = {
      {"x*y/(x^2+y^2)", Distribution::regular2(parse("x*y/(x^2+y^2)")), {0.0, 0.0}},
      {"(x^2-y^2)/(x^2+y^2)+1", Distribution::regular2(parse("(x^2-y^2)/(x^2+y^2)+1")), {0.0, 0.0}},
      {"cos(x)*exp(y)", Distribution::regular2(parse("cos(x)*exp(y)")), {0.0, 0.0}},
      {"exp(-r^2) radial", Distribution::radial(parse("exp(-r^2)"), 2), {0.0, 0.0}},
  };
  int compared = 0, agreeing = 0;
  double worst = 0.0;
  auto compare = [&](const char* label, const char* kind, const LimitVerdict& fam, const LimitVerdict& det) {
    double gap = 0.0;
    const bool ok = agree(fam, det, gap);
    ++compared;
    agreeing += ok;
    if (std::isfinite(gap)) worst = std::max(worst, gap);
    if (!ok) o.require(false, std::string(label) + " " + kind + ": " + tag(fam) + " vs " + tag(det));
  };
  for (const auto& e : one_d) {
    FamilySampler fs;
    fs.family = Family::F;
    compare(e.label, "F/lojasiewicz", family_value(e.f, e.x0, fs, 8, 100).aggregate,
            lojasiewicz_value(e.f, e.x0, default_basis(1)).verdict);
    fs.family = Family::F_sy;
    compare(e.label, "F_sy/symmetric", family_value(e.f, e.x0, fs, 8, 100).aggregate,
            symmetric_value(e.f, e.x0).verdict);
  }
  for (const auto& e : two_d) {
    FamilySampler fs;
    fs.family = Family::F_rad;
    fs.dim = 2;
    compare(e.label, "F_rad/radial", family_value(e.f, e.x0, fs, 8, 100).aggregate, radial_value(e.f, e.x0).verdict);
  }
  const double secs = seconds_since(t0);
  o.require(agreeing == compared, fmt("%g of %g comparisons agree, max gap %.3g", agreeing, compared, worst));
  o.require(secs < 300.0, fmt("%.1f s", secs));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"sin(1/x) Lojasiewicz value 0", sin_recip},
      {"shifted sin(1/x) witness", example3},
      {"log-spiral scaling profile", log_spiral},
      {"Heaviside jump, symmetric value, no value", heaviside},
      {"delta diverges linearly", delta},
      {"xy/(x^2+y^2) radial value and rotation", radial_xy},
      {"moment remainder slopes", moment_slopes},
      {"Example 1 and 2 constructions", example1_and_2},
      {"convergence in measure", measure_stat},
      {"L-infinity suite", linf_suite},
      {"family agreement corpus", corpus},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("%s criterion %zu (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
