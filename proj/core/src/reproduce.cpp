#include "distval/reproduce.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "distval/extrapolation.hpp"
#include "distval/limitlab.hpp"
#include "distval/pairing.hpp"
#include "distval/pointvalue.hpp"

namespace distval {

const std::vector<std::string>& reproduce_targets() {
  static const std::vector<std::string> names = {"heaviside", "sin-recip", "log-spiral", "example1",
                                                 "example2",  "example3",  "radial-xy",  "moment-expansion"};
  return names;
}

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct Target {
  Json params;  // canned parameters, echoed as the scenario
  Json result;
  Json checks = Json::array();
  std::vector<CsvRow> rows;

  void check(const std::string& name, bool pass, const std::string& detail) {
    Json c;
    c["name"] = name;
    c["pass"] = pass;
    c["detail"] = detail;
    checks.push_back(std::move(c));
  }
};

void add_rows(std::vector<CsvRow>& rows, const std::string& series, const std::vector<RawSample>& raw) {
  for (const auto& s : raw) rows.push_back({series, s.param, s.value, s.error});
}

void heaviside(Target& t, const EffectiveOptions& eo) {
  const Distribution H = Distribution::regular1(parse("chi(0,inf)"));
  t.params = {{"f", "chi(0,inf)"}, {"family", "F"}, {"count", 8}, {"N", eo.cap(100)}};
  FamilySampler fs;
  fs.family = Family::F;
  fs.seed = eo.seed;
  fs.length = eo.cap(100);
  FamilyOptions fo;
  fo.limit = eo.limit();
  const FamilyResult fam = family_value(H, {0.0, 0.0}, fs, 8, fs.length, fo);
  const auto sym = symmetric_value(H, {0.0, 0.0}, {}, default_eps_grid(), eo.limit());
  const auto loj = lojasiewicz_value(H, {0.0, 0.0}, default_basis(1), default_eps_grid(), eo.limit());
  t.result["family_aggregate"] = to_json(fam.aggregate);
  if (fam.jump) t.result["jump"] = to_json(*fam.jump);
  t.result["symmetric"] = to_json(sym.verdict);
  t.result["lojasiewicz"] = to_json(loj.verdict);
  for (std::size_t i = 0; i < fam.members.size(); ++i) add_rows(t.rows, "member" + std::to_string(i), fam.members[i].raw);
  const bool jump_ok = fam.jump && std::fabs(fam.jump->gamma_minus) <= 1e-6 &&
                       std::fabs(fam.jump->gamma_plus - 1.0) <= 1e-6 && fam.jump->residual <= 1e-6;
  t.check("jump regression gives (0, 1)", jump_ok,
          fam.jump ? fmt("gamma- = %.9g, gamma+ = %.9g, residual %.3g", fam.jump->gamma_minus, fam.jump->gamma_plus,
                         fam.jump->residual)
                   : std::string("no regression"));
  t.check("symmetric value 1/2", sym.verdict.converged() && std::fabs(sym.verdict.gamma - 0.5) <= 1e-6,
          std::string(verdict_name(sym.verdict.tag)) + fmt(" %.9g", sym.verdict.gamma));
  t.check("no Lojasiewicz value", loj.verdict.tag == VerdictTag::non_constant_profile,
          std::string(verdict_name(loj.verdict.tag)));
}

void sin_recip(Target& t, const EffectiveOptions& eo) {
  t.params = {{"f", "sin(1/x)"}, {"x0", 0.0}, {"basis", "default"}};
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = lojasiewicz_value(Distribution::regular1(parse("sin(1/x)")), {0.0, 0.0}, default_basis(1),
                                   default_eps_grid(), eo.limit());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  t.result["value"] = to_json(r.verdict);
  for (std::size_t i = 0; i < r.per_phi.size(); ++i) add_rows(t.rows, "phi" + std::to_string(i), r.per_phi[i].raw);
  t.check("value 0", r.verdict.converged() && std::fabs(r.verdict.gamma) <= 1e-3,
          std::string(verdict_name(r.verdict.tag)) + fmt(" %.3g", r.verdict.gamma));
  t.check("under 10 s", secs < 10.0, "wall-clock runtime of the evaluation");
}

void log_spiral(Target& t, const EffectiveOptions& eo) {
  const Expr f = parse("sin(2*pi*ln(x))");
  const std::vector<double> a = {0.5, 1.0, 2.0, 4.0};
  t.params = {{"f", f.str()}, {"xi", "exp(n+1/n)"}, {"a", a}, {"N", eo.cap(100)}, {"N_linear", eo.cap(10000)}};
  const auto r = scaling_probe(f, parse("exp(n+1/n)"), a, eo.cap(100), eo.limit());
  double worst = 0.0;
  bool all = true;
  Json per = Json::array();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double want = std::sin(2.0 * std::numbers::pi * std::log(a[i]));
    const double err = std::fabs(r.per_a[i].gamma - want);
    all = all && r.per_a[i].converged();
    worst = std::isfinite(err) ? std::max(worst, err) : std::numeric_limits<double>::infinity();
    per.push_back({{"a", a[i]}, {"limit", to_json(r.per_a[i])}, {"expected", want}});
    add_rows(t.rows, fmt("a=%g", a[i]), r.per_a[i].raw);
  }
  t.result["per_a"] = std::move(per);
  t.result["constancy"] = std::string(constancy_name(r.constancy));
  const auto lin = scaling_probe(f, Expr::variable(Var::n), a, eo.cap(10000), eo.limit());
  t.result["constancy_xi_n"] = std::string(constancy_name(lin.constancy));
  t.check("profile matches sin(2 pi ln a)", all && worst <= 1e-3, fmt("max error %.3g", worst));
  t.check("profile not constant", r.constancy == Constancy::non_constant, std::string(constancy_name(r.constancy)));
  t.check("xi = n gives no constant", lin.constancy != Constancy::constant, std::string(constancy_name(lin.constancy)));
}

void example1(Target& t, const EffectiveOptions& eo) {
  t.params = {{"K", 4}, {"eta", "2^(-n)"}, {"samples", 10000}};
  const SetFamily s = build_example1(4, parse("2^(-n)"));
  const SetFamilyCheck chk = s.check();
  const auto nc = nonconvergence_fraction(s, 10000, eo.seed);
  t.result["set_family"] = to_json(s);
  t.result["nonconvergence"] = {{"fraction", nc.fraction}, {"sigma", nc.sigma}, {"bound", nc.bound}};
  t.check("set invariants hold exactly", chk.ok(), chk.ok() ? "growth, containment, measure, summability" : "violated");
  t.check("non-convergence fraction within bound", nc.fraction <= nc.bound + 2.0 * nc.sigma,
          fmt("%.4f <= %.4f + 2 * %.4f", nc.fraction, nc.bound, nc.sigma));
}

void example2(Target& t, const EffectiveOptions& eo) {
  t.params = {{"K", 4}, {"eta", "2^(-n)"}, {"L", 0}, {"eps", 0.5}, {"C", 2}};
  const SetFamily s = build_example1(4, parse("2^(-n)"));
  const Expr g = build_example2(s);
  const double x_max = static_cast<double>(s.N[s.K - 1]);
  const LimitVerdict tail = continuous_tail_limit(g, x_max, 200, eo.limit());
  const auto sp = scaling_probe(g, Expr::variable(Var::n), {1.0, std::numbers::sqrt2, 2.0, 3.0}, eo.cap(200), eo.limit());
  std::vector<double> xg;
  for (int i = 0; i < 40; ++i) xg.push_back(std::pow(x_max, i / 39.0));
  const MeasureStat ms = convergence_in_measure_tents(s, 0.0, 0.5, 2.0, xg);
  const KendallResult kt = kendall_tau(xg, ms.ratio);
  t.result["tail"] = to_json(tail);
  t.result["scaling_constancy"] = std::string(constancy_name(sp.constancy));
  t.result["scaling_limit"] = number(sp.limit);
  t.result["measure_last_ratio"] = number(ms.ratio.back());
  t.result["kendall_tau"] = number(kt.tau);
  t.result["kendall_p_decreasing"] = number(kt.p_lower);
  for (std::size_t i = 0; i < xg.size(); ++i) t.rows.push_back({"ratio", xg[i], ms.ratio[i], ms.error[i]});
  t.check("tail limit inconclusive", tail.tag == VerdictTag::inconclusive, std::string(verdict_name(tail.tag)));
  t.check("scaling probe constant 0", sp.constancy == Constancy::constant && std::fabs(sp.limit) <= 1e-3,
          std::string(constancy_name(sp.constancy)) + fmt(" %.3g", sp.limit));
  t.check("measure ratio small at the largest x", ms.ratio.back() <= 0.05, fmt("%.4g", ms.ratio.back()));
  t.check("decreasing trend", kt.tau < 0.0 && kt.p_lower < 0.01, fmt("tau %.3f, p %.3g", kt.tau, kt.p_lower));
}

void example3(Target& t, const EffectiveOptions& eo) {
  const std::string centers = "1/(2*pi*n+pi/6)";
  const std::string radii = "0.1*(1/(2*pi*n+pi/6))^2";
  t.params = {{"f", "sin(1/x)"}, {"centers", centers}, {"radii", radii}, {"N", 50}, {"family", "F_all"}};
  const Distribution f = Distribution::regular1(parse("sin(1/x)"));
  const DeltaSequenceSpec seq = shifted_sequence(parse(centers), parse(radii), 50);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= 50; ++n) {
    const TestFunction phi = seq.member(n);
    const QuadratureResult q = pair(f, phi, eo.pairing);
    const double v = q.value / phi.normalization();
    lowest = std::min(lowest, v);
    t.rows.push_back({"witness", static_cast<double>(n), v, q.error});
  }
  FamilySampler fs;
  fs.family = Family::F_all;
  fs.seed = eo.seed;
  fs.length = eo.cap(100);
  FamilyOptions fo;
  fo.limit = eo.limit();
  const FamilyResult fam = family_value(f, {0.0, 0.0}, fs, 8, fs.length, fo);
  t.result["min_witness_pairing"] = number(lowest);
  t.result["aggregate"] = to_json(fam.aggregate);
  t.result["witness"] = fam.witness;
  t.check("witness pairings exceed 1/4", lowest > 0.25, fmt("min over n <= 50: %.4f", lowest));
  const bool zero = fam.aggregate.converged() && std::fabs(fam.aggregate.gamma) <= 1e-3;
  t.check("F_all has no value 0", !zero, std::string(verdict_name(fam.aggregate.tag)));
  t.check("adversarial witness found", fam.witness, fam.witness ? "yes" : "no");
}

void radial_xy(Target& t, const EffectiveOptions& eo) {
  t.params = {{"f", "x*y/(x^2+y^2)"}, {"rotation", std::numbers::pi / 2}, {"N", 32}};
  const Distribution f = Distribution::regular2(parse("x*y/(x^2+y^2)"));
  const auto rad = radial_value(f, {0.0, 0.0}, {}, default_eps_grid(), eo.limit());
  const auto rows = orthogonal_invariance_check(
      f, {0.0, 0.0}, standard_sequence(affine_bump({0.35, 0.35}, 0.6, 2), Expr::variable(Var::n), 32),
      {std::numbers::pi / 2}, 32, eo.limit());
  t.result["radial"] = to_json(rad.verdict);
  Json inv = Json::array();
  double gid = std::numeric_limits<double>::quiet_NaN(), dev = 0.0;
  for (const auto& r : rows) {
    inv.push_back({{"angle", r.angle}, {"limit", to_json(r.verdict)}, {"deviation", number(r.deviation)}});
    add_rows(t.rows, fmt("rotation %.6g", r.angle), r.verdict.raw);
    if (r.angle == 0.0) gid = r.verdict.gamma;
    if (std::isfinite(r.deviation)) dev = std::max(dev, r.deviation);
  }
  t.result["invariance"] = std::move(inv);
  t.check("radial value 0", rad.verdict.converged() && std::fabs(rad.verdict.gamma) <= 1e-3,
          std::string(verdict_name(rad.verdict.tag)) + fmt(" %.3g", rad.verdict.gamma));
  t.check("rotation changes the limit", std::fabs(gid) >= 0.05 && dev >= 0.1,
          fmt("gamma_id %.4f, deviation %.4f", gid, dev));
}

void moment_expansion(Target& t, const EffectiveOptions&) {
  const std::vector<double> lambda = {50, 100, 200, 400};
  // off-centre bump, so every derivative at 0 is nonzero
  const TestFunction phi = affine_bump(0.25, 1.0);
  const Distribution f = Distribution::regular1(parse("chi(0,1)"));
  t.params = {{"f", "chi(0,1)"}, {"phi", to_json(phi)}, {"lambda", lambda}, {"Q", {0, 2}}};
  const MomentTable mt = moments(f, 4);
  Json mu = Json::array();
  bool exact = true;
  for (int k = 0; k <= 4; ++k) {
    mu.push_back(number(mt.mu[k]));
    exact = exact && std::fabs(mt.mu[k] - 1.0 / (k + 1)) <= 1e-9;
  }
  t.result["moments"] = std::move(mu);
  const double lo[2] = {-2.3, -4.4}, hi[2] = {-1.7, -3.6};
  int i = 0;
  for (int Q : {0, 2}) {
    std::vector<double> lx, ly;
    for (double lam : lambda) {
      const double r = moment_expansion_remainder(f, phi, lam, Q);
      t.rows.push_back({"remainder Q=" + std::to_string(Q), lam, r, 0.0});
      lx.push_back(std::log(lam));
      ly.push_back(std::log(std::fabs(r)));
    }
    const double slope = linear_fit(lx, ly).slope;
    t.result["slope_Q" + std::to_string(Q)] = number(slope);
    t.check("remainder slope at Q=" + std::to_string(Q), slope >= lo[i] && slope <= hi[i],
            fmt("%.4f in [%.1f, %.1f]", slope, lo[i], hi[i]));
    ++i;
  }
  t.check("moments 1/(k+1)", exact, "k = 0..4");
}

}  // namespace

Report reproduce(std::string_view name, const RunOptions& opt) {
  const EffectiveOptions eo = effective_options(opt, std::nullopt, std::nullopt);
  Target t;
  if (name == "heaviside") {
    heaviside(t, eo);
  } else if (name == "sin-recip") {
    sin_recip(t, eo);
  } else if (name == "log-spiral") {
    log_spiral(t, eo);
  } else if (name == "example1") {
    example1(t, eo);
  } else if (name == "example2") {
    example2(t, eo);
  } else if (name == "example3") {
    example3(t, eo);
  } else if (name == "radial-xy") {
    radial_xy(t, eo);
  } else if (name == "moment-expansion") {
    moment_expansion(t, eo);
  } else {
    throw std::invalid_argument("unknown reproduce target '" + std::string(name) + "'");
  }
  bool pass = true;
  for (const auto& c : t.checks) pass = pass && c["pass"].get<bool>();
  Json sc;
  sc["reproduce"] = std::string(name);
  sc["params"] = std::move(t.params);
  return make_report(std::string(name), "reproduce", eo.seed, std::move(sc), eo.json(), pass ? "Pass" : "Fail",
                     std::move(t.result), std::move(t.rows), pass ? kExitOk : kExitError, std::move(t.checks));
}

}  // namespace distval
