#include <doctest.h>

#include <cmath>
#include <numbers>

#include "distval/limitlab.hpp"

using namespace distval;

TEST_CASE("continuous tails and constant scaling limits") {
  // a continuous function with a tail limit L has f(a n) -> L for every a
  for (const auto& [s, L] : std::vector<std::pair<const char*, double>>{
           {"arctan(x)", std::numbers::pi / 2}, {"1/(1+x)", 0.0}, {"(2*x+1)/(x+3)", 2.0}, {"exp(-x)*sin(x)+1", 1.0}}) {
    CAPTURE(s);
    const Expr f = parse(s);
    const LimitVerdict tail = continuous_tail_limit(f, 1e6);
    REQUIRE(tail.converged());
    CHECK(tail.gamma == doctest::Approx(L).epsilon(1e-4));
    const ScalingProbeReport sp = scaling_probe(f, parse("n"), {0.5, 1.0, 2.0, 4.0}, 1000);
    CHECK(sp.constancy == Constancy::constant);
    CHECK(sp.limit == doctest::Approx(L).epsilon(1e-4));
  }
  CHECK_FALSE(continuous_tail_limit(parse("sin(2*pi*ln(x))"), 1e6).converged());
}

TEST_CASE("log-spiral along exp(n + 1/n)") {
  const std::vector<double> a{0.5, 1.0, 2.0, 4.0};
  const ScalingProbeReport sp = scaling_probe(parse("sin(2*pi*ln(x))"), parse("exp(n+1/n)"), a, 100);
  CHECK(sp.constancy == Constancy::non_constant);
  REQUIRE(sp.per_a.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(sp.per_a[i].converged());
    CHECK(std::fabs(sp.per_a[i].gamma - std::sin(2 * std::numbers::pi * std::log(a[i]))) <= 1e-3);
  }
  const ScalingProbeReport lin = scaling_probe(parse("sin(2*pi*ln(x))"), parse("n"), a, 10000);
  CHECK(lin.constancy != Constancy::constant);
}

TEST_CASE("Example 1 construction") {
  const SetFamily s = build_example1(4, parse("2^(-n)"));
  const SetFamilyCheck c = s.check();
  CHECK(c.ok());
  REQUIRE(s.N.size() == 5);
  CHECK(s.N[0] == 2);
  for (int k = 1; k <= 4; ++k) CHECK(k * s.N[k - 1] < s.N[k]);
  for (int k = 0; k < 4; ++k) {
    const double mid = 0.5 * (s.B[k].lo + s.B[k].hi);
    CHECK(s.indicator(mid) == 1.0);
    CHECK(s.B[k].lo > s.N[k] - 1);
    CHECK(s.B[k].hi < s.N[k]);
    CHECK(s.measure_A[k] < s.eta[k]);
  }
  // exact membership: x in A_k iff j x in B_k for some j in the block
  const double x = 0.5 * (s.B[1].lo + s.B[1].hi) / static_cast<double>(s.N[1]);
  CHECK(s.in_A(2, x));
  CHECK(s.first_hit(x, 2) == 2);

  const NonConvergenceEstimate nc = nonconvergence_fraction(s, 10000, 7);
  CHECK(nc.fraction <= nc.bound + 2 * nc.sigma);
}

TEST_CASE("Example 2 tents") {
  const SetFamily s = build_example1(4, parse("2^(-n)"));
  const Expr g = build_example2(s);
  for (int k = 0; k < 4; ++k) CHECK(g(0.5 * (s.B[k].lo + s.B[k].hi)) == doctest::Approx(1.0));
  for (int i = 0; i <= 20000; ++i) {
    const double x = 0.5 + static_cast<double>(s.N.back()) * i / 20000.0;
    const double v = g(x);
    CHECK(v >= 0.0);
    CHECK(v <= s.indicator(x));
  }
  // continuity at the tent endpoints
  for (const Interval& b : s.B) {
    CHECK(std::fabs(g(b.lo)) <= 1e-12);
    CHECK(std::fabs(g(std::nextafter(b.lo, 0.0))) <= 1e-12);
  }
  CHECK_FALSE(continuous_tail_limit(g, static_cast<double>(s.N[s.K - 1])).converged());
  const ScalingProbeReport sp = scaling_probe(g, parse("n"), {1.0, std::sqrt(2.0), 2.0, 3.0}, 200);
  CHECK(sp.constancy == Constancy::constant);
  CHECK(sp.limit == 0.0);
}

TEST_CASE("convergence in measure") {
  const SetFamily s = build_example1(4, parse("2^(-n)"));
  std::vector<double> grid;
  for (int i = 0; i < 30; ++i) grid.push_back(2.0 * std::pow(static_cast<double>(s.N.back()) / 4.0, i / 29.0));
  const MeasureStat exact = convergence_in_measure_tents(s, 0.0, 0.5, 2.0, grid);
  CHECK(exact.exact);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(exact.ratio[i] >= 0.0);
    CHECK(exact.ratio[i] <= 1.0);
    if (grid[i] >= static_cast<double>(s.N[2])) CHECK(exact.ratio[i] <= 0.05);
  }
  const MeasureStat mc = convergence_in_measure(build_example2(s), 0.0, 0.5, 2.0, grid, 4000);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::fabs(mc.ratio[i] - exact.ratio[i]) <= 5 * mc.error[i] + 2e-3);

  const MeasureStat c = convergence_in_measure(parse("3"), 3.0, 0.1, 2.0, {1.0, 10.0, 100.0}, 500);
  for (double r : c.ratio) CHECK(r == 0.0);

  // a whole log-period: one third of it has |sin| <= 1/2 in log measure
  const MeasureStat sp = convergence_in_measure(parse("sin(2*pi*ln(x))"), 0.0, 0.5, std::exp(1.0), {1.0, 7.0, 50.0},
                                                20000);
  for (double r : sp.ratio) {
    CHECK(r > 0.4);
    CHECK(r < 0.9);
  }
  double log_fraction = 0.0;
  for (int i = 0; i < 1000000; ++i)
    log_fraction += std::fabs(std::sin(2 * std::numbers::pi * (i + 0.5) / 1e6)) > 0.5 ? 1e-6 : 0.0;
  CHECK(std::fabs(log_fraction - 2.0 / 3.0) <= 1e-5);
}

TEST_CASE("smoothed scaling") {
  const TestFunction phi = affine_bump(1.5, 0.5);
  const auto conv = smoothed_scaling_probe(parse("arctan(x)"), phi, {1e2, 1e4, 1e6});
  CHECK(conv.back().value == doctest::Approx(std::numbers::pi / 2).epsilon(1e-5));
  const auto per = smoothed_scaling_probe(parse("sin(2*pi*ln(x))"), phi, {1.3, 1.3 * std::exp(1.0), 1.3 * std::exp(3.0)});
  CHECK(per[0].value == doctest::Approx(per[1].value).epsilon(1e-8));
  CHECK(per[0].value == doctest::Approx(per[2].value).epsilon(1e-8));
  CHECK(std::fabs(per[0].value) > 1e-3);
}

TEST_CASE("exact fractions") {
  const auto [num, den] = exact_fraction(0.375);
  CHECK(num == "3");
  CHECK(den == "8");
  CHECK(constancy_name(Constancy::non_constant) == "NonConstant");
}
