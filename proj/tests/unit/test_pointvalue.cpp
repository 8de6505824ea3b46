#include <doctest.h>

#include <cmath>
#include <numbers>

#include "distval/pointvalue.hpp"

using namespace distval;

namespace {

const Distribution heaviside = Distribution::regular1(parse("chi(0,inf)"));

}  // namespace

TEST_CASE("continuous functions take their classical value") {
  const Distribution f = Distribution::regular1(parse("cos(x)+x"));
  const LojasiewiczResult r = lojasiewicz_value(f, {0.0, 0.0}, default_basis());
  REQUIRE(r.verdict.converged());
  CHECK(r.verdict.gamma == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.per_phi.size() == default_basis().size());
}

TEST_CASE("Heaviside at the jump") {
  const LojasiewiczResult loj = lojasiewicz_value(heaviside, {0.0, 0.0}, default_basis());
  CHECK(loj.verdict.tag == VerdictTag::non_constant_profile);

  const LojasiewiczResult sym = symmetric_value(heaviside, {0.0, 0.0});
  REQUIRE(sym.verdict.converged());
  CHECK(std::fabs(sym.verdict.gamma - 0.5) <= 1e-6);

  const JumpFitReport j = jump_fit(heaviside, {0.0, 0.0});
  CHECK(std::fabs(j.fit.gamma_minus) <= 1e-6);
  CHECK(std::fabs(j.fit.gamma_plus - 1.0) <= 1e-6);
  CHECK(j.fit.residual <= 1e-6);

  const Distribution sgn = Distribution::regular1(parse("chi(0,inf)-chi(-inf,0)"));
  const JumpFitReport s = jump_fit(sgn, {0.0, 0.0});
  CHECK(s.fit.gamma_minus == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(s.fit.gamma_plus == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("reflecting the probe reflects the Heaviside limit") {
  const TestFunction phi = affine_bump(0.3, 0.8);
  const auto a = lojasiewicz_value(heaviside, {0.0, 0.0}, {phi});
  const auto b = lojasiewicz_value(heaviside, {0.0, 0.0}, {phi.reflected()});
  REQUIRE(a.verdict.converged());
  REQUIRE(b.verdict.converged());
  CHECK(b.verdict.gamma == doctest::Approx(1.0 - a.verdict.gamma).epsilon(1e-9));
}

TEST_CASE("delta diverges linearly") {
  const auto seq = standard_sequence(canonical_bump(1), parse("n"), 200);
  const LimitVerdict v = sequence_limit(Distribution::delta(), {0.0, 0.0}, seq, 200);
  CHECK(v.tag == VerdictTag::diverged);
  CHECK(v.growth_exponent >= 0.9);
  CHECK(v.growth_exponent <= 1.1);
}

TEST_CASE("sequence limits agree with the Lojasiewicz value") {
  const Distribution f = Distribution::regular1(parse("exp(x)*chi(-1,1)+abs(x)"));
  const auto loj = lojasiewicz_value(f, {0.0, 0.0}, default_basis());
  REQUIRE(loj.verdict.converged());
  for (const char* xi : {"n", "3*n", "0.5*n"}) {
    CAPTURE(xi);
    const auto seq = standard_sequence(affine_bump(0.2, 0.7), parse(xi), 400);
    const LimitVerdict v = sequence_limit(f, {0.0, 0.0}, seq, 400);
    REQUIRE(v.converged());
    CHECK(std::fabs(v.gamma - loj.verdict.gamma) <= 1e-3);
  }
}

TEST_CASE("symmetric value agrees where the full value exists") {
  const Distribution f = Distribution::regular1(parse("sin(x)+2"));
  const auto loj = lojasiewicz_value(f, {0.4, 0.0}, default_basis());
  const auto sym = symmetric_value(f, {0.4, 0.0});
  REQUIRE(loj.verdict.converged());
  REQUIRE(sym.verdict.converged());
  CHECK(std::fabs(loj.verdict.gamma - sym.verdict.gamma) <= 1e-6);
  CHECK(loj.verdict.gamma == doctest::Approx(std::sin(0.4) + 2).epsilon(1e-6));
}

TEST_CASE("radial value agrees where the full value exists") {
  const Distribution f = Distribution::regular2(parse("cos(x)*exp(y)"));
  const auto rad = radial_value(f, {0.0, 0.0});
  REQUIRE(rad.verdict.converged());
  CHECK(std::fabs(rad.verdict.gamma - 1.0) <= 1e-4);

  const Distribution xy = Distribution::regular2(parse("x*y/(x^2+y^2)"));
  const auto r0 = radial_value(xy, {0.0, 0.0});
  REQUIRE(r0.verdict.converged());
  CHECK(std::fabs(r0.verdict.gamma) <= 1e-3);
}

TEST_CASE("angular profile of a half-plane indicator") {
  const Distribution h = Distribution::regular2(parse("chi(0,inf)"));
  const std::vector<double> angles{0.0, 1.0, -1.2, 2.0, std::numbers::pi, -2.5};
  const AngularProfile p = angular_profile(h, {0.0, 0.0}, angles, affine_bump(1.5, 0.5));
  REQUIRE(p.samples.size() == angles.size());
  for (const AngularSample& s : p.samples) {
    CAPTURE(s.theta);
    CHECK(s.converged);
    const bool right = std::cos(s.theta) > 0.0;
    CHECK(s.alpha == doctest::Approx(right ? 1.0 : 0.0).epsilon(1e-9));
  }
}

TEST_CASE("rotation check separates xy/(x^2+y^2)") {
  const Distribution xy = Distribution::regular2(parse("x*y/(x^2+y^2)"));
  const auto seq = standard_sequence(affine_bump({0.35, 0.35}, 0.6, 2), parse("n"), 32);
  const auto rows = orthogonal_invariance_check(xy, {0.0, 0.0}, seq, {0.0, std::numbers::pi / 2}, 32);
  REQUIRE(rows.size() == 2);
  REQUIRE(rows[0].verdict.converged());
  CHECK(std::fabs(rows[0].verdict.gamma) >= 0.05);
  CHECK(rows[1].deviation >= 0.1);
}

TEST_CASE("combine_verdicts") {
  LimitVerdict a, b;
  a.tag = b.tag = VerdictTag::converged;
  a.gamma = 1.0;
  b.gamma = 1.0 + 1e-6;
  CHECK(combine_verdicts({a, b}, 1e-4).converged());
  b.gamma = 2.0;
  CHECK(combine_verdicts({a, b}, 1e-4).tag == VerdictTag::non_constant_profile);
  b.tag = VerdictTag::diverged;
  CHECK(combine_verdicts({a, b}, 1e-4).tag == VerdictTag::diverged);
  CHECK(verdict_name(VerdictTag::non_constant_profile) == "NonConstantProfile");
}

TEST_CASE("sampled F probes of a continuous function") {
  FamilySampler s;
  s.family = Family::F;
  const FamilyResult r = family_value(Distribution::regular1(parse("cos(x)")), {0.0, 0.0}, s, 4, 100);
  REQUIRE(r.aggregate.converged());
  CHECK(r.aggregate.gamma == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_FALSE(r.witness);
}
