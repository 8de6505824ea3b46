#include <doctest.h>

#include <cmath>
#include <numbers>

#include "distval/distribution.hpp"
#include "distval/pairing.hpp"

using namespace distval;

namespace {

std::vector<TestFunction> random_probes(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  std::vector<TestFunction> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double c = rng.uniform(-1.5, 1.5), r = rng.uniform(0.2, 1.0);
    if (i % 2 == 0) {
      out.push_back(affine_bump(c, r));
    } else {
      const double w = rng.uniform(0.2, 0.8);
      out.push_back(mixture({{w, affine_bump(c, r)}, {1.0 - w, affine_bump(rng.uniform(-1, 1), rng.uniform(0.1, 0.5))}}));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("even and odd parts add up to f") {
  const Distribution f = Distribution::regular1(parse("exp(x)*chi(-1,2)+x^3"));
  const Distribution fe = even_part(f), fo = odd_part(f);
  for (const TestFunction& phi : random_probes(5, 20)) {
    const double whole = pair(f, phi).value;
    CHECK(std::fabs(pair(fe, phi).value + pair(fo, phi).value - whole) <= 1e-10);
  }
}

TEST_CASE("even probes only see the even part") {
  const Distribution f = Distribution::regular1(parse("chi(0,inf)+x*cos(x)"));
  const Distribution fe = even_part(f);
  for (const TestFunction& phi : random_probes(8, 10)) {
    const TestFunction s = symmetrize(phi);
    CHECK(std::fabs(pair(f, s).value - pair(fe, s).value) <= 1e-10);
  }
}

TEST_CASE("delta terms: derivative signs and moments") {
  const Distribution dp = Distribution::delta({0.0, 0.0}, {1, 0});
  const TestFunction phi = affine_bump(0.2, 0.6);
  // <delta', phi> = -phi'(0)
  CHECK(pair(dp, phi).value == doctest::Approx(-phi.derivative({1, 0}, {0.0, 0.0})).epsilon(1e-12));
  const MomentTable m = moments(dp, 2);
  CHECK(m.mu[0] == 0.0);
  CHECK(m.mu[1] == -1.0);
  CHECK(m.mu[2] == 0.0);
  const Distribution d = Distribution::delta({0.5, 0.0});
  CHECK(pair(d, phi).value == doctest::Approx(phi(0.5)));
}

TEST_CASE("translate_scale and resolved agree") {
  const Distribution f = Distribution::regular1(parse("chi(0,inf)")).add_delta({{1.0, 0.0}, {0, 0}, 2.0});
  const Distribution g = translate_scale(f, {0.5, 0.0}, 0.25);
  const Distribution r = g.resolved();
  CHECK(r.identity_affine());
  for (const TestFunction& phi : random_probes(3, 6))
    CHECK(pair(g, phi).value == doctest::Approx(pair(r, phi).value).epsilon(1e-10));
  // the delta at 1 sits at x = 2 after x -> 0.5 + 0.25 x, with weight 2 / 0.25
  REQUIRE(r.deltas().size() == 1);
  CHECK(r.deltas()[0].location[0] == doctest::Approx(2.0));
  CHECK(r.deltas()[0].coefficient == doctest::Approx(8.0));
}

TEST_CASE("radialization is a projection") {
  const TestFunction phi = affine_bump({0.3, -0.1}, 0.5, 2);
  const RadialComponent rc = radialize_testfn(phi);
  const TestFunction once = lift_radial(rc);
  CHECK(once.is_radial());
  const TestFunction twice = lift_radial(radialize_testfn(once));
  for (double r : {0.0, 0.1, 0.3, 0.55, 0.7})
    for (double th : {0.0, 1.0, 2.5}) {
      const double x = r * std::cos(th), y = r * std::sin(th);
      CHECK(std::fabs(once(x, y) - twice(x, y)) <= 1e-8);
    }
  // with a finer angular rule the mean over the circle of radius 0.3 matches a direct trapezoid
  double mean = 0.0;
  for (int k = 0; k < 512; ++k) {
    const double th = 2 * std::numbers::pi * k / 512;
    mean += phi(0.3 * std::cos(th), 0.3 * std::sin(th)) / 512;
  }
  CHECK(std::fabs(lift_radial(radialize_testfn(phi, 256))(0.3, 0.0) - mean) <= 1e-8);
}

TEST_CASE("integrability") {
  CHECK_FALSE(Distribution::regular1(parse("ln(abs(x))")).integrability_problem());
  CHECK(Distribution::regular1(parse("1/x^2")).integrability_problem());
  CHECK(Distribution::regular1(parse("1/x")).integrability_problem());
  CHECK_FALSE(Distribution::regular1(parse("1/x")).set_principal_value(true).integrability_problem());
  CHECK_FALSE(Distribution::regular2(parse("x*y/(x^2+y^2)")).integrability_problem());
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK(sphere_area(2) == doctest::Approx(2 * std::numbers::pi));
  CHECK(sphere_area(3) == doctest::Approx(4 * std::numbers::pi));
}
