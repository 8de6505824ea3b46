#include <doctest.h>

#include <cmath>

#include "distval/boundedness.hpp"

using namespace distval;

namespace {

Region interval(double lo, double hi) { return {{lo, 0.0}, {hi, 0.0}}; }

}  // namespace

TEST_CASE("sin on (0, 10)") {
  const Distribution f = Distribution::regular1(parse("sin(x)"));
  const LinfEstimate n = linf_norm_estimate(f, interval(0.0, 10.0));
  CHECK(n.value >= 0.99);
  CHECK(n.value <= 1.0 + 1e-6);
  CHECK_FALSE(n.unbounded);
  const EssBounds e = esssup_essinf(f, interval(0.0, 10.0));
  CHECK(std::fabs(e.sup - 1.0) <= 1e-2);
  CHECK(std::fabs(e.inf + 1.0) <= 1e-2);
  const BoundednessReport b = boundedness_probe(f, interval(0.0, 10.0));
  CHECK(b.verdict == BoundTag::bounded_witness);
}

TEST_CASE("ln|x| is unbounded near 0") {
  const Distribution f = Distribution::regular1(parse("ln(abs(x))"));
  const BoundednessReport b = boundedness_probe(f, interval(-1.0, 1.0));
  CHECK(b.verdict == BoundTag::unbounded_witness);
  CHECK(std::fabs(b.witness.center[0]) < 0.1);
  CHECK(linf_norm_estimate(f, interval(-1.0, 1.0)).unbounded);
  CHECK(bound_tag_name(BoundTag::unbounded_witness) == "UnboundedWitness");
}

TEST_CASE("indicators") {
  const LinfEstimate n = linf_norm_estimate(Distribution::regular1(parse("chi(0,1)")), interval(-1.0, 2.0));
  CHECK(n.value == doctest::Approx(1.0).epsilon(1e-6));
  const EssBounds e = esssup_essinf(Distribution::regular1(parse("chi(0,1)-chi(1,2)")), interval(-1.0, 3.0));
  CHECK(e.sup == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(e.inf == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("a spike on a null set changes nothing") {
  // indicator of an empty-width interval
  const Distribution plain = Distribution::regular1(parse("cos(x)"));
  const Distribution spiked = Distribution::regular1(parse("cos(x)+100*chi(0.5,0.5)"));
  const EssBounds a = esssup_essinf(plain, interval(0.0, 1.0));
  const EssBounds b = esssup_essinf(spiked, interval(0.0, 1.0));
  CHECK(a.sup == doctest::Approx(b.sup).epsilon(1e-9));
  CHECK(a.inf == doctest::Approx(b.inf).epsilon(1e-9));
}

TEST_CASE("estimates are monotone in the budget") {
  const Distribution f = Distribution::regular1(parse("x*sin(5*x)"));
  double prev = 0.0;
  for (std::size_t budget : {50, 100, 200, 400, 800}) {
    LadderOptions o;
    o.budget = budget;
    const LinfEstimate n = linf_norm_estimate(f, interval(-2.0, 3.0), o);
    CHECK(n.value >= prev);
    prev = n.value;
  }
}

TEST_CASE("pairings are sandwiched between essinf and esssup") {
  const Distribution f = Distribution::regular1(parse("exp(-x)*cos(3*x)"));
  const Region U = interval(0.0, 2.0);
  const EssBounds e = esssup_essinf(f, U);
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const double r = rng.uniform(0.01, 0.3);
    const double c = rng.uniform(r, 2.0 - r);
    const double v = pair(f, affine_bump(c, r)).value;
    CHECK(v >= e.inf - 1e-9);
    CHECK(v <= e.sup + 1e-9);
  }
  double mx = -1e300;
  for (int i = 1; i < 100000; ++i) mx = std::max(mx, std::exp(-2.0 * i / 1e5) * std::cos(6.0 * i / 1e5));
  CHECK(std::fabs(e.sup - mx) <= 1e-2);
}

TEST_CASE("two-dimensional box") {
  const Distribution f = Distribution::regular2(parse("exp(-(x-0.2)^2-(y+0.1)^2)-exp(-(x+0.5)^2-(y-0.4)^2)"));
  const Region U{{-1.0, -1.0}, {1.0, 1.0}};
  const EssBounds e = esssup_essinf(f, U);
  double mx = -1e300, mn = 1e300;
  for (int i = 0; i <= 400; ++i)
    for (int j = 0; j <= 400; ++j) {
      const double x = -1.0 + i / 200.0, y = -1.0 + j / 200.0;
      const double v = std::exp(-(x - 0.2) * (x - 0.2) - (y + 0.1) * (y + 0.1)) -
                       std::exp(-(x + 0.5) * (x + 0.5) - (y - 0.4) * (y - 0.4));
      mx = std::max(mx, v);
      mn = std::min(mn, v);
    }
  CHECK(std::fabs(e.sup - mx) <= 1e-2);
  CHECK(std::fabs(e.inf - mn) <= 1e-2);
}

TEST_CASE("escape rule") {
  CHECK(escapes({1, 2, 3, 4, 5, 6, 7, 8}));
  CHECK_FALSE(escapes({1, 1, 1, 1, 1, 1, 1}));
  CHECK_FALSE(escapes({1, 1.0001, 1.0002, 1.0003, 1.0004, 1.0005, 1.0006}));
  // coarse levels of a bounded f: large but shrinking gains
  CHECK_FALSE(escapes({2.5454, 2.7744, 2.8147, 2.8306, 2.8333, 2.8342, 2.8344}));
}
