#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "distval/mollifier.hpp"

using namespace distval;

namespace {

double oracle_1d(const TestFunction& phi) {
  auto [lo, hi] = phi.support_interval();
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&](double x) { return phi(x); }, lo, hi);
}

}  // namespace

TEST_CASE("bump constants") {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double I1 = ts.integrate([](double t) { return std::exp(-1.0 / (1.0 - t * t)); }, -1.0, 1.0);
  CHECK(bump_integral(1) == doctest::Approx(I1).epsilon(1e-13));
  CHECK(bump_integral(1) == doctest::Approx(0.4439938).epsilon(1e-7));
  CHECK(1.0 / bump_integral(1) == doctest::Approx(2.2522836).epsilon(1e-7));
  const double I2 = 2 * std::numbers::pi *
                    ts.integrate([](double r) { return r * std::exp(-1.0 / (1.0 - r * r)); }, 0.0, 1.0);
  CHECK(bump_integral(2) == doctest::Approx(I2).epsilon(1e-12));
}

TEST_CASE("canonical bump is normalized, even, supported in [-1, 1]") {
  const TestFunction phi = canonical_bump(1);
  CHECK(oracle_1d(phi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(phi(1.0) == 0.0);
  CHECK(phi(-1.2) == 0.0);
  CHECK(phi.is_even());
  CHECK(phi.verify().ok());
  CHECK(canonical_bump(2).verify().ok());
  CHECK(canonical_bump(2).is_radial());
}

TEST_CASE("affine copies and mixtures stay normalized") {
  const TestFunction a = affine_bump(0.3, 0.2);
  CHECK(oracle_1d(a) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.support_interval().first == doctest::Approx(0.1));
  CHECK(a.support_interval().second == doctest::Approx(0.5));
  CHECK_FALSE(a.is_even());
  const TestFunction m = mixture({{0.25, a}, {0.75, affine_bump(-1.0, 0.5)}});
  CHECK(oracle_1d(m) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(m.verify().ok());
  const TestFunction s = symmetrize(a);
  CHECK(s.is_even());
  CHECK(s(0.3) == doctest::Approx(s(-0.3)));
  const TestFunction t = a.transformed({1.0, 0.0}, 0.5);
  CHECK(t(1.15) == doctest::Approx(2.0 * a(0.3)));
  CHECK(a.reflected()(-0.3) == doctest::Approx(a(0.3)));
}

TEST_CASE("generic bodies are verified by quadrature") {
  const Expr body = parse("bump(x)");
  const TestFunction g = TestFunction::from_expr(1, body, {0.0, 0.0}, 1.0);
  CHECK(g.generic());
  CHECK(g.normalization() == doctest::Approx(bump_integral(1)).epsilon(1e-10));
  const TestFunctionCheck c = g.verify();
  CHECK(c.positive);
  CHECK(c.support_ok);
  CHECK_FALSE(c.normalized);  // body is not normalized
  const TestFunction wrong = TestFunction::from_expr(1, parse("1-x^2"), {0.0, 0.0}, 0.5);
  CHECK_FALSE(wrong.verify().support_ok);
}

TEST_CASE("bump derivatives agree with the expression derivatives") {
  const Expr b = parse("bump(x)");
  for (int k = 1; k <= 6; ++k) {
    const Expr d = differentiate(b, Var::x, k);
    for (double t : {-0.9, -0.3, 0.1, 0.75}) CHECK(bump_core_derivative(k, t) == doctest::Approx(d(t)).epsilon(1e-9));
  }
}

TEST_CASE("sampled family members are delta sequences") {
  for (Family fam : {Family::F, Family::F_sy, Family::F_all}) {
    FamilySampler s;
    s.family = fam;
    s.seed = 9;
    const auto seqs = sample_family(s, 6);
    REQUIRE(seqs.size() == 6);
    for (const auto& seq : seqs) {
      CAPTURE(seq.label);
      for (std::size_t n : {1, 10, 100}) CHECK(seq.member(n).verify().ok());
      CHECK(delta_probe_error(seq, 100) <= 1e-3);
    }
  }
  FamilySampler r;
  r.family = Family::F_rad;
  r.dim = 2;
  for (const auto& seq : sample_family(r, 3)) {
    CHECK(seq.member(5).is_radial());
    CHECK(seq.member(5).verify().ok());
  }
}

TEST_CASE("family sampling is reproducible") {
  FamilySampler s;
  s.seed = 123;
  const auto a = sample_family(s, 4), b = sample_family(s, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(a[i].label == b[i].label);
    CHECK(a[i].member(17)(0.01) == b[i].member(17)(0.01));
  }
  CHECK(family_from_name("F_sy") == Family::F_sy);
  CHECK(family_name(Family::F_rad) == "F_rad");
  CHECK_FALSE(family_from_name("G"));
}

TEST_CASE("tail mass of a standard sequence tends to zero") {
  const auto seq = standard_sequence(affine_bump(0.5, 1.0), parse("n"), 64);
  const auto m = tail_mass(seq, {-2.0, 2.0}, {-0.1, 0.1});
  REQUIRE(m.size() == 64);
  CHECK(m.front() > 0.5);
  CHECK(m.back() == 0.0);
  for (std::size_t i = 1; i < m.size(); ++i) CHECK(m[i] <= m[i - 1] + 1e-12);
}

TEST_CASE("shifted sequences") {
  const auto seq = shifted_sequence(parse("1/(2*pi*n+pi/6)"), parse("0.1/(2*pi*n+pi/6)^2"), 50);
  CHECK(seq.center(3)[0] == doctest::Approx(1.0 / (6 * std::numbers::pi + std::numbers::pi / 6)));
  CHECK(seq.member(3).verify().ok());
  CHECK(seq.param(50) < seq.param(1));
}
