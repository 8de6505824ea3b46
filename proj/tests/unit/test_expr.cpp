#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "distval/expr.hpp"

using namespace distval;

TEST_CASE("grammar accepts the reference expressions") {
  const Expr e = parse("sin(1/x)");
  CHECK(e.kind() == NodeKind::unary);
  CHECK(e.node().uop == UnaryOp::sin);
  CHECK(e.node().a->kind == NodeKind::binary);
  CHECK(e.node().a->bop == BinaryOp::div);
  CHECK(e(2.0 / std::numbers::pi) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_NOTHROW(parse("sin(2*pi*ln(x))"));
  CHECK(parse("sin(2*pi*ln(x))")(std::exp(0.25)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("parse errors carry the offset") {
  auto r = try_parse("x^2+");
  REQUIRE(std::holds_alternative<ParseError>(r));
  CHECK(std::get<ParseError>(r).offset == 4);
  CHECK_THROWS_AS(parse("sin(x"), ParseError);
  CHECK_THROWS_AS(parse("foo(x)"), ParseError);
  CHECK_THROWS_AS(parse("chi(0)"), ParseError);
}

TEST_CASE("unary minus binds looser than powers") {
  CHECK(parse("-x^2")(3.0) == -9.0);
  CHECK(parse("2^-1")(0.0) == 0.5);
  CHECK(parse("-2*x")(1.5) == -3.0);
}

TEST_CASE("indicator, piecewise and bump conventions") {
  const Expr chi = parse("chi(0,1)");
  CHECK(chi(0.5) == 1.0);
  CHECK(chi(1.5) == 0.0);
  // open interval
  CHECK(chi(0.0) == 0.0);
  CHECK(chi(1.0) == 0.0);
  CHECK(parse("chi(0,inf)")(1e300) == 1.0);
  CHECK(parse("bump(x)")(1.0) == 0.0);
  CHECK(parse("bump(x)")(-1.0) == 0.0);
  CHECK(parse("bump(x)")(0.0) == doctest::Approx(std::exp(-1.0)));
  const Expr pw = parse("piecewise(x, 0, 1, x, 1, 2, 2-x)");
  CHECK(pw(0.5) == 0.5);
  CHECK(pw(1.0) == 1.0);
  CHECK(pw(1.5) == 0.5);
  CHECK(pw(2.0) == 0.0);
  CHECK(pw(-1.0) == 0.0);
}

TEST_CASE("undefined values are NaN, unbound variables throw") {
  CHECK(is_undefined(parse("ln(x)")(-1.0)));
  CHECK(is_undefined(parse("1/x")(0.0)));
  CHECK_THROWS_AS(parse("x*y").eval(Env{{Var::x, 1.0}}), UnboundVariable);
}

namespace {

const char* const corpus[] = {
    "sin(1/x)",         "sin(2*pi*ln(x))",    "x^2+3*x-1",        "exp(-x^2)*cos(5*x)", "abs(x)/x",
    "chi(0,1)",         "chi(-1,2,x^2)",      "arctan(x)/(1+x^2)", "sqrt(abs(x))",       "ln(abs(x))",
    "bump(2*x-1)",      "piecewise(x,0,1,x,1,2,2-x)", "-x^3+x/7",  "2^(-x)",             "onsupp(x, 1-x^2)",
    "cos(x)/(2+sin(x))", "x*chi(0,inf)",      "exp(n+1/n)",       "1/(2*pi*n+pi/6)",    "-(x-1)^2",
};

}  // namespace

TEST_CASE("print/parse round trip on random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const char* s : corpus) {
    CAPTURE(s);
    const Expr e = parse(s);
    const Expr back = parse(e.str());
    for (int i = 0; i < 100; ++i) {
      Env env;
      env.set(Var::x, u(rng)).set(Var::n, 1.0 + std::floor(std::fabs(u(rng)) * 10.0));
      const double a = e.eval(env), b = back.eval(env);
      if (std::isnan(a)) {
        CHECK(std::isnan(b));
      } else {
        CHECK(a == b);
      }
    }
  }
}

TEST_CASE("derivatives match central differences") {
  CHECK(differentiate(parse("sin(x)"), Var::x)(0.7) == doctest::Approx(std::cos(0.7)).epsilon(1e-15));
  CHECK(differentiate(parse("bump(x)"), Var::x)(0.0) == 0.0);
  const double h = 1e-5;
  const Expr b = parse("bump(x)");
  const double fd = (b(0.5 + h) - b(0.5 - h)) / (2 * h);
  CHECK(std::fabs(differentiate(b, Var::x)(0.5) - fd) <= 1e-7 * std::fabs(fd));

  const char* smooth[] = {"sin(x)*x^2", "exp(-x^2)", "ln(1+x^2)", "arctan(3*x)", "sqrt(x^2+1)",
                          "cos(x)/(2+sin(x))", "x^3-2*x", "bump(x/2)", "2^x", "exp(sin(x))*x"};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.9, 1.9);
  for (const char* s : smooth) {
    CAPTURE(s);
    const Expr e = parse(s);
    const Expr d = differentiate(e, Var::x);
    for (int i = 0; i < 20; ++i) {
      const double x = u(rng);
      const double c = (e(x + h) - e(x - h)) / (2 * h);
      const double v = d(x);
      CHECK(std::fabs(v - c) <= 1e-6 * (1.0 + std::fabs(v)));
    }
  }
}

TEST_CASE("indicators are not differentiable") {
  CHECK_THROWS_AS(differentiate(parse("chi(0,1)"), Var::x), NotDifferentiable);
  CHECK_NOTHROW(differentiate(parse("chi(0,1,n)*x"), Var::x));
}

TEST_CASE("bump derivatives vanish smoothly at the support edge") {
  const Expr b = parse("bump(x)");
  for (int k = 1; k <= 6; ++k) {
    CAPTURE(k);
    const Expr d = differentiate(b, Var::x, k);
    double prev = std::numeric_limits<double>::infinity();
    for (double gap : {1e-3, 5e-4, 1e-4, 1e-5}) {
      for (double s : {-1.0, 1.0}) {
        const double v = d(s * (1.0 - gap));
        CHECK(std::isfinite(v));
        CHECK(std::fabs(v) <= prev);
      }
      prev = std::fabs(d(1.0 - gap));
    }
    CHECK(prev < 1e-100);
    CHECK(d(1.0) == 0.0);
  }
}

TEST_CASE("singular points") {
  auto s = singularities(parse("sin(1/x)"), -1.0, 1.0);
  REQUIRE(s.size() == 1);
  CHECK(s[0].location == 0.0);
  CHECK(s[0].kind == SingularKind::essential_oscillation);

  auto c = singularities(parse("chi(0,1)"), -2.0, 2.0);
  REQUIRE(c.size() == 2);
  CHECK(c[0] == SingularPoint{0.0, SingularKind::kink});
  CHECK(c[1] == SingularPoint{1.0, SingularKind::kink});

  CHECK(singularities(parse("x^2"), -1.0, 1.0).empty());
  auto p = singularities(parse("1/(x-0.5)"), -1.0, 1.0);
  REQUIRE(p.size() == 1);
  CHECK(p[0].kind == SingularKind::pole);
}

TEST_CASE("structural helpers") {
  auto ab = affine_coefficients(parse("3*x-2"), Var::x);
  REQUIRE(ab);
  CHECK(ab->first == 3.0);
  CHECK(ab->second == -2.0);
  CHECK_FALSE(affine_coefficients(parse("x^2"), Var::x));
  auto hull = support_hull(parse("chi(0,1)*sin(x)"));
  REQUIRE(hull);
  CHECK(hull->first == 0.0);
  CHECK(hull->second == 1.0);
  CHECK(substitute(parse("x^2"), Var::x, parse("x+1"))(1.0) == 4.0);
}
