#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "distval/pairing.hpp"

using namespace distval;

namespace {

// Independent reference: tanh-sinh on each smooth piece.
double oracle(const Expr& f, const TestFunction& phi, std::vector<double> cuts = {}) {
  auto [lo, hi] = phi.support_interval();
  cuts.insert(cuts.begin(), lo);
  cuts.push_back(hi);
  boost::math::quadrature::tanh_sinh<double> ts;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = std::clamp(cuts[i], lo, hi), b = std::clamp(cuts[i + 1], lo, hi);
    if (b > a) s += ts.integrate([&](double x) { return f(x) * phi(x); }, a, b);
  }
  return s;
}

}  // namespace

TEST_CASE("pairings against independent quadrature") {
  const TestFunction phi = affine_bump(0.1, 0.9);
  const Expr h = parse("chi(0,inf)");
  CHECK(std::fabs(pair(Distribution::regular1(h), phi).value - oracle(h, phi, {0.0})) <= 1e-9);
  const Expr ln = parse("ln(abs(x))");
  CHECK(std::fabs(pair(Distribution::regular1(ln), phi).value - oracle(ln, phi, {0.0})) <= 1e-8);
  const Expr c = parse("cos(3*x)*exp(x)");
  CHECK(std::fabs(pair(Distribution::regular1(c), phi).value - oracle(c, phi)) <= 1e-10);
}

TEST_CASE("oscillatory singularity") {
  const TestFunction phi = canonical_bump(1);
  const Expr s = parse("sin(1/x)");
  // odd integrand against an even bump
  CHECK(std::fabs(pair(Distribution::regular1(s), phi).value) <= 1e-9);
  const TestFunction off = affine_bump(0.3, 0.5);
  // reference: Gauss-Kronrod between consecutive zeros 1/(k pi) of sin(1/x),
  // dropping |x| < 1/(K pi) where phi(x) - phi(0) = O(x) keeps the error O(K^-2)
  boost::math::quadrature::gauss_kronrod<double, 31> gk;
  const double p0 = off(0.0);
  auto g = [&](double x) { return s(x) * (off(x) - p0); };
  double ref = p0 * gk.integrate([&](double x) { return s(x); }, 0.2, 0.8, 15, 1e-14);
  const int K = 40000;
  double prev = 0.8, prev_neg = -0.2;
  for (int k = 1; k <= K; ++k) {
    const double z = 1.0 / (k * std::numbers::pi);
    if (z < prev) {
      ref += gk.integrate(g, z, prev, 0);
      prev = z;
    }
    if (-z > prev_neg) {
      ref += gk.integrate(g, prev_neg, -z, 0);
      prev_neg = -z;
    }
  }
  CHECK(pair(Distribution::regular1(s), off).value == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("pairing is linear") {
  const Distribution f = Distribution::regular1(parse("abs(x)^(-0.5)+chi(0,1)"));
  const TestFunction a = affine_bump(0.2, 0.7), b = affine_bump(-0.4, 0.3);
  // the |x|^-1/2 singularity needs the tight tolerance to resolve 1e-9
  const PairingOptions o = PairingOptions::oracle();
  const TestFunction m = mixture({{0.3, a}, {0.7, b}});
  CHECK(std::fabs(pair(f, m, o).value - (0.3 * pair(f, a, o).value + 0.7 * pair(f, b, o).value)) <= 1e-9);
  const Distribution g = Distribution::regular1(parse("x^2"));
  CHECK(std::fabs(pair(f + g, a, o).value - (pair(f, a, o).value + pair(g, a, o).value)) <= 1e-9);
  CHECK(std::fabs(pair(2.5 * f, a, o).value - 2.5 * pair(f, a, o).value) <= 1e-9);
}

TEST_CASE("change of variables") {
  const Distribution f = Distribution::regular1(parse("chi(0,inf)*(1+x)"));
  const TestFunction phi = affine_bump(0.1, 0.8);
  for (double eps : {1.0, 0.5, 0.01}) {
    // <f(x0 + eps x), phi> = <f, eps^-1 phi((y - x0) / eps)>
    const double lhs = pair(translate_scale(f, {0.2, 0.0}, eps), phi).value;
    const double rhs = pair(f, phi.transformed({0.2, 0.0}, eps)).value;
    CHECK(std::fabs(lhs - rhs) <= 1e-9);
  }
}

TEST_CASE("L1 bound") {
  const Expr g = parse("sin(5*x)*exp(-x)");
  const TestFunction phi = affine_bump(0.5, 1.0);
  double sup = 0.0;
  for (int i = 0; i <= 2000; ++i) sup = std::max(sup, std::fabs(g(-0.5 + 2.0 * i / 2000)));
  CHECK(std::fabs(pair(Distribution::regular1(g), phi).value) <= sup + 1e-9);
}

TEST_CASE("two-dimensional pairings") {
  const TestFunction phi = affine_bump({0.2, 0.1}, 0.5, 2);
  const Distribution one = Distribution::regular2(parse("1"));
  CHECK(pair(one, phi).value == doctest::Approx(1.0).epsilon(1e-9));
  const Distribution xy = Distribution::regular2(parse("x*y/(x^2+y^2)"));
  CHECK(std::fabs(pair(xy, canonical_bump(2)).value) <= 1e-9);
  const Distribution rad = Distribution::radial(parse("r^2"), 2);
  boost::math::quadrature::tanh_sinh<double> ts;
  const TestFunction c = canonical_bump(2);
  const double ref = 2 * std::numbers::pi * ts.integrate([&](double r) { return r * r * r * c(r, 0.0); }, 0.0, 1.0);
  CHECK(pair(rad, c).value == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("moments and the moment expansion") {
  const Distribution chi = Distribution::regular1(parse("chi(0,1)"));
  const MomentTable m = moments(chi, 4);
  for (int k = 0; k <= 4; ++k) CHECK(m.mu[k] == doctest::Approx(1.0 / (k + 1)).epsilon(1e-12));
  const Distribution d = Distribution::delta();
  CHECK(moment_expansion_remainder(d, affine_bump(0.25, 1.0), 10.0, 0) == doctest::Approx(0.0));
  const TestFunction phi = affine_bump(0.25, 1.0);
  const double r50 = std::fabs(moment_expansion_remainder(chi, phi, 50.0, 0));
  const double r100 = std::fabs(moment_expansion_remainder(chi, phi, 100.0, 0));
  CHECK(std::log2(r50 / r100) == doctest::Approx(2.0).epsilon(0.1));
}
