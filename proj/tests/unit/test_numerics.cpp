#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "distval/extrapolation.hpp"
#include "distval/parallel.hpp"
#include "distval/quadrature.hpp"

using namespace distval;

TEST_CASE("adaptive Gauss-Kronrod against tanh-sinh") {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [](double x) { return std::exp(-x * x) * std::cos(5 * x); };
  const QuadratureResult q = adaptive_gk(f, -2.0, 3.0, QuadratureOptions{});
  CHECK(q.ok());
  CHECK(std::fabs(q.value - ts.integrate(f, -2.0, 3.0)) <= 1e-10);

  auto kink = [](double x) { return std::fabs(x - 0.3); };
  const double cut[] = {0.3};
  const QuadratureResult k = adaptive_gk(kink, -1.0, 1.0, cut, QuadratureOptions{});
  CHECK(k.value == doctest::Approx(0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7).epsilon(1e-13));
}

TEST_CASE("undefined samples are never taken at a removable point") {
  auto f = [](double x) { return x == 0.0 ? std::nan("") : std::sin(x) / x; };
  const QuadratureResult q = adaptive_gk(f, -1.0, 1.0, QuadratureOptions{});
  boost::math::quadrature::tanh_sinh<double> ts;
  CHECK(std::fabs(q.value - ts.integrate([](double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }, -1.0, 1.0)) <=
        1e-9);
}

TEST_CASE("oscillatory side integral by the epsilon algorithm") {
  // int_0^1 sin(1/x) dx = sin(1) - Ci(1)
  auto f = [](double x) { return std::sin(1.0 / x); };
  const QuadratureResult q = essential_side(f, 0.0, 1.0, 1.0, QuadratureOptions{});
  CHECK(q.value == doctest::Approx(0.5040670619069283).epsilon(1e-8));
}

TEST_CASE("disc integration") {
  auto one = [](double, double) { return 1.0; };
  CHECK(integrate_disc(one, 0.3, -0.2, 0.5, QuadratureOptions{}).value ==
        doctest::Approx(std::numbers::pi * 0.25).epsilon(1e-12));
  auto r2 = [](double x, double y) { return x * x + y * y; };
  CHECK(integrate_disc(r2, 0.0, 0.0, 1.0, QuadratureOptions{}).value ==
        doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
}

TEST_CASE("Wynn epsilon accelerates an alternating series") {
  std::vector<double> s;
  double acc = 0.0;
  for (int k = 0; k < 20; ++k) {
    acc += (k % 2 == 0 ? 1.0 : -1.0) / (k + 1.0);
    s.push_back(acc);
  }
  CHECK(wynn_epsilon(s).value == doctest::Approx(std::numbers::ln2).epsilon(1e-12));
}

TEST_CASE("tail criterion") {
  std::vector<double> p, v;
  for (int n = 1; n <= 40; ++n) {
    p.push_back(1.0 / n);
    v.push_back(2.0 + 1.0 / n);
  }
  TailOptions plain;
  plain.accelerate = false;
  CHECK_FALSE(tail_criterion(p, v, plain).converged);
  const TailCheck acc = tail_criterion(p, v);
  CHECK(acc.converged);
  CHECK(acc.accelerated);
  CHECK(acc.value == doctest::Approx(2.0).epsilon(1e-8));

  std::vector<double> osc;
  for (int n = 1; n <= 40; ++n) osc.push_back(std::sin(n));
  CHECK_FALSE(tail_criterion(p, osc).converged);

  CHECK(aitken(std::vector<double>{1.0, 1.5, 1.75}) == doctest::Approx(2.0));
  CHECK(neville_at_zero(std::vector<double>{1.0, 0.5, 0.25}, std::vector<double>{3.0, 2.5, 2.25}) ==
        doctest::Approx(2.0));
}

TEST_CASE("growth fit and Kendall tau") {
  std::vector<double> s, v;
  for (int n = 1; n <= 50; ++n) {
    s.push_back(n);
    v.push_back(3.0 * n);
  }
  const GrowthFit g = growth_fit(s, v);
  CHECK(g.diverged);
  CHECK(g.exponent == doctest::Approx(1.0).epsilon(1e-10));

  std::vector<double> x, y;
  for (int i = 0; i < 30; ++i) {
    x.push_back(i);
    y.push_back(-i + 0.3 * std::sin(i));
  }
  const KendallResult k = kendall_tau(x, y);
  CHECK(k.tau < -0.9);
  CHECK(k.p_lower < 1e-6);

  const LinearFit lf = linear_fit(std::vector<double>{0, 1, 2}, std::vector<double>{1, 3, 5});
  CHECK(lf.slope == doctest::Approx(2.0));
  CHECK(lf.intercept == doctest::Approx(1.0));
}

TEST_CASE("parallel_for writes by index and rethrows") {
  std::vector<int> out(100);
  parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
  CHECK_THROWS(parallel_for(10, 3, [](std::size_t i) {
    if (i == 5) throw std::runtime_error("x");
  }));
}
