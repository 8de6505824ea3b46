#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace distval {

struct TailOptions {
  std::size_t window = 8;  // m: number of trailing values inspected
  double tol = 1e-4;
  // Also try the criterion on a Richardson-accelerated tail (polynomial
  // extrapolation to parameter 0 through consecutive triples). Catches
  // sequences converging like c/n that are still visibly moving at N.
  bool accelerate = true;
};

struct TailCheck {
  bool converged = false;
  double value = 0.0;   // limit estimate
  double error = 0.0;   // max pairwise deviation on the accepted tail
  double aitken = 0.0;  // Aitken-accelerated value on the accepted tail
  bool accelerated = false;
};

// Aitken delta-squared of the last three values.
double aitken(std::span<const double> v);

// Value at t = 0 of the polynomial through (t[i], v[i]) (Neville).
double neville_at_zero(std::span<const double> t, std::span<const double> v);

// Plain two-test criterion on the last m values: spread < tol and the Aitken
// value within 2*tol of the tail mean. `param` is the variable that tends to
// 0 along the sequence (1/n, eps, 1/x, ...), used for the accelerated pass.
TailCheck tail_criterion(std::span<const double> param, std::span<const double> values, const TailOptions& opt = {});

struct GrowthFit {
  double exponent = 0.0;
  double r2 = 0.0;
  bool diverged = false;
};

// Least-squares slope of log|v| against log(scale) over the top decade of
// `scale` (the largest values, at least the last four points). Diverged when
// exponent > 0.5 and R^2 > 0.9.
GrowthFit growth_fit(std::span<const double> scale, std::span<const double> values);

struct KendallResult {
  double tau = 0.0;      // tau-b
  double z = 0.0;
  double p_lower = 1.0;  // one-sided p-value for a decreasing trend
  double p_two = 1.0;
};

KendallResult kendall_tau(std::span<const double> x, std::span<const double> y);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace distval
