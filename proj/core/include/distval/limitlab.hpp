#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "distval/expr.hpp"
#include "distval/mollifier.hpp"
#include "distval/pointvalue.hpp"

namespace distval {

enum class Constancy : std::uint8_t { constant, non_constant, mixed };
std::string_view constancy_name(Constancy c);

struct ScalingProbeReport {
  std::vector<double> a_grid;
  std::vector<LimitVerdict> per_a;
  Constancy constancy = Constancy::mixed;
  double limit = 0.0;  // L when constant
};

// Per-a verdict on the raw sequence f(a * xi(n)), n = 1..N. The tail is
// extrapolated in 1/n, which stays well conditioned for any schedule.
ScalingProbeReport scaling_probe(const Expr& f, const Expr& xi, const std::vector<double>& a_grid, std::size_t N,
                                 const LimitOptions& opt = {});

// lim_{x -> inf} f(x) from a geometric grid on [1, X_max], merged with the
// structural points of f (kinks, guard endpoints) so narrow features in the
// tail are not skipped.
LimitVerdict continuous_tail_limit(const Expr& f, double x_max, std::size_t points = 200,
                                   const LimitOptions& opt = {});

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct SetFamilyCheck {
  bool growth = true;       // k N_k < N_{k+1}
  bool containment = true;  // B_k inside (N_k - 1, N_k)
  bool measure = true;      // mu(A_k) < eta_k
  bool summable = true;     // eta_k > 0, partial sums bounded by the declared total
  std::vector<std::string> details;
  bool ok() const { return growth && containment && measure && summable; }
};

// Example-1 sets. B_k sits centred in (N_k - 1, N_k) with a width w_k whose
// endpoints are dyadic rationals (exact doubles), so membership queries on
// double inputs are exact.
struct SetFamily {
  int K = 0;
  std::vector<std::int64_t> N;  // N_1 .. N_{K+1}
  std::vector<Interval> B;      // B_1 .. B_K
  std::vector<double> eta;      // eta_1 .. eta_K
  std::vector<double> measure_A;           // mu(A_k) rounded to double
  std::vector<std::string> measure_A_exact;  // "p/q", or "<=p/q" for a certified bound on long blocks
  std::vector<std::string> warnings;

  // f(x) = sum_k chi_{B_k}(x)
  double indicator(double x) const;
  // x in A_k = union over j in [N_k, N_{k+1}) of B_k / j (exact rational test).
  bool in_A(int k, double x) const;
  // Smallest q in [k0, K] with x in A_q, or 0.
  int first_hit(double x, int k0) const;
  Expr indicator_expr() const;
  SetFamilyCheck check() const;
};

// N_1 = 2, N_{k+1} = k N_k + 1; w_k = eta_k N_k / (2 (N_{k+1} - N_k)) rounded
// down to a multiple of 2^-32 and capped at 1/2. Since sum_j 1/j over the
// block is at most (N_{k+1} - N_k) / N_k, mu(A_k) <= eta_k / 2.
// The index k of eta is written as the variable n.
SetFamily build_example1(int K, const Expr& eta);

// Continuous tents of height 1 over each B_k, 0 elsewhere.
Expr build_example2(const SetFamily& s);

// Exact numerator/denominator of a finite double.
std::pair<std::string, std::string> exact_fraction(double v);

struct NonConvergenceEstimate {
  std::size_t samples = 0;
  std::size_t hits = 0;  // x in the union of A_q for q in [k0, K]
  double fraction = 0.0;
  double sigma = 0.0;  // binomial standard error
  double bound = 0.0;  // sum of eta_k for k >= k0 (within the constructed depth)
};

// Uniform samples in (0, 1); x counts as non-convergent at depth K when it
// lies in some A_q with k0 <= q <= K.
NonConvergenceEstimate nonconvergence_fraction(const SetFamily& s, std::size_t samples, std::uint64_t seed,
                                               int k0 = 2);

struct MeasureStat {
  std::vector<double> x_grid;
  std::vector<double> ratio;
  std::vector<double> error;  // binomial standard error (0 on the exact path)
  std::size_t samples = 0;
  bool exact = false;
};

// G(x) = mu{t in [x, Cx] : |f(t) - L| > eps} / ((C - 1) x) by stratified
// sampling: `samples` points per window in min(samples, 1000) strata.
MeasureStat convergence_in_measure(const Expr& f, double L, double eps, double C, const std::vector<double>& x_grid,
                                   std::size_t samples, std::uint64_t seed = 42);

// Exact version for the Example-2 tents: the level sets are unions of
// intervals computed from the tent geometry.
MeasureStat convergence_in_measure_tents(const SetFamily& s, double L, double eps, double C,
                                         const std::vector<double>& x_grid);

struct SmoothedRow {
  double lambda = 0.0;
  double value = 0.0;
  double error = 0.0;
  QuadStatus status = QuadStatus::ok;
};

// G(lambda) = int_0^inf f(lambda x) phi(x) dx.
std::vector<SmoothedRow> smoothed_scaling_probe(const Expr& f, const TestFunction& phi,
                                                const std::vector<double>& lambda_grid,
                                                const PairingOptions& opt = {});

}  // namespace distval
