#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "distval/expr.hpp"
#include "distval/quadrature.hpp"

namespace distval {

using Point = std::array<double, 2>;
using MultiIndex = std::array<int, 2>;

// Integral of exp(-1/(1-|x|^2)) over the unit ball in dimension 1 or 2.
double bump_integral(int dim);

// Canonical bump exp(-1/(1-t^2)) and its k-th derivative (k <= 6).
double bump_core(double t);
double bump_core_derivative(int k, double t);

// weight * radius^-d * canonical((x - center) / radius), canonical being the
// normalized unit-ball bump.
struct BumpComponent {
  double weight = 1.0;
  Point center{0.0, 0.0};
  double radius = 1.0;
};

struct TestFunctionCheck {
  bool positive = true;
  double integral = 0.0;
  double integral_error = 0.0;
  bool normalized = true;
  bool support_ok = true;
  bool ok() const { return positive && normalized && support_ok; }
};

// A compactly supported smooth test function. Either a nonnegative mixture of
// affine copies of the canonical bump (fast native evaluation, exact affine
// transforms) or a generic expression body with a declared support ball.
class TestFunction {
 public:
  static TestFunction from_components(int dim, std::vector<BumpComponent> comps);
  static TestFunction from_expr(int dim, Expr body, Point center, double support_radius, bool radial = false);

  int dim() const { return dim_; }
  bool generic() const { return comps_.empty(); }
  const std::vector<BumpComponent>& components() const { return comps_; }
  const Expr& body() const { return body_; }

  double operator()(double x) const;
  double operator()(double x, double y) const;
  double eval(const Point& p) const { return dim_ == 1 ? (*this)(p[0]) : (*this)(p[0], p[1]); }
  double derivative(const MultiIndex& k, const Point& at) const;

  // Ball containing the support (centre, radius).
  Point support_center() const;
  double support_radius() const;
  // 1-d: [lo, hi] hull of the support.
  std::pair<double, double> support_interval() const;

  // Certified integral: exact for component mixtures (sum of weights times
  // the canonical constant), quadrature for generic bodies.
  double normalization() const { return normalization_; }
  double normalization_error() const { return normalization_error_; }

  bool is_even(double tol = 1e-12) const;
  bool is_radial() const;

  // y -> scale^-d * phi((y - shift) / scale); stays normalized.
  TestFunction transformed(const Point& shift, double scale) const;
  // phi(T^-1 x) for the rotation T by `angle` (d = 2) or the reflection
  // x -> -x (d = 1, any angle).
  TestFunction rotated(double angle) const;
  TestFunction reflected() const;

  // Positivity on a 10^3-point grid (32x32 in d = 2), |integral - 1| <= 1e-9
  // by independent quadrature, and vanishing outside the declared support.
  TestFunctionCheck verify() const;

  std::string describe() const;

 private:
  int dim_ = 1;
  std::vector<BumpComponent> comps_;
  Expr body_;
  Point generic_center_{0.0, 0.0};
  double generic_radius_ = 1.0;
  bool generic_radial_ = false;
  double normalization_ = 1.0;
  double normalization_error_ = 0.0;
};

TestFunction canonical_bump(int dim);
TestFunction affine_bump(const Point& center, double radius, int dim = 1);
TestFunction affine_bump(double center, double radius);
// Convex combination; weights must be nonnegative and sum to 1.
TestFunction mixture(const std::vector<std::pair<double, TestFunction>>& parts);
// Average of phi and its reflection (rotation by pi in d = 2).
TestFunction symmetrize(const TestFunction& phi);

enum class SequenceKind : std::uint8_t { standard, shifted, explicit_list };

struct DeltaSequenceSpec {
  SequenceKind kind = SequenceKind::standard;
  int dim = 1;
  std::size_t length = 100;
  // standard: phi_n(x) = xi(n)^d base(xi(n) x)
  std::optional<TestFunction> base;
  Expr xi;
  // shifted: affine_bump(centers(n) * direction, radii(n)), clamped radii
  Expr centers;
  Expr radii;
  double direction = 0.0;  // angle of the centre ray in d = 2
  std::vector<TestFunction> members;  // explicit list, members[n-1]
  std::vector<std::string> warnings;
  std::string label;

  TestFunction member(std::size_t n) const;
  // xi(n) for standard sequences; 1 / support radius of member n otherwise.
  double scale(std::size_t n) const;
  Point center(std::size_t n) const;
  double radius(std::size_t n) const;
  // Parameter tending to 0 along the sequence, used by limit extrapolation:
  // 1/xi(n) for standard sequences, |centre| (or the radius) otherwise.
  double param(std::size_t n) const;
};

DeltaSequenceSpec standard_sequence(const TestFunction& base, const Expr& xi, std::size_t N);
DeltaSequenceSpec shifted_sequence(const Expr& centers, const Expr& radii, std::size_t N, int dim = 1,
                                   double direction = 0.0);
DeltaSequenceSpec explicit_sequence(std::vector<TestFunction> members);

enum class Family : std::uint8_t { F, F_sy, F_rad, F_all };
std::string_view family_name(Family f);
std::optional<Family> family_from_name(std::string_view name);

struct FamilySampler {
  Family family = Family::F;
  std::uint64_t seed = 42;
  int dim = 1;
  std::size_t max_mixture = 5;
  double p_lo = 0.5;
  double p_hi = 2.0;
  std::size_t length = 100;
};

std::vector<DeltaSequenceSpec> sample_family(const FamilySampler& s, std::size_t count);

// ||phi_n||_{L1(B \ U)} for n = 1..length (d = 1).
std::vector<double> tail_mass(const DeltaSequenceSpec& seq, std::pair<double, double> B, std::pair<double, double> U);

// Largest |<phi_n, g> - g(0)| over five fixed smooth probes g at n; used to
// certify a sampled sequence as a delta sequence.
double delta_probe_error(const DeltaSequenceSpec& seq, std::size_t n);

// Deterministic uniform [0, 1) stream used by every sampler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace distval
