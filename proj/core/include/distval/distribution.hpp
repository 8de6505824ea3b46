#pragma once

#include <optional>
#include <string>
#include <vector>

#include "distval/expr.hpp"
#include "distval/mollifier.hpp"

namespace distval {

inline constexpr int kMaxDeltaOrder = 6;

// coefficient * D^order delta(x - location)
struct DeltaTerm {
  Point location{0.0, 0.0};
  MultiIndex order{0, 0};
  double coefficient = 1.0;
};

enum class Geometry : std::uint8_t { cartesian, radial };

// Surface area of the unit sphere in R^d (2 for d = 1, 2*pi for d = 2).
double sphere_area(int d);

// A regular part (Expr in x, in x and y, or a profile in r for radial
// distributions) plus finitely many delta terms, viewed through the affine
// record f(shift + scale * x).
class Distribution {
 public:
  static Distribution regular1(const Expr& f);
  static Distribution regular2(const Expr& f);
  // f(x) = profile(|x|) on R^d.
  static Distribution radial(const Expr& profile, int d);
  static Distribution delta(const Point& location = {0.0, 0.0}, const MultiIndex& order = {0, 0},
                            double coefficient = 1.0, int dim = 1);

  int dim() const { return dim_; }
  Geometry geometry() const { return geometry_; }
  int radial_dim() const { return radial_dim_; }
  const std::optional<Expr>& regular() const { return regular_; }
  const std::vector<DeltaTerm>& deltas() const { return deltas_; }
  bool principal_value() const { return pv_; }
  const Point& shift() const { return shift_; }
  double scale() const { return scale_; }
  bool identity_affine() const { return scale_ == 1.0 && shift_[0] == 0.0 && shift_[1] == 0.0; }

  Distribution& add_delta(const DeltaTerm& t);
  Distribution& set_principal_value(bool pv);
  Distribution& set_regular(const Expr& f);

  // Regular part at a physical point (ignores the affine record).
  double regular_at(const Point& p) const;

  // Equivalent distribution with identity affine record: the regular part is
  // composed with the affine map, delta terms are moved and rescaled.
  Distribution resolved() const;

  // Finite-quadrature probe that the regular part is locally integrable on
  // the box [-h, h]^d about the affine origin; returns a diagnostic on
  // failure. Simple poles are admitted under the principal-value flag.
  std::optional<std::string> integrability_problem(double half_width = 1.0) const;

  std::string describe() const;

  // Same distribution with the delta list replaced.
  Distribution with_deltas(std::vector<DeltaTerm> terms) const;

 private:
  friend Distribution translate_scale(const Distribution&, const Point&, double);
  friend Distribution operator*(double c, const Distribution& f);
  int dim_ = 1;
  Geometry geometry_ = Geometry::cartesian;
  int radial_dim_ = 1;
  std::optional<Expr> regular_;
  std::vector<DeltaTerm> deltas_;
  bool pv_ = false;
  Point shift_{0.0, 0.0};
  double scale_ = 1.0;
};

Distribution operator+(const Distribution& a, const Distribution& b);
Distribution operator*(double c, const Distribution& f);

// f(x0 + eps x).
Distribution translate_scale(const Distribution& f, const Point& x0, double eps);

// (f(x) +- f(-x)) / 2 for d = 1 (resolved first).
Distribution even_part(const Distribution& f);
Distribution odd_part(const Distribution& f);

struct RadialComponent {
  Expr profile;  // even in r
  int source_dim = 2;
  double support = 1.0;  // profile vanishes for |r| >= support
  std::size_t grid = 0;  // radial nodes of the final tabulation
};

// (1/omega) * integral of phi(r theta) over the circle, by an M-point
// trapezoid in angle, tabulated on a radial grid and interpolated by cubic
// Hermite pieces; the grid is doubled until successive tabulations differ by
// less than 1e-9.
RadialComponent radialize_testfn(const TestFunction& phi, std::size_t M = 64);

// The 2-d radial test function x -> profile(|x|).
TestFunction lift_radial(const RadialComponent& rc);

// f1(r) * r^(d-1), the integrand of a radial pairing over (0, inf).
Expr radial_pullback(const Distribution& f, int d);

}  // namespace distval
