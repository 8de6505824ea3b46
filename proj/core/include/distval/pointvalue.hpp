#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "distval/distribution.hpp"
#include "distval/extrapolation.hpp"
#include "distval/mollifier.hpp"
#include "distval/pairing.hpp"

namespace distval {

enum class VerdictTag : std::uint8_t { converged, diverged, non_constant_profile, inconclusive };
std::string_view verdict_name(VerdictTag t);

// One probed pairing: `param` is n for sequences, eps for scaling limits.
struct RawSample {
  double param = 0.0;
  double value = 0.0;
  double error = 0.0;
  QuadStatus status = QuadStatus::ok;
};

struct LimitVerdict {
  VerdictTag tag = VerdictTag::inconclusive;
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double error = std::numeric_limits<double>::quiet_NaN();
  double growth_exponent = 0.0;
  double growth_r2 = 0.0;
  // NonConstantProfile: (index or parameter, limit) per probe.
  std::vector<std::pair<double, double>> profile;
  std::vector<RawSample> raw;
  bool accelerated = false;
  std::string note;

  bool converged() const { return tag == VerdictTag::converged; }
};

struct LimitOptions {
  double tol = 1e-4;
  std::size_t window = 8;
  bool accelerate = true;
  // Share of inaccurate pairings above which a verdict is Inconclusive.
  double max_inaccurate = 0.2;
  PairingOptions pairing;
  unsigned threads = 0;

  TailOptions tail() const { return {window, tol, accelerate}; }
};

// Classifies a probed series. `param` tends to 0 along the series, `scale`
// grows (n, xi(n) or 1/eps) and is used for the divergence fit.
LimitVerdict classify_series(std::vector<RawSample> raw, const std::vector<double>& param,
                             const std::vector<double>& scale, const LimitOptions& opt);

// lim <f(x0 + x), phi_n> over n = 1..N.
LimitVerdict sequence_limit(const Distribution& f, const Point& x0, const DeltaSequenceSpec& seq, std::size_t N,
                            const LimitOptions& opt = {});

// eps = 2^-j, j = 0..20.
std::vector<double> default_eps_grid();

// Six translated bumps, three mixtures (two asymmetric, one even) and three
// centred bumps of different widths.
const std::vector<TestFunction>& default_basis(int dim = 1);
// Even members used by symmetric_value: centred bumps, symmetrized
// translates and an even mixture.
const std::vector<TestFunction>& even_basis();
// Radial members for d = 2: centred bumps, a radial mixture and the
// radialized versions of two off-centre bumps.
const std::vector<TestFunction>& radial_basis();

struct LojasiewiczResult {
  LimitVerdict verdict;
  std::vector<LimitVerdict> per_phi;  // lim_eps <f(x0 + eps x), phi> / int phi
  std::vector<std::string> labels;
};

// Combines per-probe verdicts: Converged when every probe converges and the
// limits agree within tol, NonConstantProfile when all converge but
// disagree, Diverged when any probe diverges, Inconclusive otherwise.
LimitVerdict combine_verdicts(const std::vector<LimitVerdict>& parts, double tol);

LojasiewiczResult lojasiewicz_value(const Distribution& f, const Point& x0, const std::vector<TestFunction>& basis,
                                    const std::vector<double>& eps_grid = default_eps_grid(),
                                    const LimitOptions& opt = {});

struct JumpFit {
  double gamma_minus = 0.0;
  double gamma_plus = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  std::size_t used = 0;  // probes entering the fit
};

// Least-squares fit of limits gamma_i against (mass of phi_i on (-inf, 0),
// mass on (0, inf)). Fewer than two usable probes or a singular design give
// an infinite residual.
JumpFit fit_jump(const std::vector<std::pair<double, double>>& masses, const std::vector<double>& limits);

// Masses of a 1-d test function on (-inf, 0) and (0, inf).
std::pair<double, double> half_line_masses(const TestFunction& phi);

struct FamilyOptions {
  LimitOptions limit;
  // F_all: add worst-case centre schedules for regular f.
  bool adversarial = true;
};

struct FamilyResult {
  LimitVerdict aggregate;
  std::vector<std::string> labels;
  std::vector<LimitVerdict> members;
  std::optional<JumpFit> jump;  // family F in d = 1
  bool witness = false;         // some member escapes the candidate value
  double candidate = std::numeric_limits<double>::quiet_NaN();
};

FamilyResult family_value(const Distribution& f, const Point& x0, const FamilySampler& sampler, std::size_t samples,
                          std::size_t N, const FamilyOptions& opt = {});

// Upper and lower worst-case sequences: member n is a bump centred at the
// point of the ball of radius 1/(2n) that maximizes (resp. minimizes)
// f(x0 + c) - gamma, shrunk until f varies by at most 0.01 on its support.
std::vector<DeltaSequenceSpec> adversarial_sequences(const Distribution& f, const Point& x0, double gamma,
                                                     std::size_t N);

LojasiewiczResult symmetric_value(const Distribution& f, const Point& x0, const std::vector<TestFunction>& basis = {},
                                  const std::vector<double>& eps_grid = default_eps_grid(),
                                  const LimitOptions& opt = {});

LojasiewiczResult radial_value(const Distribution& f, const Point& x0, const std::vector<TestFunction>& basis = {},
                               const std::vector<double>& eps_grid = default_eps_grid(),
                               const LimitOptions& opt = {});

struct JumpFitReport {
  JumpFit fit;
  LojasiewiczResult limits;
  std::vector<std::pair<double, double>> masses;
};

JumpFitReport jump_fit(const Distribution& f, const Point& x0, const std::vector<TestFunction>& basis = {},
                       const std::vector<double>& eps_grid = default_eps_grid(), const LimitOptions& opt = {});

struct AngularSample {
  double theta = 0.0;
  double alpha = 0.0;
  double error = 0.0;
  bool converged = false;
};

struct AngularProfile {
  std::vector<AngularSample> samples;
};

// alpha(theta) = lim_eps int f(x0 + r eps theta) rho(r) dr / int rho, for
// rho supported in (0, inf). Delta terms are ignored (they sit on a null
// set of every ray except the one through them).
AngularProfile angular_profile(const Distribution& f, const Point& x0, const std::vector<double>& angles,
                               const TestFunction& rho, const std::vector<double>& eps_grid = default_eps_grid(),
                               const LimitOptions& opt = {});

struct InvarianceRow {
  double angle = 0.0;  // d = 1: 0 identity, pi reflection
  LimitVerdict verdict;
  double deviation = std::numeric_limits<double>::quiet_NaN();  // |gamma_T - gamma_id|
  bool flagged = false;                                         // member did not converge
};

// phi_n -> phi_n(T^-1 x) for each rotation T.
DeltaSequenceSpec rotated_sequence(const DeltaSequenceSpec& seq, double angle);

std::vector<InvarianceRow> orthogonal_invariance_check(const Distribution& f, const Point& x0,
                                                       const DeltaSequenceSpec& seq,
                                                       const std::vector<double>& rotations, std::size_t N,
                                                       const LimitOptions& opt = {});

}  // namespace distval
