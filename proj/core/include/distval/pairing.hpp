#pragma once

#include <vector>

#include "distval/distribution.hpp"
#include "distval/mollifier.hpp"
#include "distval/quadrature.hpp"

namespace distval {

struct PairingOptions {
  QuadratureOptions quad;
  // Tighter tolerance and doubled segment budget, for oracle reruns.
  static PairingOptions oracle();
};

// <f, phi>: adaptive Gauss-Kronrod over the support of phi (after moving the
// affine record of f onto phi), split at the singular points of the regular
// part and at support boundaries, plus the exact action of the delta terms.
QuadratureResult pair(const Distribution& f, const TestFunction& phi, const PairingOptions& opt = {});

// Integral of f * phi over the support of phi for a plain 1-d expression;
// the building block of pair() exposed for oracles and tests.
QuadratureResult integrate_against(const Expr& f, const TestFunction& phi, const QuadratureOptions& opt, bool pv = false);

struct MomentTable {
  std::vector<double> mu;     // mu[k] = <f, x^k>
  std::vector<double> error;  // quadrature error bound per moment
};

// Moments mu_0..mu_K of a compactly supported distribution in d = 1.
MomentTable moments(const Distribution& f, int K);

// <f(lambda x), phi> - sum_{q <= Q} mu_q phi^(q)(0) / (q! lambda^(q+1)).
double moment_expansion_remainder(const Distribution& f, const TestFunction& phi, double lambda, int Q);

}  // namespace distval
