#pragma once

// Expected separable overapproximation for tau-nice sampling of a partially
// separable quadratic f:
//
//   E[f(x + sum_{i in S} U_i h^(i))]
//     <= f(x) + (tau/n) ( <f'(x), h> + (beta/2) ||h||_w^2 ),
//
// with beta = 1 + (omega - 1)(tau - 1) / max{1, n - 1} and w = L.
// The verifiers below check the inequality and the companion Psi identity by
// literal enumeration of all C(n, tau) subsets.

#include <vector>

#include "aldecomp/problem.hpp"

namespace aldecomp {

struct EsoParams {
  double beta = 1.0;
  Vector w;   // one weight per block (the Lipschitz constants)
  Index tau = 1;
  Index n = 1;
};

// beta alone; requires 1 <= omega <= n and 1 <= tau <= n.
double eso_beta(Index omega, Index tau, Index n);

// beta and w = L for the given problem.
EsoParams eso_params(const CompositeProblem& p, Index tau);

struct EsoCheckPoint {
  Vector x;
  Vector h;
};

struct EsoCheckReport {
  Index points_checked = 0;
  Index subsets_per_point = 0;
  Index violations = 0;
  double worst_margin = 0.0;  // max over points of lhs - rhs (negative when the bound holds)
  bool holds() const { return violations == 0; }
};

// Exhaustive check of the ESO inequality at the given points.  The subset
// count C(n, tau) must not exceed 1e5.  Tolerance: a point counts as a
// violation only if lhs > rhs + 1e-10 * max(1, |f(x)|).
EsoCheckReport verify_eso_exhaustive(const CompositeProblem& p, const EsoParams& params,
                                     const std::vector<EsoCheckPoint>& points);

struct PsiIdentityReport {
  Index points_checked = 0;
  Index violations = 0;
  Index vacuous = 0;  // points where both sides are +infinity (infeasible box)
  double worst_error = 0.0;
  bool holds() const { return violations == 0; }
};

// E[Psi(x + sum_{i in S} U_i h^(i))] = (1 - tau/n) Psi(x) + (tau/n) Psi(x + h),
// checked by enumeration to 1e-12 relative error.  Points with an infeasible
// box (both sides infinite) are reported as vacuous passes.
PsiIdentityReport verify_psi_identity(const CompositeProblem& p, Index tau,
                                      const std::vector<EsoCheckPoint>& points);

}  // namespace aldecomp
