#pragma once

// Convergence-rate formulas and their verification helpers.  Conventions:
// mu_*_L / mu_*_e are strong convexity constants measured against the weight
// vectors w = L and w = (1,...,1); L_prime and L_bar are upper bounds on the
// block constants (max_i L_i when measured on the problem itself).

#include <vector>

#include "aldecomp/problem.hpp"

namespace aldecomp {

// Per-iteration contraction factor of fully parallel PCDM:
//   1 - mu_F(L) / (omega + mu_F(L) - mu_f(L)).
double q_pcdm(double mu_F_L, double mu_f_L, Index omega);

// Per-iteration contraction factor of DQAM (omega >= 2):
//   1 - mu_F(e) / (16 L' (omega-1)^3 + 4 (omega-1) mu_F(e)).
double q_dqam(double mu_F_e, double L_prime, Index omega);

// Iteration bound for tau-nice sampled PCDM to reach gap <= eps with
// probability at least 1 - rho:
//   K = ceil( (n/tau) * (beta + mu_F(w) - mu_f(w)) / mu_F(w) * log(gap0/(eps rho)) ).
Index k_bound(Index n, Index tau, double beta, double mu_F_w, double mu_f_w, double gap0,
              double eps, double rho);

struct SpeedupEstimate {
  double exact = 0.0;        // (16 L' (omega-1)^3 + 4 (omega-1) mu_F(e)) / (L_bar omega)
  double lower_bound = 0.0;  // 16 (omega-1)^3 L' / (omega L_bar)
};

// Iteration-count ratio DQAM / fully-parallel-PCDM under matching targets.
// The closed form assumes the smooth part carries all strong convexity
// (mu_F(e) = mu_f(e)); a mismatch is rejected.
SpeedupEstimate speedup_ratio(Index omega, double L_prime, double L_bar, double mu_F_e,
                              double mu_f_e);

struct TCurve {
  std::vector<double> T;  // T[tau-1] for tau = 1..n
  Index tau_opt = 1;      // first argmin
  bool matches_p = false;
};

// Parallel-time model T(tau) = ceil(tau/p) * (n/tau) * beta(tau) * c over
// tau = 1..n.  For 2 <= omega < n the minimum is attained exactly at tau = p.
TCurve t_curve(Index n, Index p, Index omega, double c = 1.0);

// Smallest k with (1-gamma)^k * gap0 <= eps, computed as ceil(log(gap0/eps)/gamma)
// and nudged up if floating-point evaluation of the decay still sits above eps.
Index geometric_decay_bound(double gap0, double eps, double gamma);

struct ContractionCheck {
  double input_gap = 0.0;       // F(x) - F_star
  double model_gap = 0.0;       // H_{beta,w}(x + h(x)) - F_star
  double contracted_gap = 0.0;  // ratio * input_gap
  double ratio = 0.0;           // (beta - mu_f(w)) / (mu_F(w) + beta - mu_f(w))
  bool holds = false;
};

// Checks the one-step model contraction
//   H_{beta,w}(x + h(x)) - F_star <= ratio * (F(x) - F_star)
// where h(x) minimizes the separable model f(x) + <f'(x), h> +
// (beta/2) sum_i w_i ||h_i||_{B_i}^2 + Psi(x+h).  Valid for any beta >=
// mu_f(w); info must hold the constants for these weights.  The tolerance is
// 1e-9 * max(1, |input_gap|).
ContractionCheck verify_contraction_lemma(const CompositeProblem& p, double beta, const Vector& w,
                                          const Vector& x, const StrongConvexityInfo& info,
                                          double F_star);

}  // namespace aldecomp
