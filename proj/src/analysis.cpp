#include "aldecomp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aldecomp/errors.hpp"
#include "aldecomp/eso.hpp"
#include "aldecomp/solvers.hpp"

namespace aldecomp {

namespace {

void require_ordered_moduli(double mu_F, double mu_f, const char* where) {
  if (!(mu_F >= 0.0) || !(mu_f >= 0.0))
    throw InvalidArgument(std::string(where) + ": strong convexity constants must be nonnegative");
  if (mu_f > mu_F * (1.0 + 1e-12) + 1e-15)
    throw InvalidArgument(std::string(where) + ": mu_f exceeds mu_F, which is impossible");
}

}  // namespace

double q_pcdm(double mu_F_L, double mu_f_L, Index omega) {
  if (omega < 1) throw InvalidArgument("q_pcdm: omega must be at least 1");
  require_ordered_moduli(mu_F_L, mu_f_L, "q_pcdm");
  const double denom = static_cast<double>(omega) + mu_F_L - mu_f_L;
  return 1.0 - mu_F_L / denom;
}

double q_dqam(double mu_F_e, double L_prime, Index omega) {
  if (omega < 2) throw InvalidArgument("q_dqam: the rate is stated for omega >= 2");
  if (!(L_prime > 0.0)) throw InvalidArgument("q_dqam: L_prime must be positive");
  if (!(mu_F_e >= 0.0)) throw InvalidArgument("q_dqam: mu_F must be nonnegative");
  const double om1 = static_cast<double>(omega - 1);
  const double denom = 16.0 * L_prime * om1 * om1 * om1 + 4.0 * om1 * mu_F_e;
  if (mu_F_e == 0.0) return 1.0;
  return 1.0 - mu_F_e / denom;
}

Index k_bound(Index n, Index tau, double beta, double mu_F_w, double mu_f_w, double gap0,
              double eps, double rho) {
  if (n < 1 || tau < 1 || tau > n) throw InvalidArgument("k_bound: need 1 <= tau <= n");
  if (!(beta > 0.0)) throw InvalidArgument("k_bound: beta must be positive");
  if (!(mu_F_w > 0.0)) throw InvalidArgument("k_bound: the bound needs mu_F > 0");
  require_ordered_moduli(mu_F_w, mu_f_w, "k_bound");
  if (!(gap0 > 0.0) || !(eps > 0.0)) throw InvalidArgument("k_bound: gap0 and eps must be positive");
  if (!(rho > 0.0) || rho > 1.0) throw InvalidArgument("k_bound: confidence rho must lie in (0, 1]");
  const double log_term = std::log(gap0 / (eps * rho));
  if (log_term <= 0.0) return 0;
  const double factor = (beta + mu_F_w - mu_f_w) / mu_F_w;
  const double raw = (static_cast<double>(n) / static_cast<double>(tau)) * factor * log_term;
  return static_cast<Index>(std::ceil(raw));
}

SpeedupEstimate speedup_ratio(Index omega, double L_prime, double L_bar, double mu_F_e,
                              double mu_f_e) {
  if (omega < 2) throw InvalidArgument("speedup_ratio: omega must be at least 2");
  if (!(L_prime > 0.0) || !(L_bar > 0.0))
    throw InvalidArgument("speedup_ratio: Lipschitz bounds must be positive");
  require_ordered_moduli(mu_F_e, mu_f_e, "speedup_ratio");
  if (std::abs(mu_F_e - mu_f_e) > 1e-12 * std::max(1.0, mu_F_e))
    throw InvalidArgument(
        "speedup_ratio: the closed form assumes the smooth part carries all strong convexity "
        "(mu_F = mu_f)");
  const double om = static_cast<double>(omega);
  const double om1 = om - 1.0;
  SpeedupEstimate est;
  est.exact = (16.0 * L_prime * om1 * om1 * om1 + 4.0 * om1 * mu_F_e) / (L_bar * om);
  est.lower_bound = 16.0 * om1 * om1 * om1 * L_prime / (om * L_bar);
  return est;
}

TCurve t_curve(Index n, Index p, Index omega, double c) {
  if (n < 1) throw InvalidArgument("t_curve: n must be at least 1");
  if (p < 1) throw InvalidArgument("t_curve: p must be at least 1");
  if (omega < 1 || omega > n) throw InvalidArgument("t_curve: need 1 <= omega <= n");
  if (!(c > 0.0)) throw InvalidArgument("t_curve: the per-update cost c must be positive");
  TCurve curve;
  curve.T.resize(static_cast<std::size_t>(n));
  Index best = 1;
  for (Index tau = 1; tau <= n; ++tau) {
    const double rounds = static_cast<double>((tau + p - 1) / p);
    const double value =
        rounds * (static_cast<double>(n) / static_cast<double>(tau)) * eso_beta(omega, tau, n) * c;
    curve.T[static_cast<std::size_t>(tau - 1)] = value;
    if (value < curve.T[static_cast<std::size_t>(best - 1)]) best = tau;
  }
  curve.tau_opt = best;
  curve.matches_p = best == p;
  return curve;
}

Index geometric_decay_bound(double gap0, double eps, double gamma) {
  if (!(gap0 > 0.0) || !(eps > 0.0))
    throw InvalidArgument("geometric_decay_bound: gap0 and eps must be positive");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw InvalidArgument("geometric_decay_bound: gamma must lie in (0, 1]");
  if (gap0 <= eps) return 0;
  Index k = static_cast<Index>(std::ceil(std::log(gap0 / eps) / gamma));
  if (k < 0) k = 0;
  // log(1-gamma) <= -gamma makes k sufficient in exact arithmetic; nudge past
  // any boundary roundoff.
  while (std::pow(1.0 - gamma, static_cast<double>(k)) * gap0 > eps) ++k;
  return k;
}

ContractionCheck verify_contraction_lemma(const CompositeProblem& p, double beta, const Vector& w,
                                          const Vector& x, const StrongConvexityInfo& info,
                                          double F_star) {
  if (w.size() != p.blocks())
    throw InvalidArgument("verify_contraction_lemma: one weight per block required");
  if (!(w.minCoeff() > 0.0))
    throw InvalidArgument("verify_contraction_lemma: weights must be positive");
  if (!(beta >= info.mu_f))
    throw InvalidArgument("verify_contraction_lemma: the lemma needs beta >= mu_f(w)");
  require_ordered_moduli(info.mu_F, info.mu_f, "verify_contraction_lemma");
  if (!(info.mu_F > 0.0))
    throw InvalidArgument("verify_contraction_lemma: a positive mu_F(w) is required");

  EsoParams params;
  params.beta = beta;
  params.w = w;
  params.tau = p.blocks();
  params.n = p.blocks();
  std::vector<Index> all(static_cast<std::size_t>(p.blocks()));
  for (Index i = 0; i < p.blocks(); ++i) all[static_cast<std::size_t>(i)] = i;
  const Vector x_next = pcdm_step(p, x, params, all);
  const Vector h = x_next - x;

  double quad = 0.0;
  for (Index i = 0; i < p.blocks(); ++i) {
    const Vector hi = h.segment(p.partition().offset(i), p.partition().size(i));
    quad += w[i] * p.norms().quad_form(i, hi);
  }
  const double model_value =
      p.eval_f(x) + p.grad_f(x).dot(h) + 0.5 * beta * quad + p.eval_psi(x_next);

  ContractionCheck check;
  check.input_gap = p.eval_F(x) - F_star;
  check.model_gap = model_value - F_star;
  check.ratio = (beta - info.mu_f) / (info.mu_F + beta - info.mu_f);
  check.contracted_gap = check.ratio * check.input_gap;
  check.holds =
      check.model_gap <= check.contracted_gap + 1e-9 * std::max(1.0, std::abs(check.input_gap));
  return check;
}

}  // namespace aldecomp
