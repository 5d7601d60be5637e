#include "aldecomp/eso.hpp"

#include <algorithm>
#include <cmath>

namespace aldecomp {

double eso_beta(Index omega, Index tau, Index n) {
  if (n < 1) throw InvalidArgument("eso: n must be positive");
  if (omega < 1 || omega > n) throw InvalidArgument("eso: omega must satisfy 1 <= omega <= n");
  if (tau < 1 || tau > n) throw InvalidArgument("eso: tau must satisfy 1 <= tau <= n");
  double denom = static_cast<double>(std::max<Index>(1, n - 1));
  return 1.0 + static_cast<double>((omega - 1) * (tau - 1)) / denom;
}

EsoParams eso_params(const CompositeProblem& p, Index tau) {
  EsoParams params;
  params.n = p.blocks();
  params.tau = tau;
  params.beta = eso_beta(p.omega(), tau, p.blocks());
  params.w = p.lipschitz_constants();
  if ((params.w.array() <= 0.0).any())
    throw NumericError("eso: zero block has no positive Lipschitz weight");
  return params;
}

namespace {

// Enumerates all C(n, tau) subsets in lexicographic order.
class SubsetEnumerator {
 public:
  SubsetEnumerator(Index n, Index tau) : n_(n), tau_(tau), subset_(static_cast<std::size_t>(tau)) {
    for (Index t = 0; t < tau; ++t) subset_[static_cast<std::size_t>(t)] = t;
    done_ = tau > n;
  }

  bool done() const { return done_; }
  const std::vector<Index>& current() const { return subset_; }

  void advance() {
    Index t = tau_ - 1;
    while (t >= 0 && subset_[static_cast<std::size_t>(t)] == n_ - tau_ + t) --t;
    if (t < 0) {
      done_ = true;
      return;
    }
    ++subset_[static_cast<std::size_t>(t)];
    for (Index s = t + 1; s < tau_; ++s)
      subset_[static_cast<std::size_t>(s)] = subset_[static_cast<std::size_t>(s - 1)] + 1;
  }

  static Index count(Index n, Index tau) {
    // C(n, tau) with overflow guard against the enumeration budget.
    double c = 1.0;
    for (Index t = 1; t <= tau; ++t)
      c *= static_cast<double>(n - tau + t) / static_cast<double>(t);
    return static_cast<Index>(std::llround(c));
  }

 private:
  Index n_, tau_;
  std::vector<Index> subset_;
  bool done_ = false;
};

}  // namespace

EsoCheckReport verify_eso_exhaustive(const CompositeProblem& p, const EsoParams& params,
                                     const std::vector<EsoCheckPoint>& points) {
  const Index n = p.blocks();
  if (params.n != n) throw InvalidArgument("eso check: params built for a different block count");
  if (params.w.size() != n) throw InvalidArgument("eso check: params need one weight per block");
  Index subsets = SubsetEnumerator::count(n, params.tau);
  if (subsets > 100000)
    throw InvalidArgument("eso check: C(n, tau) exceeds the enumeration budget of 1e5");

  const BlockPartition& part = p.partition();
  EsoCheckReport report;
  report.subsets_per_point = subsets;
  for (const EsoCheckPoint& pt : points) {
    if (pt.x.size() != part.total() || pt.h.size() != part.total())
      throw InvalidArgument("eso check: point size does not match partition");
    double fx = p.eval_f(pt.x);
    Vector g = p.grad_f(pt.x);

    double mean = 0.0;
    Index seen = 0;
    for (SubsetEnumerator e(n, params.tau); !e.done(); e.advance(), ++seen) {
      Vector y = pt.x;
      for (Index i : e.current()) {
        Index off = part.offset(i), k = part.size(i);
        y.segment(off, k) += pt.h.segment(off, k);
      }
      mean += p.eval_f(y);
    }
    mean /= static_cast<double>(seen);

    double hw = 0.0;
    for (Index i = 0; i < n; ++i) {
      Index off = part.offset(i), k = part.size(i);
      hw += params.w[i] * p.norms().quad_form(i, pt.h.segment(off, k));
    }
    double frac = static_cast<double>(params.tau) / static_cast<double>(n);
    double rhs = fx + frac * (g.dot(pt.h) + 0.5 * params.beta * hw);
    double margin = mean - rhs;
    double tol = 1e-10 * std::max(1.0, std::abs(fx));
    report.worst_margin = std::max(report.worst_margin, margin);
    if (margin > tol) ++report.violations;
    ++report.points_checked;
  }
  return report;
}

PsiIdentityReport verify_psi_identity(const CompositeProblem& p, Index tau,
                                      const std::vector<EsoCheckPoint>& points) {
  const Index n = p.blocks();
  if (tau < 1 || tau > n) throw InvalidArgument("psi identity: tau must satisfy 1 <= tau <= n");
  Index subsets = SubsetEnumerator::count(n, tau);
  if (subsets > 100000)
    throw InvalidArgument("psi identity: C(n, tau) exceeds the enumeration budget of 1e5");

  const BlockPartition& part = p.partition();
  PsiIdentityReport report;
  for (const EsoCheckPoint& pt : points) {
    if (pt.x.size() != part.total() || pt.h.size() != part.total())
      throw InvalidArgument("psi identity: point size does not match partition");
    double psi_x = p.eval_psi(pt.x);
    double psi_xh = p.eval_psi(pt.x + pt.h);
    double frac = static_cast<double>(tau) / static_cast<double>(n);
    // At tau = n the psi(x) term has weight 0; skip it so 0 * inf cannot occur.
    double rhs = frac < 1.0 ? (1.0 - frac) * psi_x + frac * psi_xh : psi_xh;

    double mean = 0.0;
    bool infinite = false;
    Index seen = 0;
    for (SubsetEnumerator e(n, tau); !e.done(); e.advance(), ++seen) {
      Vector y = pt.x;
      for (Index i : e.current()) {
        Index off = part.offset(i), k = part.size(i);
        y.segment(off, k) += pt.h.segment(off, k);
      }
      double v = p.eval_psi(y);
      if (std::isinf(v)) {
        infinite = true;
        break;
      }
      mean += v;
    }
    ++report.points_checked;
    if (infinite || std::isinf(rhs)) {
      // Both sides infinite: the identity is vacuous at this point.
      if (infinite && std::isinf(rhs)) {
        ++report.vacuous;
      } else {
        ++report.violations;  // one side finite, the other not
      }
      continue;
    }
    mean /= static_cast<double>(seen);
    double err = std::abs(mean - rhs);
    double scale = std::max({1.0, std::abs(psi_x), std::abs(psi_xh)});
    report.worst_error = std::max(report.worst_error, err / scale);
    if (err > 1e-12 * scale) ++report.violations;
  }
  return report;
}

}  // namespace aldecomp
