// Acceptance harness.  Each criterion prints exactly one [PASS]/[FAIL] line
// with its pinned tolerance baked into the check; the exit code is the number
// of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "aldecomp/analysis.hpp"
#include "aldecomp/eso.hpp"
#include "aldecomp/generators.hpp"
#include "aldecomp/problem.hpp"
#include "aldecomp/rng.hpp"
#include "aldecomp/separability.hpp"
#include "aldecomp/solvers.hpp"

using namespace aldecomp;

namespace {

int failures = 0;

void criterion(int id, const char* label, const std::function<bool(std::string&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] c%02d %-52s %6.1fs%s%s\n", ok ? "PASS" : "FAIL", id, label, secs,
              detail.empty() ? "" : "  ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Random block matrix with a planted entry per column (no zero blocks) plus
// densified fill; b = A x_true so the feasibility target is reachable.
BlockMatrix random_matrix(CounterRng& rng, Index rows, const std::vector<Index>& sizes,
                          double density) {
  BlockPartition part(sizes);
  std::vector<Triplet> trips;
  for (Index j = 0; j < part.total(); ++j) {
    const double v = (rng.uniform_real() < 0.5 ? -1.0 : 1.0) * (0.3 + 0.7 * rng.uniform_real());
    trips.emplace_back(static_cast<Index>(j % rows), j, v);
  }
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < part.total(); ++j)
      if (rng.uniform_real() < density) trips.emplace_back(i, j, rng.normal());
  BlockMatrix A = BlockMatrix::from_triplets(rows, part, trips, Vector::Zero(rows));
  Vector xt(part.total());
  for (Index j = 0; j < part.total(); ++j) xt[j] = rng.normal();
  return A.with_b(A.multiply(xt));
}

Vector random_point(CounterRng& rng, Index n, double scale) {
  Vector x(n);
  for (Index i = 0; i < n; ++i) x[i] = scale * rng.normal();
  return x;
}

CompositeProblem strongly_convex_instance(CounterRng& rng, Index blocks, Index bsize, Index rows,
                                          double mu_lo, double mu_hi) {
  std::vector<Index> sizes(static_cast<std::size_t>(blocks), bsize);
  BlockMatrix A = random_matrix(rng, rows, sizes, 0.35);
  std::vector<BlockPsi> psi;
  for (Index i = 0; i < blocks; ++i) {
    Vector c = random_point(rng, bsize, 0.2);
    psi.push_back(BlockPsi::linear_quadratic(std::move(c), rng.uniform(mu_lo, mu_hi)));
  }
  return CompositeProblem(std::move(A), 1.0, std::move(psi));
}

struct ArmStats {
  double mean_epochs = 0.0;
  bool all_stopped = true;
};

// One arm of the block-angular epoch comparison, averaged over 25 seeds.
// `averaged` selects the theta = 1/(2(omega-1)) correction step; otherwise
// the fully parallel prox step (the theta = 1/omega equivalent) runs.
ArmStats block_angular_arm(Index omega, Index blocks, bool averaged) {
  ArmStats stats;
  for (int s = 0; s < 25; ++s) {
    BlockAngularSpec spec;
    spec.blocks = blocks;
    spec.omega = omega;
    spec.seed = 8100 + static_cast<std::uint64_t>(s);
    GeneratedProblem gen = generate_block_angular(spec);
    SolverConfig cfg;
    if (averaged) {
      cfg.algorithm = Algorithm::DqamSqa;
      cfg.sqa_model = SqaModel::LipschitzScaledNorm;
      cfg.theta = 1.0 / (2.0 * static_cast<double>(omega - 1));
    } else {
      cfg.algorithm = Algorithm::PcdmFull;
    }
    cfg.stop = StopRule::FeasibilityRatio;
    cfg.eps = 1e-4;
    cfg.max_iters = 200000;
    cfg.record_every = cfg.max_iters;
    IterationTrace trace = run(gen.problem, cfg);
    stats.all_stopped = stats.all_stopped && trace.stop_satisfied;
    stats.mean_epochs += trace.epochs;
  }
  stats.mean_epochs /= 25.0;
  return stats;
}

IterationTrace bounded_row_arm(const CompositeProblem& p, Algorithm algorithm, Index omega,
                               Index tau) {
  SolverConfig cfg;
  cfg.algorithm = algorithm;
  cfg.processors = 64;
  cfg.stop = StopRule::FeasibilityRatio;
  cfg.eps = 1e-4;
  if (algorithm == Algorithm::DqamSqa) {
    cfg.sqa_model = SqaModel::LipschitzScaledNorm;
    cfg.theta = 1.0 / (2.0 * static_cast<double>(omega - 1));
    cfg.max_iters = 500000;
  } else if (algorithm == Algorithm::Pcdm) {
    cfg.tau = tau;
    cfg.seed = 97;
    cfg.max_iters = 3000000;
  } else {
    cfg.max_iters = 500000;
  }
  cfg.record_every = cfg.max_iters;
  return run(p, cfg);
}

bool c1_separability(std::string& detail) {
  CounterRng rng(101);
  for (int t = 0; t < 50; ++t) {
    const Index blocks = 2 + static_cast<Index>(t % 9);
    std::vector<Index> sizes;
    for (Index i = 0; i < blocks; ++i)
      sizes.push_back(1 + static_cast<Index>(rng.uniform_below(3)));
    BlockPartition part(sizes);
    const Index rows = 2 + static_cast<Index>(rng.uniform_below(9));
    std::vector<Triplet> trips;
    for (Index i = 0; i < rows; ++i)
      for (Index bi = 0; bi < blocks; ++bi)
        if (rng.uniform_real() < 0.35) {
          const Index col = part.offset(bi) + static_cast<Index>(rng.uniform_below(
                                                  static_cast<std::uint64_t>(part.size(bi))));
          trips.emplace_back(i, col, 0.3 + rng.uniform_real());
        }
    if (trips.empty()) trips.emplace_back(0, 0, 1.0);
    BlockMatrix A = BlockMatrix::from_triplets(rows, part, trips, Vector::Zero(rows));
    const Index omega = separability_report(A, false).omega;
    const Index neighbours = ruszczynski_degree(A);
    if (omega != neighbours + 1) {
      detail = "instance " + std::to_string(t) + ": degree " + std::to_string(omega) +
               " vs neighbours " + std::to_string(neighbours);
      return false;
    }
  }
  detail = "50 instances, degree = neighbours + 1 on each";
  return true;
}

bool c2_equivalence(std::string& detail) {
  CounterRng rng(211);
  const Index omegas[3] = {2, 4, 8};
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    BlockAngularSpec spec;
    spec.blocks = 12;
    spec.block_cols = 2;
    spec.c_rows = 3;
    spec.c_density = 0.3;
    spec.omega = omegas[t % 3];
    spec.seed = 4000 + static_cast<std::uint64_t>(t);
    CompositeProblem p = generate_block_angular(spec).problem;
    if (t % 2 == 1) {
      std::vector<Matrix> B;
      for (Index i = 0; i < p.blocks(); ++i) {
        Matrix R(2, 2);
        for (Index a = 0; a < 2; ++a)
          for (Index b = 0; b < 2; ++b) R(a, b) = rng.normal();
        B.push_back(Matrix(R.transpose() * R + Matrix::Identity(2, 2)));
      }
      p = p.with_norms(BlockNorms(p.partition(), Vector::Ones(p.blocks()), B));
    }
    const Index omega = p.omega();
    const Vector L = p.lipschitz_constants();
    std::vector<Matrix> C;
    for (Index i = 0; i < p.blocks(); ++i)
      C.push_back(Matrix(L[i] * (p.norms().identity_B()
                                     ? Matrix::Identity(p.partition().size(i), p.partition().size(i))
                                     : p.norms().B(i))));
    Vector x1 = random_point(rng, p.cols(), 1.0);
    Vector x2 = x1;
    const double theta = 1.0 / static_cast<double>(omega);
    for (int k = 0; k < 100; ++k) {
      x1 = dqam_sqa_step(p, x1, theta, C);
      x2 = pcdm_full_step(p, x2);
      for (Index i = 0; i < p.blocks(); ++i) {
        const Index off = p.partition().offset(i), sz = p.partition().size(i);
        const double diff = (x1.segment(off, sz) - x2.segment(off, sz)).norm();
        const double rel = diff / std::max(1.0, x2.segment(off, sz).norm());
        worst = std::max(worst, rel);
        if (rel > 1e-12) {
          detail = "instance " + std::to_string(t) + " iteration " + std::to_string(k) +
                   ": block deviation " + fmt(rel);
          return false;
        }
      }
    }
  }
  detail = "20 instances x 100 iterations, worst per-block deviation " + fmt(worst);
  return true;
}

bool c3_eso(std::string& detail) {
  CounterRng rng(307);
  double worst_margin = -1e300;
  double worst_identity = 0.0;
  for (Index n = 4; n <= 8; ++n) {
    std::vector<Index> sizes;
    for (Index i = 0; i < n; ++i) sizes.push_back(1 + (i % 2));
    BlockMatrix A = random_matrix(rng, n + 2, sizes, 0.5);
    std::vector<BlockPsi> plain, boxed;
    for (Index i = 0; i < n; ++i) {
      plain.push_back(BlockPsi::zero(A.partition().size(i)));
      const Index sz = A.partition().size(i);
      boxed.push_back(BlockPsi::linear_box(random_point(rng, sz, 0.3),
                                           Vector::Constant(sz, -2.0), Vector::Constant(sz, 2.0)));
    }
    CompositeProblem p(A, 1.0, plain);
    CompositeProblem pbox(A, 1.0, boxed);

    std::vector<EsoCheckPoint> points, feasible;
    for (int k = 0; k < 200; ++k) {
      points.push_back({random_point(rng, p.cols(), 1.0), random_point(rng, p.cols(), 0.7)});
      EsoCheckPoint fp;
      fp.x = Vector(p.cols());
      fp.h = Vector(p.cols());
      for (Index j = 0; j < p.cols(); ++j) {
        fp.x[j] = rng.uniform(-0.5, 0.5);
        fp.h[j] = rng.uniform(-0.25, 0.25);
      }
      feasible.push_back(std::move(fp));
    }
    for (Index tau = 1; tau <= n; ++tau) {
      EsoCheckReport rep = verify_eso_exhaustive(p, eso_params(p, tau), points);
      worst_margin = std::max(worst_margin, rep.worst_margin);
      if (!rep.holds()) {
        detail = "overapproximation violated at n=" + std::to_string(n) +
                 " tau=" + std::to_string(tau) + ", margin " + fmt(rep.worst_margin);
        return false;
      }
      PsiIdentityReport id = verify_psi_identity(pbox, tau, feasible);
      worst_identity = std::max(worst_identity, id.worst_error);
      if (!id.holds() || id.vacuous != 0) {
        detail = "regularizer identity failed at n=" + std::to_string(n) +
                 " tau=" + std::to_string(tau) + ", error " + fmt(id.worst_error);
        return false;
      }
    }
  }
  detail = "200 points per (n, tau); worst margin " + fmt(worst_margin) + ", identity error " +
           fmt(worst_identity);
  return true;
}

bool c4_deterministic_rate(std::string& detail) {
  CounterRng rng(401);
  double worst_excess = -1e300;
  for (int t = 0; t < 10; ++t) {
    CompositeProblem p = strongly_convex_instance(rng, 8, 2, 10, 1e-3, 5e-3);
    const Vector L = p.lipschitz_constants();
    const StrongConvexityInfo info = p.strong_convexity_constants(L);
    if (!(info.mu_F > 0.0)) {
      detail = "instance " + std::to_string(t) + " is not strongly convex";
      return false;
    }
    const double q = q_pcdm(info.mu_F, info.mu_f, p.omega());
    const ReferenceOptimum ref = p.reference_optimum();
    const double floor = 1e-11 * std::max(1.0, std::abs(ref.F_star));
    Vector x = random_point(rng, p.cols(), 1.0);
    double gap = p.eval_F(x) - ref.F_star;
    for (int k = 0; k < 200; ++k) {
      x = pcdm_full_step(p, x);
      const double next_gap = p.eval_F(x) - ref.F_star;
      if (gap > floor) {
        const double ratio = next_gap / gap;
        worst_excess = std::max(worst_excess, ratio - q);
        if (ratio > q + 1e-10) {
          detail = "instance " + std::to_string(t) + " iteration " + std::to_string(k) +
                   ": ratio " + fmt(ratio) + " vs q " + fmt(q);
          return false;
        }
      }
      gap = next_gap;
    }
  }
  detail = "10 instances x 200 iterations, worst ratio excess " + fmt(worst_excess);
  return true;
}

bool c5_high_probability(std::string& detail) {
  CounterRng rng(503);
  BoundedRowSpec spec;
  spec.rows = 60;
  spec.cols = 50;
  spec.omega = 6;
  spec.seed = 5;
  GeneratedProblem gen = generate_bounded_row(spec);
  std::vector<BlockPsi> psi;
  for (Index i = 0; i < 50; ++i) {
    Vector c = random_point(rng, 1, 0.2);
    psi.push_back(BlockPsi::linear_quadratic(std::move(c), rng.uniform(0.05, 0.2)));
  }
  CompositeProblem p(gen.problem.matrix(), 1.0, std::move(psi));
  const Vector L = p.lipschitz_constants();
  const StrongConvexityInfo info = p.strong_convexity_constants(L);
  const ReferenceOptimum ref = p.reference_optimum();
  const double gap0 = p.eval_F(Vector::Zero(p.cols())) - ref.F_star;
  const double eps = 1e-3 * gap0;
  const double beta = eso_beta(p.omega(), 5, 50);
  const Index K = k_bound(50, 5, beta, info.mu_F, info.mu_f, gap0, eps, 0.2);
  if (K < 1) {
    detail = "degenerate iteration bound K = " + std::to_string(K);
    return false;
  }
  int successes = 0;
  for (int s = 0; s < 200; ++s) {
    SolverConfig cfg;
    cfg.algorithm = Algorithm::Pcdm;
    cfg.tau = 5;
    cfg.seed = 20000 + static_cast<std::uint64_t>(s);
    cfg.max_iters = K;
    cfg.record_every = K;
    IterationTrace trace = run(p, cfg);
    if (trace.F - ref.F_star <= eps) ++successes;
  }
  const double fraction = successes / 200.0;
  detail = "K = " + std::to_string(K) + ", success fraction " + fmt(fraction) + " (target 0.8)";
  return fraction >= 0.8;
}

bool c6_contraction_lemma(std::string& detail) {
  CounterRng rng(601);
  int checked = 0;
  for (int t = 0; t < 10; ++t) {
    CompositeProblem p = strongly_convex_instance(rng, 6, 2, 9, 0.1, 1.0);
    const Vector L = p.lipschitz_constants();
    const StrongConvexityInfo info = p.strong_convexity_constants(L);
    const ReferenceOptimum ref = p.reference_optimum();
    const double omega = static_cast<double>(p.omega());
    const double betas[3] = {omega, omega + 0.7,
                             std::max(1.25 * info.mu_f + 1e-6, 1e-3)};
    for (int k = 0; k < 50; ++k) {
      const Vector x = random_point(rng, p.cols(), 1.0 + rng.uniform_real());
      const double beta = betas[k % 3];
      ContractionCheck check = verify_contraction_lemma(p, beta, L, x, info, ref.F_star);
      ++checked;
      if (!check.holds) {
        detail = "instance " + std::to_string(t) + " point " + std::to_string(k) +
                 ": model gap " + fmt(check.model_gap) + " vs contracted " +
                 fmt(check.contracted_gap);
        return false;
      }
    }
  }
  detail = std::to_string(checked) + " points, inequality held at every one";
  return true;
}

bool c7_epoch_comparison(std::string& detail) {
  const ArmStats avg2 = block_angular_arm(2, 20, true);
  const ArmStats par2 = block_angular_arm(2, 20, false);
  if (!avg2.all_stopped || !par2.all_stopped) {
    detail = "omega 2: an arm hit the iteration budget";
    return false;
  }
  if (std::abs(avg2.mean_epochs - par2.mean_epochs) > 1.0) {
    detail = "omega 2 means differ: " + fmt(avg2.mean_epochs) + " vs " + fmt(par2.mean_epochs);
    return false;
  }
  std::ostringstream summary;
  summary << "omega 2: " << fmt(avg2.mean_epochs) << " vs " << fmt(par2.mean_epochs);
  const Index configs[3][2] = {{8, 20}, {16, 20}, {32, 40}};
  for (const auto& cf : configs) {
    const ArmStats avg = block_angular_arm(cf[0], cf[1], true);
    const ArmStats par = block_angular_arm(cf[0], cf[1], false);
    if (!avg.all_stopped || !par.all_stopped) {
      detail = "omega " + std::to_string(cf[0]) + ": an arm hit the iteration budget";
      return false;
    }
    if (par.mean_epochs > 0.65 * avg.mean_epochs) {
      detail = "omega " + std::to_string(cf[0]) + ": parallel " + fmt(par.mean_epochs) +
               " epochs vs averaged " + fmt(avg.mean_epochs) + " exceeds the 0.65 ratio";
      return false;
    }
    summary << "; omega " << cf[0] << " ratio " << fmt(par.mean_epochs / avg.mean_epochs);
  }
  detail = summary.str();
  return true;
}

bool c8_time_units(std::string& detail) {
  std::ostringstream summary;
  for (Index omega : {Index{20}, Index{60}}) {
    BoundedRowSpec spec;
    spec.omega = omega;
    spec.seed = 2026;
    const CompositeProblem p = generate_bounded_row(spec).problem;

    IterationTrace avg = bounded_row_arm(p, Algorithm::DqamSqa, omega, 0);
    IterationTrace full = bounded_row_arm(p, Algorithm::PcdmFull, omega, 0);
    if (!avg.stop_satisfied || !full.stop_satisfied) {
      detail = "omega " + std::to_string(omega) + ": a dense arm hit the iteration budget";
      return false;
    }
    if (!(full.time_units < avg.time_units)) {
      detail = "omega " + std::to_string(omega) + ": fully parallel " +
               std::to_string(full.time_units) + " units vs averaged " +
               std::to_string(avg.time_units);
      return false;
    }
    Index prev = -1;
    for (Index tau : {Index{8}, Index{16}, Index{32}, Index{64}}) {
      IterationTrace sampled = bounded_row_arm(p, Algorithm::Pcdm, omega, tau);
      if (!sampled.stop_satisfied) {
        detail = "omega " + std::to_string(omega) + " tau " + std::to_string(tau) +
                 ": sampled arm hit the iteration budget";
        return false;
      }
      if (!(sampled.time_units < full.time_units)) {
        detail = "omega " + std::to_string(omega) + " tau " + std::to_string(tau) + ": sampled " +
                 std::to_string(sampled.time_units) + " units vs fully parallel " +
                 std::to_string(full.time_units);
        return false;
      }
      if (prev >= 0 && sampled.time_units > prev) {
        detail = "omega " + std::to_string(omega) + ": time units increased at tau " +
                 std::to_string(tau);
        return false;
      }
      prev = sampled.time_units;
    }
    summary << "omega " << omega << ": averaged " << avg.time_units << " > full "
            << full.time_units << " > sampled(64) " << prev << "; ";
  }
  detail = summary.str();
  return true;
}

bool c9_optimal_tau(std::string& detail) {
  CounterRng rng(907);
  for (int t = 0; t < 100; ++t) {
    const Index n = 3 + static_cast<Index>(rng.uniform_below(58));
    const Index p = 1 + static_cast<Index>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    const Index omega = 2 + static_cast<Index>(rng.uniform_below(static_cast<std::uint64_t>(n - 2)));
    const TCurve curve = t_curve(n, p, omega);
    if (curve.tau_opt != p || !curve.matches_p) {
      detail = "n=" + std::to_string(n) + " p=" + std::to_string(p) +
               " omega=" + std::to_string(omega) + ": argmin " + std::to_string(curve.tau_opt);
      return false;
    }
  }
  detail = "100 triples, grid argmin = processor count on each";
  return true;
}

bool c10_speedup(std::string& detail) {
  const SpeedupEstimate ten = speedup_ratio(10, 1.0, 1.0, 0.0, 0.0);
  const SpeedupEstimate two = speedup_ratio(2, 1.0, 1.0, 0.0, 0.0);
  if (ten.lower_bound != 1166.4 || ten.exact != 1166.4) {
    detail = "omega 10 bound " + fmt(ten.lower_bound) + " (want 1166.4)";
    return false;
  }
  if (two.lower_bound != 8.0 || two.exact != 8.0) {
    detail = "omega 2 bound " + fmt(two.lower_bound) + " (want 8)";
    return false;
  }
  detail = "omega 10 gives 1166.4, omega 2 gives 8, both exact";
  return true;
}

bool c11_hygiene(std::string& detail) {
  CounterRng rng(1103);

  // Gradient against central differences.
  {
    CompositeProblem p = strongly_convex_instance(rng, 5, 2, 9, 0.1, 0.8);
    const Vector x = random_point(rng, p.cols(), 1.0);
    const Vector g = p.grad_f(x);
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    for (Index j = 0; j < p.cols(); ++j) {
      Vector e = Vector::Zero(p.cols());
      const double step = 1e-6 * std::max(1.0, std::abs(x[j]));
      e[j] = step;
      const double fd = (p.eval_f(x + e) - p.eval_f(x - e)) / (2.0 * step);
      if (std::abs(fd - g[j]) > 1e-5 * scale) {
        detail = "gradient coordinate " + std::to_string(j) + " off by " + fmt(std::abs(fd - g[j]));
        return false;
      }
    }
  }

  // Prox against a grid search.
  {
    const BlockPsi box = BlockPsi::linear_box(Vector::Constant(1, 0.4),
                                              Vector::Constant(1, -0.8), Vector::Constant(1, 0.5));
    const BlockPsi quad = BlockPsi::linear_quadratic(Vector::Constant(1, -0.3), 0.7);
    for (const BlockPsi* psi : {&box, &quad}) {
      for (double v : {-2.0, -0.6, 0.0, 0.9, 2.2}) {
        for (double d : {0.3, 1.0, 4.0}) {
          const double z = psi->prox(Vector::Constant(1, v), d)[0];
          auto phi = [&](double u) {
            return psi->value(Vector::Constant(1, u)) + 0.5 * d * (u - v) * (u - v);
          };
          double best = -3.0;
          for (double u = -3.0; u <= 3.0; u += 1e-4)
            if (phi(u) < phi(best)) best = u;
          if (std::abs(z - best) > 1e-3 || phi(z) > phi(best) + 1e-9) {
            detail = "prox at v=" + fmt(v) + " d=" + fmt(d) + ": " + fmt(z) + " vs grid " +
                     fmt(best);
            return false;
          }
        }
      }
    }
  }

  // Block constants against a dense eigensolver.
  {
    BlockMatrix A = random_matrix(rng, 12, {3, 2, 4}, 0.5);
    CompositeProblem p(A, 1.3, {BlockPsi::zero(3), BlockPsi::zero(2), BlockPsi::zero(4)});
    const Vector L = p.lipschitz_constants();
    for (Index i = 0; i < 3; ++i) {
      const Matrix gram = 1.3 * (Matrix(A.block(i)).transpose() * Matrix(A.block(i)));
      Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
      const double expected = eig.eigenvalues().maxCoeff();
      if (std::abs(L[i] - expected) > 1e-8 * std::max(1.0, expected)) {
        detail = "block " + std::to_string(i) + " constant " + fmt(L[i]) + " vs dense " +
                 fmt(expected);
        return false;
      }
    }
  }

  // Bit-identical traces across worker counts.
  {
    CompositeProblem p = strongly_convex_instance(rng, 6, 2, 11, 0.05, 0.5);
    Eigen::VectorXd results[2];
    std::vector<TraceRow> rows[2];
    const int threads[2] = {1, 8};
    for (int i = 0; i < 2; ++i) {
      SolverConfig cfg;
      cfg.algorithm = Algorithm::Pcdm;
      cfg.tau = 3;
      cfg.seed = 5;
      cfg.max_iters = 500;
      cfg.record_every = 50;
      cfg.threads = threads[i];
      IterationTrace trace = run(p, cfg);
      results[i] = trace.x;
      rows[i] = trace.rows;
    }
    if ((results[0] - results[1]).norm() != 0.0 || rows[0].size() != rows[1].size()) {
      detail = "final points differ across worker counts";
      return false;
    }
    for (std::size_t k = 0; k < rows[0].size(); ++k)
      if (rows[0][k].F != rows[1][k].F || rows[0][k].f != rows[1][k].f) {
        detail = "trace row " + std::to_string(k) + " differs across worker counts";
        return false;
      }
  }

  detail = "gradient, prox, block constants, and worker determinism all clean";
  return true;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  std::printf("acceptance run\n");

  criterion(1, "coupling degree equals neighbour measure plus one", c1_separability);
  criterion(2, "scaled-norm step equivalence", c2_equivalence);
  criterion(3, "expected overapproximation and regularizer identity", c3_eso);
  criterion(4, "deterministic per-iteration contraction", c4_deterministic_rate);
  criterion(5, "high-probability iteration bound", c5_high_probability);
  criterion(6, "one-step model contraction", c6_contraction_lemma);
  criterion(7, "epoch comparison, block-angular family", c7_epoch_comparison);
  criterion(8, "time-unit comparison, bounded-row family", c8_time_units);
  criterion(9, "optimal sample size equals processor count", c9_optimal_tau);
  criterion(10, "speedup arithmetic fixtures", c10_speedup);
  criterion(11, "numeric hygiene", c11_hygiene);

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d of 11 criteria passed in %.1fs\n", 11 - failures, secs);
  return failures == 0 ? 0 : 1;
}
