#pragma once

// Decomposition solvers for the composite problem F = f + Psi:
//
//   Dqam      per-block exact minimization of the separable quadratic model
//             <g_i, h> + (r/2)||A_i h||^2 + Psi_i, then x + theta h
//   DqamFd    the same block subproblems posed through value/gradient oracles
//             only (finite-difference restricted Hessians)
//   DqamSqa   per-block models (1/2) h^T C_i h with user-chosen SPD C_i
//   Pcdm      tau-nice sampled block-prox updates with beta, w from the
//             expected separable overapproximation
//   PcdmFull  all blocks every iteration with beta = omega, w = L
//
// run() drives any of them with residual caching, trace recording, stopping
// rules, and a divergence guard; method_of_multipliers() wraps an inner run
// in the classical outer multiplier update.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "aldecomp/eso.hpp"
#include "aldecomp/problem.hpp"
#include "aldecomp/sampling.hpp"

namespace aldecomp {

enum class Algorithm { MethodOfMultipliers, Dqam, DqamFd, DqamSqa, Pcdm, PcdmFull };

enum class StopRule {
  IterationsOnly,    // run exactly max_iters iterations
  FeasibilityRatio,  // stop when (1/2)||b - Ax||^2 <= eps * b^T b
  OptimalityGap,     // stop when F(x) - F_star <= eps
  Stationarity       // stop when the prox-gradient mapping norm <= eps
};

// Quadratic model used by DqamSqa inside run():
//   BlockHessian        C_i = r A_i^T A_i (the exact restricted Hessian)
//   LipschitzScaledNorm C_i = L_i B_i (the model under which the method at
//                       theta = 1/omega coincides with fully parallel PCDM)
enum class SqaModel { BlockHessian, LipschitzScaledNorm };

struct SolverConfig {
  Algorithm algorithm = Algorithm::PcdmFull;
  // <= 0 picks the default: 1/(2(omega-1)) for omega >= 2, otherwise 1.
  double theta = 0.0;
  Index tau = 1;
  std::uint64_t seed = 0;
  Index max_iters = 1000;
  StopRule stop = StopRule::IterationsOnly;
  double eps = 0.0;
  double F_star = std::numeric_limits<double>::quiet_NaN();
  Index processors = 1;  // p in the time-unit accounting
  int threads = 1;       // worker threads; results are bit-identical for any count
  Index record_every = 1;
  Index residual_refresh_every = 1000;
  Index block_size_cap = 512;
  SqaModel sqa_model = SqaModel::BlockHessian;
  std::optional<Vector> x0;
};

struct TraceRow {
  Index k = 0;
  double F = 0.0;
  double f = 0.0;
  double gap = 0.0;  // feasibility gap (1/2)||b - Ax||^2 / b^T b
  Index blocks = 0;  // blocks updated at iteration k
  double epochs = 0.0;
  Index time_units = 0;
  double wall_ms = 0.0;
};

struct IterationTrace {
  std::vector<TraceRow> rows;
  std::vector<std::string> warnings;
  Vector x;
  double F = 0.0;
  Index iterations = 0;
  double epochs = 0.0;
  Index time_units = 0;
  bool stop_satisfied = false;
  std::string stop_reason;

  // Header: k,F,f,gap,blocks,epochs,time_units,wall_ms
  void write_csv(std::ostream& out) const;
};

IterationTrace run(const CompositeProblem& p, const SolverConfig& config);

// One DQAM iteration from x (block minimizers h, returns x + theta h).
Vector dqam_step(const CompositeProblem& p, const Vector& x, double theta);

struct SmoothOracle {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> grad;
};

// f and f' of the given problem as plain oracles.
SmoothOracle quadratic_oracle(const CompositeProblem& p);

// Derivative-only DQAM iteration: each block minimizes
// f(x + U_i h) + Psi_i(x_i + h) by damped Newton with a central-difference
// restricted Hessian, to restricted gradient norm 1e-10 (relative).
Vector dqam_fd_step(const SmoothOracle& f, const BlockPartition& partition,
                    const std::vector<BlockPsi>& psi, const Vector& x, double theta);

// SQA iteration with explicit SPD block models C_i.
Vector dqam_sqa_step(const CompositeProblem& p, const Vector& x, double theta,
                     const std::vector<Matrix>& C);

// PCDM iteration updating exactly the blocks in S (distinct, in range).
Vector pcdm_step(const CompositeProblem& p, const Vector& x, const EsoParams& params,
                 const std::vector<Index>& S);

// Fully parallel PCDM iteration: all blocks, beta = omega, w = L.
Vector pcdm_full_step(const CompositeProblem& p, const Vector& x);

// Norm of the unit-step prox-gradient mapping x - prox_Psi(x - f'(x));
// zero exactly at minimizers of F, reduces to the projected-gradient
// measure for box kinds.
double stationarity_measure(const CompositeProblem& p, const Vector& x);

struct MomOuter {
  Index k = 0;
  double linking_residual = 0.0;  // ||b - A z_k||
  double F_inner = 0.0;           // final inner objective value
  Index inner_iterations = 0;
  Vector pi;  // multipliers used for this inner solve
  Vector z;   // inner minimizer
};

struct MomResult {
  std::vector<MomOuter> outer;
  Vector pi;
  Vector z;
  std::vector<std::string> warnings;
};

// Method of multipliers: alternate an inner run() of the current augmented
// problem (stopped at stationarity <= inner_tol) with the multiplier update
// pi <- pi + r (b - A z).  The inner configuration's stop rule and x0 are
// managed by this driver; inner solves are warm-started.
MomResult method_of_multipliers(const CompositeProblem& p, const SolverConfig& inner,
                                Index outer_iters, double inner_tol);

}  // namespace aldecomp
