#pragma once

// Composite objective built from an augmented Lagrangian:
//
//   F(x) = f(x) + Psi(x),   f(x) = (r/2) ||b - A x||^2,
//   Psi(x) = sum_i [ psi_i(x^(i)) - <A_i^T pi, x^(i)> ].
//
// The multiplier term <pi, b - A x> enters only through the per-block linear
// shift -A_i^T pi (the constant <pi, b> is dropped), so every solver sees a
// plain composite problem.  Instances are immutable; multiplier updates
// return a new problem.

#include <optional>
#include <string>
#include <vector>

#include "aldecomp/block_structure.hpp"
#include "aldecomp/psi.hpp"

namespace aldecomp {

struct StrongConvexityInfo {
  double mu_F = 0.0;    // strong convexity of F in the weighted norm
  double mu_f = 0.0;    // strong convexity of f in the weighted norm
  double mu_psi = 0.0;  // strong convexity of Psi in the weighted norm
  Vector w;             // the weights the constants refer to
};

struct ReferenceOptimum {
  Vector x;
  double F_star = 0.0;
  double f_star = 0.0;
  double certificate = 0.0;  // residual norm (smooth) or prox-gradient norm (box)
  Index iterations = 0;
};

class CompositeProblem {
 public:
  CompositeProblem(BlockMatrix A, double r, std::vector<BlockPsi> psi);
  CompositeProblem(BlockMatrix A, double r, std::vector<BlockPsi> psi, Vector pi);
  CompositeProblem(BlockMatrix A, double r, std::vector<BlockPsi> psi, Vector pi,
                   BlockNorms norms);

  const BlockMatrix& matrix() const { return A_; }
  const BlockPartition& partition() const { return A_.partition(); }
  Index blocks() const { return A_.blocks(); }
  Index cols() const { return A_.cols(); }
  Index rows() const { return A_.rows(); }
  double r() const { return r_; }
  const Vector& pi() const { return pi_; }
  const BlockNorms& norms() const { return norms_; }

  const BlockPsi& psi(Index i) const;            // as supplied
  const BlockPsi& effective_psi(Index i) const;  // with the multiplier shift folded in

  // L_i in the metric of the norms' B_i; entries can be 0 for zero blocks,
  // which every solver path rejects.
  const Vector& lipschitz_constants() const { return L_; }
  bool has_zero_block() const { return zero_block_; }
  // Partial separability degree of A.
  Index omega() const { return omega_; }

  double eval_f(const Vector& x) const;
  Vector grad_f(const Vector& x) const;
  // Block gradient from a cached residual rho = b - A x: (f'(x))^(i) = -r A_i^T rho.
  Vector grad_f_block(Index i, const Vector& rho) const;
  double eval_psi(const Vector& x) const;
  double eval_F(const Vector& x) const;

  // (1/2) ||b - A x||^2 / (b^T b); the r factor is folded out so the value
  // matches the ratio stopping rule regardless of r.  Requires b != 0.
  double feasibility_gap(const Vector& x) const;

  // pi' = pi + r (b - A z).
  CompositeProblem multiplier_update(const Vector& z) const;
  CompositeProblem with_multipliers(Vector pi) const;
  CompositeProblem with_norms(BlockNorms norms) const;

  // Minimizer of F.  Smooth kinds: the stationarity system
  // (r A^T A + Diag(mu)) x = r A^T b - c is solved by conjugate gradient and
  // certified to residual 1e-12 (relative to max(1, ||rhs||)).  With box
  // kinds: fully parallel block-prox iteration until the per-step F decrease
  // falls below 1e-14 (relative), certified by prox-gradient norm < 1e-10.
  ReferenceOptimum reference_optimum() const;

  // mu_f(w), mu_psi(w), mu_F(w) for the given weights (in the norms' B
  // metric).  The smooth-part constants are smallest generalized eigenvalues
  // computed by inverse power iteration to relative tolerance 1e-10; the box
  // indicator contributes 0 by convention.
  StrongConvexityInfo strong_convexity_constants(const Vector& w) const;

 private:
  void init();

  BlockMatrix A_;
  double r_;
  std::vector<BlockPsi> psi_;
  Vector pi_;
  BlockNorms norms_;

  std::vector<BlockPsi> effective_psi_;
  Vector L_;
  Index omega_ = 0;
  bool zero_block_ = false;
};

// Problem bundle text format: the matrix format, then
//   r: <value>
//   psi:
//   one line per block:  zero | box <c> <lo> <hi> | linquad <mu> <c>
//   pi:                  (optional section, m values)
CompositeProblem read_problem(std::istream& in);
CompositeProblem read_problem_file(const std::string& path);
void write_problem(std::ostream& out, const CompositeProblem& p);
void write_problem_file(const std::string& path, const CompositeProblem& p);

}  // namespace aldecomp
