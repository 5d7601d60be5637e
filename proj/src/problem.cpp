#include "aldecomp/problem.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "aldecomp/separability.hpp"

namespace aldecomp {

CompositeProblem::CompositeProblem(BlockMatrix A, double r, std::vector<BlockPsi> psi)
    : CompositeProblem(std::move(A), r, std::move(psi), Vector()) {}

CompositeProblem::CompositeProblem(BlockMatrix A, double r, std::vector<BlockPsi> psi, Vector pi)
    : A_(std::move(A)), r_(r), psi_(std::move(psi)), pi_(std::move(pi)) {
  norms_ = BlockNorms::identity(A_.partition());
  init();
}

CompositeProblem::CompositeProblem(BlockMatrix A, double r, std::vector<BlockPsi> psi, Vector pi,
                                   BlockNorms norms)
    : A_(std::move(A)), r_(r), psi_(std::move(psi)), pi_(std::move(pi)), norms_(std::move(norms)) {
  init();
}

void CompositeProblem::init() {
  if (!(r_ > 0.0)) throw InvalidArgument("problem: penalty r must be positive");
  if (static_cast<Index>(psi_.size()) != A_.blocks())
    throw InvalidArgument("problem: need one psi per block");
  for (Index i = 0; i < A_.blocks(); ++i)
    if (psi_[static_cast<std::size_t>(i)].dim() != A_.partition().size(i))
      throw InvalidArgument("problem: psi dimension does not match block " + std::to_string(i));
  if (pi_.size() == 0) pi_ = Vector::Zero(A_.rows());
  if (pi_.size() != A_.rows()) throw InvalidArgument("problem: pi length does not match rows");
  if (norms_.partition() != A_.partition())
    throw InvalidArgument("problem: norm partition does not match matrix");

  omega_ = partial_separability_degree(A_);
  L_ = block_lipschitz_constants(A_, r_, norms_);
  zero_block_ = false;
  for (Index i = 0; i < A_.blocks(); ++i)
    if (A_.block(i).nonZeros() == 0) zero_block_ = true;

  effective_psi_.clear();
  effective_psi_.reserve(psi_.size());
  bool shifted = pi_.cwiseAbs().maxCoeff() != 0.0;
  for (Index i = 0; i < A_.blocks(); ++i) {
    const BlockPsi& base = psi_[static_cast<std::size_t>(i)];
    if (!shifted) {
      effective_psi_.push_back(base);
    } else {
      Vector shift = -(A_.block(i).transpose() * pi_);
      effective_psi_.push_back(base.with_linear_shift(shift));
    }
  }
}

const BlockPsi& CompositeProblem::psi(Index i) const {
  if (i < 0 || i >= blocks()) throw InvalidArgument("problem: block index out of range");
  return psi_[static_cast<std::size_t>(i)];
}

const BlockPsi& CompositeProblem::effective_psi(Index i) const {
  if (i < 0 || i >= blocks()) throw InvalidArgument("problem: block index out of range");
  return effective_psi_[static_cast<std::size_t>(i)];
}

double CompositeProblem::eval_f(const Vector& x) const {
  return 0.5 * r_ * residual(A_, x).squaredNorm();
}

Vector CompositeProblem::grad_f(const Vector& x) const {
  return -r_ * A_.multiply_transpose(residual(A_, x));
}

Vector CompositeProblem::grad_f_block(Index i, const Vector& rho) const {
  return -r_ * (A_.block(i).transpose() * rho);
}

double CompositeProblem::eval_psi(const Vector& x) const {
  if (x.size() != cols()) throw InvalidArgument("problem: x length does not match columns");
  double acc = 0.0;
  for (Index i = 0; i < blocks(); ++i) {
    double v = effective_psi_[static_cast<std::size_t>(i)].value(
        x.segment(partition().offset(i), partition().size(i)));
    if (std::isinf(v)) return v;
    acc += v;
  }
  return acc;
}

double CompositeProblem::eval_F(const Vector& x) const { return eval_f(x) + eval_psi(x); }

double CompositeProblem::feasibility_gap(const Vector& x) const {
  double btb = A_.b().squaredNorm();
  if (btb == 0.0) throw InvalidArgument("feasibility gap: b is zero, the ratio is undefined");
  return 0.5 * residual(A_, x).squaredNorm() / btb;
}

CompositeProblem CompositeProblem::multiplier_update(const Vector& z) const {
  Vector next = pi_ + r_ * residual(A_, z);
  return with_multipliers(std::move(next));
}

CompositeProblem CompositeProblem::with_multipliers(Vector pi) const {
  return CompositeProblem(A_, r_, psi_, std::move(pi), norms_);
}

CompositeProblem CompositeProblem::with_norms(BlockNorms norms) const {
  return CompositeProblem(A_, r_, psi_, pi_, std::move(norms));
}

namespace {

// Stacked per-coordinate quadratic curvature of Psi (mu_i on LinearQuadratic
// blocks, 0 elsewhere) and the stacked effective linear coefficient.
void psi_quadratic_profile(const CompositeProblem& p, Vector& mu_diag, Vector& c_stacked) {
  const BlockPartition& part = p.partition();
  mu_diag = Vector::Zero(part.total());
  c_stacked = Vector::Zero(part.total());
  for (Index i = 0; i < part.blocks(); ++i) {
    const BlockPsi& psi = p.effective_psi(i);
    auto seg_mu = mu_diag.segment(part.offset(i), part.size(i));
    auto seg_c = c_stacked.segment(part.offset(i), part.size(i));
    seg_c = psi.c();
    if (psi.kind() == BlockPsi::Kind::LinearQuadratic) seg_mu.setConstant(psi.mu());
  }
}

SparseMatrix smooth_hessian(const CompositeProblem& p, bool add_psi_curvature) {
  SparseMatrix A = p.matrix().assemble();
  SparseMatrix H = (p.r() * (SparseMatrix(A.transpose()) * A)).pruned();
  if (add_psi_curvature) {
    Vector mu_diag, c;
    psi_quadratic_profile(p, mu_diag, c);
    SparseMatrix D(p.cols(), p.cols());
    std::vector<Triplet> ts;
    for (Index j = 0; j < p.cols(); ++j)
      if (mu_diag[j] != 0.0) ts.emplace_back(j, j, mu_diag[j]);
    D.setFromTriplets(ts.begin(), ts.end());
    H = H + D;
  }
  H.makeCompressed();
  return H;
}

// Weight matrix blockdiag(w_i B_i).
SparseMatrix weight_matrix(const CompositeProblem& p, const Vector& w) {
  const BlockPartition& part = p.partition();
  std::vector<Triplet> ts;
  for (Index i = 0; i < part.blocks(); ++i) {
    Index off = part.offset(i), k = part.size(i);
    if (p.norms().identity_B()) {
      for (Index j = 0; j < k; ++j) ts.emplace_back(off + j, off + j, w[i]);
    } else {
      const Matrix& B = p.norms().B(i);
      for (Index a = 0; a < k; ++a)
        for (Index b = 0; b < k; ++b)
          if (B(a, b) != 0.0) ts.emplace_back(off + a, off + b, w[i] * B(a, b));
    }
  }
  SparseMatrix W(part.total(), part.total());
  W.setFromTriplets(ts.begin(), ts.end());
  W.makeCompressed();
  return W;
}

// Smallest generalized eigenvalue of (M, W), W positive definite, by inverse
// power iteration on the shifted pencil (M + sigma W, W): exact for any
// sigma > 0, and the shift keeps the factorization nonsingular when the
// smallest eigenvalue is 0.
double smallest_generalized_eigenvalue(const SparseMatrix& M, const SparseMatrix& W) {
  const Index N = M.rows();
  Eigen::SimplicialLDLT<SparseMatrix> Wfact(W);
  if (Wfact.info() != Eigen::Success)
    throw NumericError("strong convexity: weight matrix factorization failed");

  // Scale estimate: dominant generalized eigenvalue, coarse tolerance.
  Vector v = Vector::Ones(N);
  v /= std::sqrt(v.dot(W * v));
  double lambda_max = 0.0;
  for (Index it = 0; it < std::min<Index>(10 * N, 200); ++it) {
    Vector mv = M * v;
    double prev = lambda_max;
    lambda_max = v.dot(mv);
    Vector u = Wfact.solve(mv);
    double nu = std::sqrt(u.dot(W * u));
    if (nu == 0.0) break;
    v = u / nu;
    if (it > 0 && std::abs(lambda_max - prev) <= 1e-6 * std::max(std::abs(lambda_max), 1e-30)) break;
  }
  if (lambda_max <= 0.0) lambda_max = 1.0;

  double sigma = 1e-8 * lambda_max;
  SparseMatrix shifted = M + sigma * W;
  shifted.makeCompressed();
  Eigen::SimplicialLDLT<SparseMatrix> fact(shifted);
  if (fact.info() != Eigen::Success)
    throw NumericError("strong convexity: shifted matrix factorization failed");

  // Block inverse iteration: a small subspace keeps converging where a
  // clustered bottom of the spectrum stalls a single vector.
  const Index s = std::min<Index>(4, N);
  Matrix V = Matrix::Zero(N, s);
  V.col(0).setOnes();
  for (Index j = 1; j < s; ++j) V(j - 1, j) = 1.0;

  auto w_orthonormalize = [&](Matrix& U) {
    for (Index j = 0; j < U.cols(); ++j) {
      for (int pass = 0; pass < 2; ++pass)
        for (Index k = 0; k < j; ++k) U.col(j) -= U.col(k).dot(W * U.col(j)) * U.col(k);
      double nrm = std::sqrt(U.col(j).dot(W * U.col(j)));
      if (nrm <= 1e-300) {
        U.col(j).setZero();
        U((j * 13) % N, j) = 1.0;
        for (Index k = 0; k < j; ++k) U.col(j) -= U.col(k).dot(W * U.col(j)) * U.col(k);
        nrm = std::sqrt(U.col(j).dot(W * U.col(j)));
        if (nrm <= 1e-300) throw NumericError("strong convexity: iteration subspace collapsed");
      }
      U.col(j) /= nrm;
    }
  };

  double theta = std::numeric_limits<double>::infinity();
  bool certified = false;
  for (Index sweep = 0; sweep < 1000 && !certified; ++sweep) {
    if (sweep > 0) {
      Matrix WV = W * V;
      for (Index j = 0; j < s; ++j) V.col(j) = fact.solve(WV.col(j));
    }
    w_orthonormalize(V);
    Matrix Ms = V.transpose() * (M * V).eval();
    Ms = (0.5 * (Ms + Ms.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(Ms);
    if (es.info() != Eigen::Success)
      throw NumericError("strong convexity: projected eigen-decomposition failed");
    theta = es.eigenvalues()(0);
    Vector ritz = V * es.eigenvectors().col(0);
    // |theta - lambda| is bounded by the residual in the W-inverse norm.
    Vector resid = M * ritz - theta * (W * ritz);
    double err = std::sqrt(std::max(0.0, resid.dot(Wfact.solve(resid))));
    certified = err <= std::max(1e-12 * lambda_max, 1e-11 * std::abs(theta));
    V = (V * es.eigenvectors()).eval();
  }
  if (!certified)
    throw NumericError("strong convexity: eigen-iteration did not certify the smallest eigenvalue");
  return std::max(theta, 0.0);
}

}  // namespace

StrongConvexityInfo CompositeProblem::strong_convexity_constants(const Vector& w) const {
  if (w.size() != blocks()) throw InvalidArgument("strong convexity: one weight per block required");
  if ((w.array() <= 0.0).any()) throw InvalidArgument("strong convexity: weights must be positive");

  SparseMatrix W = weight_matrix(*this, w);
  SparseMatrix Hf = smooth_hessian(*this, false);
  SparseMatrix HF = smooth_hessian(*this, true);

  StrongConvexityInfo info;
  info.w = w;
  info.mu_f = smallest_generalized_eigenvalue(Hf, W);
  info.mu_F = smallest_generalized_eigenvalue(HF, W);
  double mu_psi = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < blocks(); ++i) {
    const BlockPsi& psi = effective_psi_[static_cast<std::size_t>(i)];
    double mu_i = psi.kind() == BlockPsi::Kind::LinearQuadratic ? psi.mu() : 0.0;
    mu_psi = std::min(mu_psi, mu_i / (w[i] * norms_.lambda_max_B(i)));
  }
  info.mu_psi = mu_psi;
  return info;
}

ReferenceOptimum CompositeProblem::reference_optimum() const {
  bool any_box = false;
  for (const BlockPsi& psi : psi_)
    if (psi.has_box()) any_box = true;

  if (!any_box) {
    SparseMatrix H = smooth_hessian(*this, true);
    Vector mu_diag, c;
    psi_quadratic_profile(*this, mu_diag, c);
    Vector rhs = r_ * A_.multiply_transpose(A_.b()) - c;
    double rhs_scale = std::max(1.0, rhs.norm());

    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
    cg.compute(H);
    cg.setTolerance(1e-14);
    cg.setMaxIterations(20 * cols() + 200);
    Vector x = cg.solve(rhs);
    Index iters = static_cast<Index>(cg.iterations());
    // Iterative refinement until the stationarity residual is certified.
    double res_norm = (rhs - H * x).norm();
    for (int round = 0; round < 8 && !(res_norm <= 1e-12 * rhs_scale); ++round) {
      Vector corr = cg.solve(rhs - H * x);
      iters += static_cast<Index>(cg.iterations());
      x += corr;
      res_norm = (rhs - H * x).norm();
    }
    if (!(res_norm <= 1e-12 * rhs_scale))
      throw NumericError("reference optimum not certified: conjugate gradient residual " +
                         format_scalar(res_norm) + " exceeds tolerance");
    ReferenceOptimum opt;
    opt.x = std::move(x);
    opt.f_star = eval_f(opt.x);
    opt.F_star = eval_F(opt.x);
    opt.certificate = res_norm;
    opt.iterations = iters;
    return opt;
  }

  // Box path: fully parallel block-prox iteration with beta = omega, w = L.
  if (!norms_.identity_B())
    throw InvalidArgument("reference optimum: box kinds require identity block norms");
  if (zero_block_)
    throw NumericError("reference optimum: zero block has no positive Lipschitz constant");
  const BlockPartition& part = partition();
  Vector x(part.total());
  for (Index i = 0; i < blocks(); ++i)
    x.segment(part.offset(i), part.size(i)) = effective_psi(i).project(Vector::Zero(part.size(i)));

  // Certificate: the unit-step prox-gradient mapping vanishes at a minimizer.
  auto prox_certificate = [&](const Vector& point) {
    Vector g = grad_f(point);
    Vector mapped(part.total());
    for (Index i = 0; i < blocks(); ++i) {
      auto pi = point.segment(part.offset(i), part.size(i));
      auto gi = g.segment(part.offset(i), part.size(i));
      mapped.segment(part.offset(i), part.size(i)) = effective_psi(i).prox(pi - gi, 1.0);
    }
    return (point - mapped).norm();
  };

  Index iters = 0;
  const Index cap = 2'000'000;
  double cert = prox_certificate(x);
  while (cert >= 1e-10 && iters < cap) {
    Vector rho = residual(A_, x);
    Vector next(part.total());
    for (Index i = 0; i < blocks(); ++i) {
      double d = static_cast<double>(omega_) * L_[i];
      Vector g = grad_f_block(i, rho);
      auto xi = x.segment(part.offset(i), part.size(i));
      next.segment(part.offset(i), part.size(i)) = effective_psi(i).prox(xi - g / d, d);
    }
    const bool frozen = (next - x).norm() == 0.0;
    x.swap(next);
    ++iters;
    // Re-certify periodically; a frozen iterate cannot improve further.
    if (frozen || iters % 16 == 0 || iters == cap) cert = prox_certificate(x);
    if (frozen) break;
  }
  if (!(cert < 1e-10))
    throw NumericError("reference optimum not certified: prox-gradient norm " + format_scalar(cert));
  ReferenceOptimum opt;
  opt.x = std::move(x);
  opt.f_star = eval_f(opt.x);
  opt.F_star = eval_F(opt.x);
  opt.certificate = cert;
  opt.iterations = iters;
  return opt;
}

}  // namespace aldecomp
