#include "aldecomp/solvers.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <Eigen/Cholesky>

#include "aldecomp/errors.hpp"

namespace aldecomp {

namespace {

void parallel_blocks(int threads, Index count, const std::function<void(Index)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (Index t = 0; t < count; ++t) fn(t);
    return;
  }
  const int workers = static_cast<int>(std::min<Index>(threads, count));
  std::atomic<Index> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (Index t = next.fetch_add(1); t < count; t = next.fetch_add(1)) {
        try {
          fn(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// A box kind with every bound infinite is effectively linear; only finitely
// bounded boxes need the constrained solver.
bool needs_box_solver(const BlockPsi& psi) {
  if (psi.kind() != BlockPsi::Kind::LinearBox) return false;
  return psi.lo().array().isFinite().any() || psi.hi().array().isFinite().any();
}

// Block subproblem min_h <g, h> + (1/2) h^T Q h + Psi(x + h) where Psi carries
// the per-block linear shift already.  Two shapes of Q: a scalar multiple of
// the identity (prox closed forms apply) or a dense SPD matrix.
struct BlockModel {
  double d = 0.0;  // > 0: Q = d * I
  Matrix Q;        // used when d == 0
  Eigen::LLT<Matrix> smooth_factor;  // LLT of Q + mu I, smooth kinds only
  bool factored = false;
};

// Box-constrained quadratic in u = x + h:
//   min (1/2)(u - x)^T Q (u - x) + g^T (u - x) + c^T u,  lo <= u <= hi
// by cyclic coordinate descent with an incremental gradient.  PSD Q with a
// zero diagonal entry has a zero row, so that coordinate is linear and is
// pushed to the bound its slope favors.
Vector solve_box_qp(const Matrix& Q, const Vector& g, const Vector& c, const Vector& x,
                    const Vector& lo, const Vector& hi) {
  const Index n = x.size();
  Vector u(n);
  for (Index j = 0; j < n; ++j) u[j] = std::min(std::max(x[j], lo[j]), hi[j]);
  Vector grad = g + c + Q * (u - x);
  const Index max_sweeps = 10000;
  for (Index sweep = 0; sweep < max_sweeps; ++sweep) {
    double shift = 0.0;
    double scale = 1.0;
    for (Index j = 0; j < n; ++j) {
      const double qjj = Q(j, j);
      double target;
      if (qjj > 0.0) {
        target = u[j] - grad[j] / qjj;
      } else if (grad[j] > 0.0) {
        target = lo[j];
      } else if (grad[j] < 0.0) {
        target = hi[j];
      } else {
        target = u[j];
      }
      target = std::min(std::max(target, lo[j]), hi[j]);
      const double delta = target - u[j];
      if (delta != 0.0) {
        u[j] = target;
        grad += Q.col(j) * delta;
        shift = std::max(shift, std::abs(delta));
      }
      scale = std::max(scale, std::abs(u[j]));
    }
    if (shift <= 1e-12 * scale) return u;
  }
  throw NumericError("box subproblem coordinate descent did not converge in 10000 sweeps");
}

// h minimizing the block model against psi (psi already shifted).
Vector solve_block(const BlockModel& model, const BlockPsi& psi, const Vector& g,
                   const Eigen::Ref<const Vector>& x) {
  if (model.d > 0.0) {
    // Q = d I: the prox of Psi at x - g/d with weight d is the exact minimizer
    // for every supported kind.
    return psi.prox(x - g / model.d, model.d) - x;
  }
  if (needs_box_solver(psi)) {
    const Vector u = solve_box_qp(model.Q, g, psi.c(), x, psi.lo(), psi.hi());
    return u - x;
  }
  // Smooth kinds: (Q + mu I) h = -(g + c + mu x).
  const double mu = psi.kind() == BlockPsi::Kind::LinearQuadratic ? psi.mu() : 0.0;
  Vector rhs = -(g + psi.c() + mu * x);
  if (model.factored) return model.smooth_factor.solve(rhs);
  Matrix sys = model.Q;
  sys.diagonal().array() += mu;
  Eigen::LLT<Matrix> llt(sys);
  if (llt.info() != Eigen::Success)
    throw NumericError("block system is not positive definite; the model cannot be solved");
  return llt.solve(rhs);
}

BlockModel make_gram_model(const CompositeProblem& p, Index i) {
  BlockModel model;
  const SparseMatrix& Ai = p.matrix().block(i);
  model.Q = p.r() * (Matrix(Ai.transpose() * Ai));
  const BlockPsi& psi = p.effective_psi(i);
  if (!needs_box_solver(psi)) {
    const double mu = psi.kind() == BlockPsi::Kind::LinearQuadratic ? psi.mu() : 0.0;
    Matrix sys = model.Q;
    sys.diagonal().array() += mu;
    model.smooth_factor.compute(sys);
    if (model.smooth_factor.info() != Eigen::Success)
      throw NumericError("block quadratic model is singular; block " + std::to_string(i) +
                         " needs a positive definite system (add curvature or custom norms)");
    model.factored = true;
  }
  return model;
}

BlockModel make_scaled_norm_model(const CompositeProblem& p, Index i, double scale) {
  BlockModel model;
  if (scale <= 0.0)
    throw NumericError("nonpositive block scale; a zero block has no usable model");
  if (p.norms().identity_B()) {
    model.d = scale;
    return model;
  }
  model.Q = scale * p.norms().B(i);
  const BlockPsi& psi = p.effective_psi(i);
  if (needs_box_solver(psi))
    throw InvalidArgument(
        "box blocks combined with non-identity block norms are not supported by this update");
  const double mu = psi.kind() == BlockPsi::Kind::LinearQuadratic ? psi.mu() : 0.0;
  Matrix sys = model.Q;
  sys.diagonal().array() += mu;
  model.smooth_factor.compute(sys);
  if (model.smooth_factor.info() != Eigen::Success)
    throw NumericError("scaled-norm block model is not positive definite");
  model.factored = true;
  return model;
}

double default_theta(Index omega) {
  return omega >= 2 ? 1.0 / (2.0 * static_cast<double>(omega - 1)) : 1.0;
}

Index ceil_div(Index a, Index b) { return (a + b - 1) / b; }

struct Engine {
  const CompositeProblem& p;
  SolverConfig cfg;
  std::vector<BlockModel> models;
  bool dqam_family = false;  // applies x + theta h instead of x + h
  double theta = 1.0;
  std::optional<TauNiceSampler> sampler;
  double btb = 0.0;

  Engine(const CompositeProblem& problem, const SolverConfig& config)
      : p(problem), cfg(config) {
    if (p.has_zero_block())
      throw InvalidArgument("problem has an all-zero block; solvers require L_i > 0 for every block");
    const Index n = p.blocks();
    for (Index i = 0; i < n; ++i) {
      if (p.partition().size(i) > cfg.block_size_cap)
        throw InvalidArgument("block " + std::to_string(i) + " has size " +
                              std::to_string(p.partition().size(i)) +
                              " above the dense-model cap " + std::to_string(cfg.block_size_cap));
    }
    if (cfg.max_iters < 0) throw InvalidArgument("max_iters must be nonnegative");
    if (cfg.processors < 1) throw InvalidArgument("processors must be at least 1");
    if (cfg.record_every < 1) throw InvalidArgument("record_every must be at least 1");
    if (cfg.residual_refresh_every < 1)
      throw InvalidArgument("residual_refresh_every must be at least 1");
    if (cfg.stop == StopRule::OptimalityGap && !std::isfinite(cfg.F_star))
      throw InvalidArgument("OptimalityGap stopping needs a finite F_star");
    if (cfg.stop != StopRule::IterationsOnly && !(cfg.eps > 0.0))
      throw InvalidArgument("stopping tolerance eps must be positive");

    const Index omega = p.omega();
    const auto& L = p.lipschitz_constants();
    models.resize(n);
    switch (cfg.algorithm) {
      case Algorithm::Dqam:
      case Algorithm::DqamFd:
        dqam_family = true;
        for (Index i = 0; i < n; ++i) models[i] = make_gram_model(p, i);
        break;
      case Algorithm::DqamSqa:
        dqam_family = true;
        for (Index i = 0; i < n; ++i) {
          models[i] = cfg.sqa_model == SqaModel::BlockHessian
                          ? make_gram_model(p, i)
                          : make_scaled_norm_model(p, i, L[i]);
        }
        break;
      case Algorithm::Pcdm: {
        const EsoParams params = eso_params(p, cfg.tau);
        for (Index i = 0; i < n; ++i)
          models[i] = make_scaled_norm_model(p, i, params.beta * params.w[i]);
        sampler.emplace(n, cfg.tau, cfg.seed);
        break;
      }
      case Algorithm::PcdmFull:
        for (Index i = 0; i < n; ++i)
          models[i] = make_scaled_norm_model(p, i, static_cast<double>(omega) * L[i]);
        break;
      case Algorithm::MethodOfMultipliers:
        throw InvalidArgument(
            "the multiplier method is an outer loop; call method_of_multipliers()");
    }

    if (dqam_family) {
      theta = cfg.theta > 0.0 ? cfg.theta : default_theta(omega);
      if (!(theta > 0.0) || !std::isfinite(theta))
        throw InvalidArgument("step size theta must be positive and finite");
    }
    btb = p.matrix().b().squaredNorm();
    if (cfg.stop == StopRule::FeasibilityRatio && btb == 0.0)
      throw InvalidArgument("feasibility-ratio stopping is undefined for b = 0");
  }

  double theta_guarantee_bound() const {
    const Index omega = p.omega();
    if (cfg.algorithm == Algorithm::DqamSqa && cfg.sqa_model == SqaModel::LipschitzScaledNorm)
      return 1.0 / static_cast<double>(omega);
    return default_theta(omega);
  }

  IterationTrace solve() {
    const auto t0 = std::chrono::steady_clock::now();
    IterationTrace trace;
    const Index n = p.blocks();

    if (dqam_family && theta > theta_guarantee_bound() + 1e-15) {
      std::ostringstream msg;
      msg << "theta = " << theta << " exceeds the analyzed range (<= " << theta_guarantee_bound()
          << "); descent is no longer guaranteed";
      trace.warnings.push_back(msg.str());
    }

    Vector x = cfg.x0 ? *cfg.x0 : Vector::Zero(p.cols());
    if (x.size() != p.cols())
      throw InvalidArgument("x0 has size " + std::to_string(x.size()) + ", expected " +
                            std::to_string(p.cols()));

    Vector rho = residual(p.matrix(), x);
    double F_cur = 0.5 * p.r() * rho.squaredNorm() + p.eval_psi(x);
    std::vector<Vector> steps(n);
    std::vector<Index> all_blocks(n);
    for (Index i = 0; i < n; ++i) all_blocks[i] = i;

    auto wall_ms = [&] {
      return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
    };
    auto record = [&](Index k) {
      TraceRow row;
      row.k = k;
      row.f = 0.5 * p.r() * rho.squaredNorm();
      row.F = row.f + p.eval_psi(x);
      row.gap = btb > 0.0 ? row.f / (p.r() * btb) : std::numeric_limits<double>::quiet_NaN();
      row.blocks = k == 0 ? 0 : (sampler ? cfg.tau : n);
      row.epochs = trace.epochs;
      row.time_units = trace.time_units;
      row.wall_ms = wall_ms();
      trace.rows.push_back(row);
    };

    record(0);
    bool stopped = false;
    Index k = 0;
    for (; k < cfg.max_iters && !stopped; ++k) {
      const std::vector<Index>& active = sampler ? sampler->draw() : all_blocks;
      const Index updated = static_cast<Index>(active.size());

      parallel_blocks(cfg.threads, updated, [&](Index t) {
        const Index i = active[t];
        const Vector g = p.grad_f_block(i, rho);
        steps[i] =
            solve_block(models[i], p.effective_psi(i), g, x.segment(p.partition().offset(i),
                                                                    p.partition().size(i)));
      });

      // Apply in ascending block order so the residual update is independent
      // of the thread schedule.
      const double step_scale = dqam_family ? theta : 1.0;
      for (Index t = 0; t < updated; ++t) {
        const Index i = active[t];
        const Vector delta = step_scale * steps[i];
        x.segment(p.partition().offset(i), p.partition().size(i)) += delta;
        rho -= p.matrix().block(i) * delta;
      }
      if ((k + 1) % cfg.residual_refresh_every == 0) rho = residual(p.matrix(), x);

      trace.epochs += static_cast<double>(updated) / static_cast<double>(n);
      trace.time_units += ceil_div(updated, cfg.processors);

      const double f_val = 0.5 * p.r() * rho.squaredNorm();
      const double F_next = f_val + p.eval_psi(x);
      if (!sampler && std::isfinite(F_cur) && F_next - F_cur > 1e-6 * std::max(1.0, std::abs(F_cur))) {
        std::ostringstream msg;
        msg << "objective increased at iteration " << (k + 1) << " (F " << F_cur << " -> "
            << F_next << "); the step size is outside the stable range";
        throw NumericError(msg.str());
      }
      F_cur = F_next;

      switch (cfg.stop) {
        case StopRule::IterationsOnly:
          break;
        case StopRule::FeasibilityRatio:
          if (f_val / (p.r() * btb) <= cfg.eps) {
            stopped = true;
            trace.stop_reason = "feasibility ratio reached";
          }
          break;
        case StopRule::OptimalityGap:
          if (F_next - cfg.F_star <= cfg.eps) {
            stopped = true;
            trace.stop_reason = "optimality gap reached";
          }
          break;
        case StopRule::Stationarity:
          if (stationarity_measure(p, x) <= cfg.eps) {
            stopped = true;
            trace.stop_reason = "stationarity reached";
          }
          break;
      }

      if ((k + 1) % cfg.record_every == 0 || stopped || k + 1 == cfg.max_iters) record(k + 1);
    }

    trace.x = std::move(x);
    trace.F = F_cur;
    trace.iterations = k;
    trace.stop_satisfied = stopped;
    if (!stopped)
      trace.stop_reason = cfg.stop == StopRule::IterationsOnly ? "iteration budget"
                                                               : "iteration budget (tolerance not met)";
    return trace;
  }
};

}  // namespace

void IterationTrace::write_csv(std::ostream& out) const {
  out << "k,F,f,gap,blocks,epochs,time_units,wall_ms\n";
  char wall[64];
  for (const TraceRow& row : rows) {
    std::snprintf(wall, sizeof wall, "%.3f", row.wall_ms);
    out << row.k << ',' << format_scalar(row.F) << ',' << format_scalar(row.f) << ','
        << format_scalar(row.gap) << ',' << row.blocks << ',' << format_scalar(row.epochs) << ','
        << row.time_units << ',' << wall << '\n';
  }
}

IterationTrace run(const CompositeProblem& p, const SolverConfig& config) {
  if (config.algorithm == Algorithm::DqamFd)
    throw InvalidArgument(
        "run() drives matrix-backed models; apply dqam_fd_step directly for oracle problems");
  Engine engine(p, config);
  return engine.solve();
}

Vector dqam_step(const CompositeProblem& p, const Vector& x, double theta) {
  if (p.has_zero_block())
    throw InvalidArgument("problem has an all-zero block; solvers require L_i > 0 for every block");
  if (x.size() != p.cols()) throw InvalidArgument("x has the wrong size");
  if (!(theta > 0.0)) throw InvalidArgument("theta must be positive");
  const Vector rho = residual(p.matrix(), x);
  Vector next = x;
  for (Index i = 0; i < p.blocks(); ++i) {
    const BlockModel model = make_gram_model(p, i);
    const Vector g = p.grad_f_block(i, rho);
    const Vector h = solve_block(model, p.effective_psi(i), g,
                                 x.segment(p.partition().offset(i), p.partition().size(i)));
    next.segment(p.partition().offset(i), p.partition().size(i)) += theta * h;
  }
  return next;
}

SmoothOracle quadratic_oracle(const CompositeProblem& p) {
  SmoothOracle oracle;
  oracle.value = [&p](const Vector& x) { return p.eval_f(x); };
  oracle.grad = [&p](const Vector& x) { return p.grad_f(x); };
  return oracle;
}

namespace {

// Restricted gradient of f at x + U_i h, as a function of h.
Vector restricted_grad(const SmoothOracle& f, const BlockPartition& part, Index i,
                       const Vector& x, const Vector& h) {
  Vector point = x;
  point.segment(part.offset(i), part.size(i)) += h;
  const Vector full = f.grad(point);
  return full.segment(part.offset(i), part.size(i));
}

Matrix fd_restricted_hessian(const SmoothOracle& f, const BlockPartition& part, Index i,
                             const Vector& x, const Vector& h) {
  const Index ni = part.size(i);
  Matrix H(ni, ni);
  for (Index j = 0; j < ni; ++j) {
    const double base = std::abs(x[part.offset(i) + j] + h[j]);
    const double eps = 1e-5 * std::max(1.0, base);
    Vector hp = h, hm = h;
    hp[j] += eps;
    hm[j] -= eps;
    H.col(j) = (restricted_grad(f, part, i, x, hp) - restricted_grad(f, part, i, x, hm)) /
               (2.0 * eps);
  }
  return Matrix(0.5 * (H + H.transpose()));
}

}  // namespace

Vector dqam_fd_step(const SmoothOracle& f, const BlockPartition& partition,
                    const std::vector<BlockPsi>& psi, const Vector& x, double theta) {
  if (static_cast<Index>(psi.size()) != partition.blocks())
    throw InvalidArgument("psi count does not match the partition");
  if (x.size() != partition.total()) throw InvalidArgument("x has the wrong size");
  if (!(theta > 0.0)) throw InvalidArgument("theta must be positive");

  Vector next = x;
  for (Index i = 0; i < partition.blocks(); ++i) {
    const Index ni = partition.size(i);
    const auto xi = x.segment(partition.offset(i), ni);
    Vector h = Vector::Zero(ni);

    if (needs_box_solver(psi[i])) {
      // Quadratic model from finite differences, then the same box solver the
      // exact method uses.
      const Matrix H = fd_restricted_hessian(f, partition, i, x, h);
      const Vector g = restricted_grad(f, partition, i, x, h);
      const Vector u = solve_box_qp(H, g, psi[i].c(), xi, psi[i].lo(), psi[i].hi());
      h = u - xi;
    } else {
      const double mu = psi[i].kind() == BlockPsi::Kind::LinearQuadratic ? psi[i].mu() : 0.0;
      auto phi = [&](const Vector& hh) {
        Vector point = x;
        point.segment(partition.offset(i), ni) += hh;
        double val = f.value(point) + psi[i].c().dot(xi + hh);
        if (mu > 0.0) val += 0.5 * mu * (xi + hh).squaredNorm();
        return val;
      };
      auto grad_phi = [&](const Vector& hh) {
        Vector g = restricted_grad(f, partition, i, x, hh);
        g += psi[i].c();
        if (mu > 0.0) g += mu * (xi + hh);
        return Vector(g);
      };

      Vector g = grad_phi(h);
      const double scale = std::max(1.0, g.norm());
      int iter = 0;
      while (g.norm() > 1e-10 * scale) {
        if (++iter > 50)
          throw NumericError("derivative-only block solve did not reach stationarity in 50 steps");
        Matrix H = fd_restricted_hessian(f, partition, i, x, h);
        H.diagonal().array() += mu;
        Eigen::LDLT<Matrix> ldlt(H);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
          throw NumericError("finite-difference block model is not positive definite");
        const Vector dir = ldlt.solve(-g);
        const double slope = g.dot(dir);
        double t = 1.0;
        const double phi0 = phi(h);
        while (phi(h + t * dir) > phi0 + 1e-4 * t * slope) {
          t *= 0.5;
          if (t < 1e-12)
            throw NumericError("derivative-only block solve: line search failed");
        }
        h += t * dir;
        g = grad_phi(h);
      }
    }
    next.segment(partition.offset(i), ni) += theta * h;
  }
  return next;
}

Vector dqam_sqa_step(const CompositeProblem& p, const Vector& x, double theta,
                     const std::vector<Matrix>& C) {
  if (x.size() != p.cols()) throw InvalidArgument("x has the wrong size");
  if (!(theta > 0.0)) throw InvalidArgument("theta must be positive");
  if (static_cast<Index>(C.size()) != p.blocks())
    throw InvalidArgument("expected one model matrix per block");

  const Vector rho = residual(p.matrix(), x);
  Vector next = x;
  for (Index i = 0; i < p.blocks(); ++i) {
    const Index ni = p.partition().size(i);
    if (C[i].rows() != ni || C[i].cols() != ni)
      throw InvalidArgument("model matrix " + std::to_string(i) + " has the wrong dimensions");
    const double scale = std::max(1.0, C[i].cwiseAbs().maxCoeff());
    if ((C[i] - C[i].transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw InvalidArgument("model matrix " + std::to_string(i) + " is not symmetric");
    BlockModel model;
    model.Q = C[i];
    const BlockPsi& psi = p.effective_psi(i);
    if (!needs_box_solver(psi)) {
      const double mu = psi.kind() == BlockPsi::Kind::LinearQuadratic ? psi.mu() : 0.0;
      Matrix sys = C[i];
      sys.diagonal().array() += mu;
      model.smooth_factor.compute(sys);
      if (model.smooth_factor.info() != Eigen::Success)
        throw InvalidArgument("model matrix " + std::to_string(i) + " is not positive definite");
      model.factored = true;
    } else {
      Eigen::LLT<Matrix> check(C[i]);
      if (check.info() != Eigen::Success)
        throw InvalidArgument("model matrix " + std::to_string(i) + " is not positive definite");
    }
    const Vector g = p.grad_f_block(i, rho);
    const Vector h =
        solve_block(model, psi, g, x.segment(p.partition().offset(i), ni));
    next.segment(p.partition().offset(i), ni) += theta * h;
  }
  return next;
}

Vector pcdm_step(const CompositeProblem& p, const Vector& x, const EsoParams& params,
                 const std::vector<Index>& S) {
  if (p.has_zero_block())
    throw InvalidArgument("problem has an all-zero block; solvers require L_i > 0 for every block");
  if (x.size() != p.cols()) throw InvalidArgument("x has the wrong size");
  if (static_cast<Index>(params.w.size()) != p.blocks())
    throw InvalidArgument("weight vector does not match the block count");
  if (S.empty()) throw InvalidArgument("the update set must contain at least one block");
  std::unordered_set<Index> seen;
  for (Index i : S) {
    if (i < 0 || i >= p.blocks()) throw InvalidArgument("block index out of range in the sample");
    if (!seen.insert(i).second) throw InvalidArgument("repeated block index in the sample");
  }

  const Vector rho = residual(p.matrix(), x);
  Vector next = x;
  for (Index i : S) {
    const BlockModel model = make_scaled_norm_model(p, i, params.beta * params.w[i]);
    const Vector g = p.grad_f_block(i, rho);
    const Vector h = solve_block(model, p.effective_psi(i), g,
                                 x.segment(p.partition().offset(i), p.partition().size(i)));
    next.segment(p.partition().offset(i), p.partition().size(i)) += h;
  }
  return next;
}

Vector pcdm_full_step(const CompositeProblem& p, const Vector& x) {
  EsoParams params;
  params.beta = static_cast<double>(p.omega());
  params.w = p.lipschitz_constants();
  params.tau = p.blocks();
  params.n = p.blocks();
  std::vector<Index> all(p.blocks());
  for (Index i = 0; i < p.blocks(); ++i) all[i] = i;
  return pcdm_step(p, x, params, all);
}

double stationarity_measure(const CompositeProblem& p, const Vector& x) {
  if (x.size() != p.cols()) throw InvalidArgument("x has the wrong size");
  const Vector g = p.grad_f(x);
  double accum = 0.0;
  for (Index i = 0; i < p.blocks(); ++i) {
    const auto xi = x.segment(p.partition().offset(i), p.partition().size(i));
    const auto gi = g.segment(p.partition().offset(i), p.partition().size(i));
    const Vector mapped = p.effective_psi(i).prox(xi - gi, 1.0);
    accum += (xi - mapped).squaredNorm();
  }
  return std::sqrt(accum);
}

MomResult method_of_multipliers(const CompositeProblem& p, const SolverConfig& inner,
                                Index outer_iters, double inner_tol) {
  if (outer_iters < 1) throw InvalidArgument("outer_iters must be at least 1");
  if (!(inner_tol > 0.0)) throw InvalidArgument("inner_tol must be positive");
  if (inner.algorithm == Algorithm::MethodOfMultipliers)
    throw InvalidArgument("the inner algorithm must be a decomposition method, not the outer loop");

  MomResult result;
  CompositeProblem current = p;
  Vector warm = inner.x0 ? *inner.x0 : Vector::Zero(p.cols());

  for (Index k = 0; k < outer_iters; ++k) {
    SolverConfig cfg = inner;
    cfg.stop = StopRule::Stationarity;
    cfg.eps = inner_tol;
    cfg.x0 = warm;
    IterationTrace trace = run(current, cfg);
    if (!trace.stop_satisfied) {
      result.warnings.push_back("outer iteration " + std::to_string(k) +
                                ": inner solve stopped at the iteration budget before reaching "
                                "the requested stationarity");
    }
    for (const std::string& w : trace.warnings) result.warnings.push_back(w);

    MomOuter rec;
    rec.k = k;
    rec.pi = current.pi();
    rec.z = trace.x;
    rec.linking_residual = residual(current.matrix(), trace.x).norm();
    rec.F_inner = trace.F;
    rec.inner_iterations = trace.iterations;
    result.outer.push_back(std::move(rec));

    warm = trace.x;
    current = current.multiplier_update(trace.x);
  }

  result.z = result.outer.back().z;
  result.pi = current.pi();
  return result;
}

}  // namespace aldecomp
