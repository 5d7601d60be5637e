#include "aldecomp/cli_commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aldecomp/analysis.hpp"
#include "aldecomp/errors.hpp"
#include "aldecomp/eso.hpp"
#include "aldecomp/generators.hpp"
#include "aldecomp/problem.hpp"
#include "aldecomp/separability.hpp"
#include "aldecomp/solvers.hpp"

namespace aldecomp {

namespace {

Algorithm parse_algorithm(const std::string& name) {
  if (name == "mom") return Algorithm::MethodOfMultipliers;
  if (name == "dqam") return Algorithm::Dqam;
  if (name == "dqam-fd") return Algorithm::DqamFd;
  if (name == "dqam-sqa") return Algorithm::DqamSqa;
  if (name == "pcdm") return Algorithm::Pcdm;
  if (name == "pcdm-full") return Algorithm::PcdmFull;
  throw InvalidArgument("unknown algorithm '" + name + "'");
}

StopRule parse_stop(const std::string& name) {
  if (name == "iters") return StopRule::IterationsOnly;
  if (name == "feasibility") return StopRule::FeasibilityRatio;
  if (name == "gap") return StopRule::OptimalityGap;
  if (name == "stationarity") return StopRule::Stationarity;
  throw InvalidArgument("unknown stop rule '" + name + "'");
}

RhsMode parse_rhs(const std::string& name) {
  if (name == "feasible") return RhsMode::Feasible;
  if (name == "random") return RhsMode::RandomNormal;
  throw InvalidArgument("unknown rhs mode '" + name + "'");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

void write_vector_file(const std::string& path, const Vector& x) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (Index i = 0; i < x.size(); ++i) out << format_scalar(x[i]) << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

// Iteration driver for the derivative-only method, which run() does not
// host (it needs no matrix-backed block models).
IterationTrace drive_fd(const CompositeProblem& p, const SolverConfig& cfg) {
  const SmoothOracle oracle = quadratic_oracle(p);
  std::vector<BlockPsi> psi;
  psi.reserve(static_cast<std::size_t>(p.blocks()));
  for (Index i = 0; i < p.blocks(); ++i) psi.push_back(p.effective_psi(i));
  const Index omega = p.omega();
  const double theta =
      cfg.theta > 0.0 ? cfg.theta : (omega >= 2 ? 1.0 / (2.0 * static_cast<double>(omega - 1)) : 1.0);
  const double btb = p.matrix().b().squaredNorm();
  if (cfg.stop == StopRule::FeasibilityRatio && btb == 0.0)
    throw InvalidArgument("feasibility-ratio stopping is undefined for b = 0");
  if (cfg.stop == StopRule::OptimalityGap && !std::isfinite(cfg.F_star))
    throw InvalidArgument("OptimalityGap stopping needs a finite F_star");

  IterationTrace trace;
  Vector x = cfg.x0 ? *cfg.x0 : Vector::Zero(p.cols());
  double F_cur = p.eval_F(x);
  auto record = [&](Index k) {
    TraceRow row;
    row.k = k;
    row.f = p.eval_f(x);
    row.F = row.f + p.eval_psi(x);
    row.gap = btb > 0.0 ? row.f / (p.r() * btb) : std::numeric_limits<double>::quiet_NaN();
    row.blocks = k == 0 ? 0 : p.blocks();
    row.epochs = trace.epochs;
    row.time_units = trace.time_units;
    row.wall_ms = 0.0;
    trace.rows.push_back(row);
  };
  record(0);
  bool stopped = false;
  Index k = 0;
  for (; k < cfg.max_iters && !stopped; ++k) {
    x = dqam_fd_step(oracle, p.partition(), psi, x, theta);
    trace.epochs += 1.0;
    trace.time_units += (p.blocks() + cfg.processors - 1) / cfg.processors;
    const double F_next = p.eval_F(x);
    if (std::isfinite(F_cur) && F_next - F_cur > 1e-6 * std::max(1.0, std::abs(F_cur)))
      throw NumericError("objective increased; the step size is outside the stable range");
    F_cur = F_next;
    switch (cfg.stop) {
      case StopRule::IterationsOnly:
        break;
      case StopRule::FeasibilityRatio:
        if (p.feasibility_gap(x) <= cfg.eps) stopped = true;
        break;
      case StopRule::OptimalityGap:
        if (F_next - cfg.F_star <= cfg.eps) stopped = true;
        break;
      case StopRule::Stationarity:
        if (stationarity_measure(p, x) <= cfg.eps) stopped = true;
        break;
    }
    if ((k + 1) % cfg.record_every == 0 || stopped || k + 1 == cfg.max_iters) record(k + 1);
  }
  trace.x = std::move(x);
  trace.F = F_cur;
  trace.iterations = k;
  trace.stop_satisfied = stopped;
  trace.stop_reason = stopped ? "tolerance reached" : "iteration budget";
  return trace;
}

struct GenerateArgs {
  std::string family = "block-angular";
  std::string out;
  Index omega = 2;
  std::uint64_t seed = 0;
  bool full_scale = false;
  std::string rhs = "feasible";
  double r = 1.0;
  Index blocks = -1;
  Index block_cols = -1;
  Index c_rows = -1;
  Index linking_rows = -1;
  double c_density = -1.0;
  double d_density = -1.0;
  Index rows = -1;
  Index cols = -1;
};

void cmd_generate(const GenerateArgs& a) {
  std::optional<GeneratedProblem> gen;
  std::string sidecar;
  if (a.family == "block-angular") {
    BlockAngularSpec spec = a.full_scale ? BlockAngularSpec::full_scale() : BlockAngularSpec{};
    if (a.blocks >= 0) spec.blocks = a.blocks;
    if (a.block_cols >= 0) spec.block_cols = a.block_cols;
    if (a.c_rows >= 0) spec.c_rows = a.c_rows;
    if (a.linking_rows >= 0) spec.linking_rows = a.linking_rows;
    if (a.c_density >= 0.0) spec.c_density = a.c_density;
    if (a.d_density >= 0.0) spec.d_density = a.d_density;
    spec.omega = a.omega;
    spec.seed = a.seed;
    spec.rhs_mode = parse_rhs(a.rhs);
    spec.r = a.r;
    gen = generate_block_angular(spec);
    sidecar = sidecar_json(spec, *gen);
  } else {
    BoundedRowSpec spec;
    if (a.rows >= 0) spec.rows = a.rows;
    if (a.cols >= 0) spec.cols = a.cols;
    spec.omega = a.omega;
    spec.seed = a.seed;
    spec.rhs_mode = parse_rhs(a.rhs);
    spec.r = a.r;
    gen = generate_bounded_row(spec);
    sidecar = sidecar_json(spec, *gen);
  }
  write_problem_file(a.out, gen->problem);
  write_text_file(a.out + ".json", sidecar + "\n");
  std::cout << sidecar << "\n";
}

struct SolveArgs {
  std::string bundle;
  std::string algorithm = "pcdm-full";
  double theta = 0.0;
  Index tau = 1;
  std::uint64_t seed = 0;
  Index max_iters = 1000;
  std::string stop = "iters";
  double eps = 1e-4;
  double F_star = std::numeric_limits<double>::quiet_NaN();
  Index processors = 1;
  int threads = 1;
  Index record_every = 1;
  std::string trace_path;
  std::string solution_path;
  Index outer_iters = 10;
  double inner_tol = 1e-8;
  std::string inner_algorithm = "dqam";
};

void cmd_solve(const SolveArgs& a) {
  CompositeProblem p = read_problem_file(a.bundle);
  const Algorithm algorithm = parse_algorithm(a.algorithm);
  nlohmann::json out;
  out["algorithm"] = a.algorithm;

  if (algorithm == Algorithm::MethodOfMultipliers) {
    SolverConfig inner;
    inner.algorithm = parse_algorithm(a.inner_algorithm);
    if (inner.algorithm == Algorithm::MethodOfMultipliers ||
        inner.algorithm == Algorithm::DqamFd)
      throw InvalidArgument("inner algorithm must be dqam, dqam-sqa, pcdm, or pcdm-full");
    inner.theta = a.theta;
    inner.tau = a.tau;
    inner.seed = a.seed;
    inner.max_iters = a.max_iters;
    inner.processors = a.processors;
    inner.threads = a.threads;
    inner.record_every = a.record_every;
    MomResult res = method_of_multipliers(p, inner, a.outer_iters, a.inner_tol);
    nlohmann::json outer = nlohmann::json::array();
    for (const MomOuter& rec : res.outer) {
      outer.push_back({{"k", rec.k},
                       {"linking_residual", rec.linking_residual},
                       {"F_inner", rec.F_inner},
                       {"inner_iterations", rec.inner_iterations}});
    }
    out["outer"] = outer;
    out["warnings"] = res.warnings;
    if (!a.solution_path.empty()) write_vector_file(a.solution_path, res.z);
    std::cout << out.dump(2) << "\n";
    return;
  }

  SolverConfig cfg;
  cfg.algorithm = algorithm;
  cfg.theta = a.theta;
  cfg.tau = a.tau;
  cfg.seed = a.seed;
  cfg.max_iters = a.max_iters;
  cfg.stop = parse_stop(a.stop);
  cfg.eps = a.eps;
  cfg.F_star = a.F_star;
  cfg.processors = a.processors;
  cfg.threads = a.threads;
  cfg.record_every = a.record_every;
  if (cfg.algorithm == Algorithm::DqamSqa) cfg.sqa_model = SqaModel::BlockHessian;
  if (cfg.stop == StopRule::OptimalityGap && !std::isfinite(cfg.F_star))
    cfg.F_star = p.reference_optimum().F_star;

  IterationTrace trace =
      cfg.algorithm == Algorithm::DqamFd ? drive_fd(p, cfg) : run(p, cfg);

  out["iterations"] = trace.iterations;
  out["F"] = trace.F;
  out["epochs"] = trace.epochs;
  out["time_units"] = trace.time_units;
  out["stop_satisfied"] = trace.stop_satisfied;
  out["stop_reason"] = trace.stop_reason;
  out["warnings"] = trace.warnings;
  const double btb = p.matrix().b().squaredNorm();
  out["feasibility_gap"] =
      btb > 0.0 ? nlohmann::json(p.feasibility_gap(trace.x)) : nlohmann::json();
  if (!a.trace_path.empty()) {
    std::ofstream csv(a.trace_path);
    if (!csv) throw IoError("cannot open '" + a.trace_path + "' for writing");
    trace.write_csv(csv);
    if (!csv) throw IoError("failed writing '" + a.trace_path + "'");
  }
  if (!a.solution_path.empty()) write_vector_file(a.solution_path, trace.x);
  std::cout << out.dump(2) << "\n";
}

struct CompareArgs {
  std::string family = "block-angular";
  std::string out;
  std::vector<Index> omegas;
  std::vector<Index> taus;
  Index seeds = 5;
  std::uint64_t seed_base = 0;
  Index max_iters = 200000;
  double eps = 1e-4;
  Index processors = 1;
  int threads = 1;
  bool full_scale = false;
  double r = 1.0;
};

void cmd_compare(const CompareArgs& a) {
  std::vector<Index> omegas = a.omegas;
  std::vector<Index> taus = a.taus;
  std::ostringstream csv;
  csv << "family,omega,tau,algorithm,seed,epochs,time_units,wall_ms\n";

  auto run_arm = [&](const CompositeProblem& p, const char* name, const SolverConfig& cfg,
                     Index omega, Index tau, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    IterationTrace trace = run(p, cfg);
    const double wall =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!trace.stop_satisfied)
      std::cerr << "warning: " << a.family << " omega=" << omega << " " << name << " seed=" << seed
                << " hit the iteration budget before the feasibility target\n";
    char wall_txt[64];
    std::snprintf(wall_txt, sizeof wall_txt, "%.3f", wall);
    csv << a.family << ',' << omega << ',' << tau << ',' << name << ',' << seed << ','
        << format_scalar(trace.epochs) << ',' << trace.time_units << ',' << wall_txt << '\n';
  };

  auto base_config = [&](Algorithm algorithm) {
    SolverConfig cfg;
    cfg.algorithm = algorithm;
    cfg.max_iters = a.max_iters;
    cfg.stop = StopRule::FeasibilityRatio;
    cfg.eps = a.eps;
    cfg.processors = a.processors;
    cfg.threads = a.threads;
    cfg.record_every = a.max_iters;  // only endpoints matter here
    return cfg;
  };

  if (a.family == "block-angular") {
    if (omegas.empty()) omegas = {2, 4, 8};
    for (Index omega : omegas) {
      if (omega < 2)
        throw InvalidArgument("the step-size comparison needs omega >= 2 (theta = 1/(2(omega-1)))");
      for (Index s = 0; s < a.seeds; ++s) {
        BlockAngularSpec spec = a.full_scale ? BlockAngularSpec::full_scale() : BlockAngularSpec{};
        spec.omega = omega;
        spec.seed = a.seed_base + static_cast<std::uint64_t>(s);
        spec.r = a.r;
        const GeneratedProblem gen = generate_block_angular(spec);
        const Index n = gen.problem.blocks();

        SolverConfig dqam = base_config(Algorithm::DqamSqa);
        dqam.sqa_model = SqaModel::LipschitzScaledNorm;
        dqam.theta = 1.0 / (2.0 * static_cast<double>(omega - 1));
        run_arm(gen.problem, "dqam", dqam, omega, n, spec.seed);

        run_arm(gen.problem, "pcdm-full", base_config(Algorithm::PcdmFull), omega, n, spec.seed);
      }
    }
  } else if (a.family == "bounded-row") {
    if (omegas.empty()) omegas = {20, 60};
    if (taus.empty()) taus = {8, 16, 32, 64};
    for (Index omega : omegas) {
      for (Index s = 0; s < a.seeds; ++s) {
        BoundedRowSpec spec;
        spec.omega = omega;
        spec.seed = a.seed_base + static_cast<std::uint64_t>(s);
        spec.r = a.r;
        const GeneratedProblem gen = generate_bounded_row(spec);
        const Index n = gen.problem.blocks();

        if (omega >= 2) {
          SolverConfig dqam = base_config(Algorithm::DqamSqa);
          dqam.sqa_model = SqaModel::LipschitzScaledNorm;
          dqam.theta = 1.0 / (2.0 * static_cast<double>(omega - 1));
          run_arm(gen.problem, "dqam", dqam, omega, n, spec.seed);
        }
        run_arm(gen.problem, "pcdm-full", base_config(Algorithm::PcdmFull), omega, n, spec.seed);
        for (Index tau : taus) {
          SolverConfig pcdm = base_config(Algorithm::Pcdm);
          pcdm.tau = tau;
          pcdm.seed = spec.seed;
          run_arm(gen.problem, "pcdm", pcdm, omega, tau, spec.seed);
        }
      }
    }
  } else {
    throw InvalidArgument("unknown family '" + a.family + "'");
  }

  write_text_file(a.out, csv.str());
  std::cout << "wrote " << a.out << "\n";
}

struct ComplexityArgs {
  std::string bundle;
  Index omega = -1;
  double L_prime = 1.0;
  double L_bar = 1.0;
  double mu_F = -1.0;
  double mu_f = 0.0;
  Index n = -1;
  Index tau = -1;
  Index p = 1;
  double gap0 = -1.0;
  double eps = -1.0;
  double rho = 0.1;
};

void cmd_complexity(const ComplexityArgs& a) {
  nlohmann::json out;
  Index omega = a.omega;
  Index n = a.n;
  double L_prime = a.L_prime;
  double L_bar = a.L_bar;
  double mu_F_L = a.mu_F, mu_f_L = a.mu_f;
  double mu_F_e = a.mu_F, mu_f_e = a.mu_f;
  bool have_mu = a.mu_F >= 0.0;

  if (!a.bundle.empty()) {
    const CompositeProblem p = read_problem_file(a.bundle);
    omega = p.omega();
    n = p.blocks();
    const Vector& L = p.lipschitz_constants();
    L_prime = L_bar = L.maxCoeff();
    const StrongConvexityInfo info_L = p.strong_convexity_constants(L);
    const StrongConvexityInfo info_e =
        p.strong_convexity_constants(Vector::Ones(p.blocks()));
    mu_F_L = info_L.mu_F;
    mu_f_L = info_L.mu_f;
    mu_F_e = info_e.mu_F;
    mu_f_e = info_e.mu_f;
    have_mu = true;
    out["measured"] = {{"omega", omega},
                      {"n", n},
                      {"L_prime", L_prime},
                      {"L_bar", L_bar},
                      {"mu_F_L", mu_F_L},
                      {"mu_f_L", mu_f_L},
                      {"mu_F_e", mu_F_e},
                      {"mu_f_e", mu_f_e}};
  } else if (omega < 1) {
    throw InvalidArgument("either --bundle or --omega is required");
  }

  if (have_mu) {
    out["q_pcdm"] = q_pcdm(mu_F_L, mu_f_L, omega);
    out["q_dqam"] = omega >= 2 ? nlohmann::json(q_dqam(mu_F_e, L_prime, omega)) : nlohmann::json();
    if (omega >= 2 && std::abs(mu_F_e - mu_f_e) <= 1e-12 * std::max(1.0, mu_F_e)) {
      const SpeedupEstimate est = speedup_ratio(omega, L_prime, L_bar, mu_F_e, mu_f_e);
      out["speedup"] = {{"exact", est.exact}, {"lower_bound", est.lower_bound}};
    } else {
      out["speedup"] = nullptr;
    }
  }
  if (n >= 1 && omega >= 1 && omega <= n) {
    const TCurve curve = t_curve(n, a.p, omega);
    out["t_curve"] = {{"tau_opt", curve.tau_opt},
                      {"matches_p", curve.matches_p},
                      {"T_min", curve.T[static_cast<std::size_t>(curve.tau_opt - 1)]}};
    if (a.tau >= 1) {
      const double beta = eso_beta(omega, a.tau, n);
      out["beta"] = beta;
      if (have_mu && a.gap0 > 0.0 && a.eps > 0.0 && mu_F_L > 0.0)
        out["k_bound"] = k_bound(n, a.tau, beta, mu_F_L, mu_f_L, a.gap0, a.eps, a.rho);
    }
  }
  std::cout << out.dump(2) << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Augmented-Lagrangian decomposition toolkit"};
  app.require_subcommand(1);

  GenerateArgs ga;
  CLI::App* gen = app.add_subcommand("generate", "Write a reproducible problem bundle");
  gen->add_option("--family", ga.family, "block-angular or bounded-row")
      ->check(CLI::IsMember({"block-angular", "bounded-row"}));
  gen->add_option("--out", ga.out, "bundle path (sidecar written to <out>.json)")->required();
  gen->add_option("--omega", ga.omega, "target row-coupling degree");
  gen->add_option("--seed", ga.seed);
  gen->add_flag("--full-scale", ga.full_scale, "large block-angular configuration");
  gen->add_option("--rhs-mode", ga.rhs)->check(CLI::IsMember({"feasible", "random"}));
  gen->add_option("--r", ga.r, "penalty parameter");
  gen->add_option("--blocks", ga.blocks);
  gen->add_option("--block-cols", ga.block_cols);
  gen->add_option("--c-rows", ga.c_rows);
  gen->add_option("--linking-rows", ga.linking_rows);
  gen->add_option("--c-density", ga.c_density);
  gen->add_option("--d-density", ga.d_density);
  gen->add_option("--rows", ga.rows);
  gen->add_option("--cols", ga.cols);
  gen->callback([&] { cmd_generate(ga); });

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "Run a solver on a problem bundle");
  solve->add_option("--bundle", sa.bundle)->required();
  solve->add_option("--algorithm", sa.algorithm)
      ->check(CLI::IsMember({"mom", "dqam", "dqam-fd", "dqam-sqa", "pcdm", "pcdm-full"}));
  solve->add_option("--theta", sa.theta, "step size (<= 0 picks the default)");
  solve->add_option("--tau", sa.tau, "sampled blocks per iteration (pcdm)");
  solve->add_option("--seed", sa.seed);
  solve->add_option("--max-iters", sa.max_iters);
  solve->add_option("--stop", sa.stop)
      ->check(CLI::IsMember({"iters", "feasibility", "gap", "stationarity"}));
  solve->add_option("--eps", sa.eps, "stopping tolerance");
  solve->add_option("--F-star", sa.F_star, "optimal value for the gap rule");
  solve->add_option("--processors", sa.processors, "p in the time-unit accounting");
  solve->add_option("--threads", sa.threads);
  solve->add_option("--record-every", sa.record_every);
  solve->add_option("--trace", sa.trace_path, "iteration trace CSV path");
  solve->add_option("--solution", sa.solution_path, "final point output path");
  solve->add_option("--outer-iters", sa.outer_iters, "multiplier updates (mom)");
  solve->add_option("--inner-tol", sa.inner_tol, "inner stationarity tolerance (mom)");
  solve->add_option("--inner-algorithm", sa.inner_algorithm)
      ->check(CLI::IsMember({"dqam", "dqam-sqa", "pcdm", "pcdm-full"}));
  solve->callback([&] { cmd_solve(sa); });

  CompareArgs ca;
  CLI::App* compare = app.add_subcommand("compare", "Run the experiment families to a CSV");
  compare->add_option("--family", ca.family)
      ->check(CLI::IsMember({"block-angular", "bounded-row"}));
  compare->add_option("--out", ca.out)->required();
  compare->add_option("--omegas", ca.omegas, "coupling degrees to sweep");
  compare->add_option("--taus", ca.taus, "sample sizes for the pcdm arms");
  compare->add_option("--seeds", ca.seeds, "instances per configuration");
  compare->add_option("--seed-base", ca.seed_base);
  compare->add_option("--max-iters", ca.max_iters);
  compare->add_option("--eps", ca.eps, "feasibility target");
  compare->add_option("--processors", ca.processors);
  compare->add_option("--threads", ca.threads);
  compare->add_flag("--full-scale", ca.full_scale);
  compare->add_option("--r", ca.r);
  compare->callback([&] { cmd_compare(ca); });

  ComplexityArgs xa;
  CLI::App* complexity = app.add_subcommand("complexity", "Rate and complexity estimates");
  complexity->add_option("--bundle", xa.bundle, "measure constants from this bundle");
  complexity->add_option("--omega", xa.omega);
  complexity->add_option("--L-prime", xa.L_prime);
  complexity->add_option("--L-bar", xa.L_bar);
  complexity->add_option("--mu-F", xa.mu_F);
  complexity->add_option("--mu-f", xa.mu_f);
  complexity->add_option("--n", xa.n);
  complexity->add_option("--tau", xa.tau);
  complexity->add_option("--p", xa.p, "processors for the T(tau) curve");
  complexity->add_option("--gap0", xa.gap0);
  complexity->add_option("--eps", xa.eps);
  complexity->add_option("--rho", xa.rho, "failure probability for the iteration bound");
  complexity->callback([&] { cmd_complexity(xa); });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace aldecomp
