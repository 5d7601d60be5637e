#include "aldecomp/generators.hpp"

#include <algorithm>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "aldecomp/errors.hpp"
#include "aldecomp/rng.hpp"
#include "aldecomp/separability.hpp"

namespace aldecomp {

namespace {

// Magnitude bounded away from zero so generated entries never vanish (an
// explicitly stored zero would distort degree measurements).
double nonzero_uniform(CounterRng& rng, double floor = 0.1) {
  const double sign = (rng.next_u64() & 1u) ? 1.0 : -1.0;
  return sign * (floor + (1.0 - floor) * rng.uniform_real());
}

Vector make_rhs(const BlockMatrix& A, RhsMode mode, CounterRng& rng,
                std::optional<Vector>& x_true) {
  if (mode == RhsMode::Feasible) {
    Vector xt(A.cols());
    for (Index j = 0; j < xt.size(); ++j) xt[j] = rng.normal();
    x_true = xt;
    return A.multiply(xt);
  }
  Vector b(A.rows());
  for (Index i = 0; i < b.size(); ++i) b[i] = rng.normal();
  return b;
}

CompositeProblem finish(BlockMatrix A, double r) {
  std::vector<BlockPsi> psi;
  psi.reserve(static_cast<std::size_t>(A.blocks()));
  for (Index i = 0; i < A.blocks(); ++i) psi.push_back(BlockPsi::zero(A.partition().size(i)));
  return CompositeProblem(std::move(A), r, std::move(psi));
}

nlohmann::json measured_json(const GeneratedProblem& gen) {
  const BlockMatrix& A = gen.problem.matrix();
  nlohmann::json m;
  m["rows"] = A.rows();
  m["cols"] = A.cols();
  m["blocks"] = A.blocks();
  m["nonzeros"] = A.nonzeros();
  const SeparabilityReport report = separability_report(A, false);
  m["omega"] = report.omega;
  Index incidences = 0;
  for (std::size_t d = 0; d < report.per_row_histogram.size(); ++d)
    incidences += static_cast<Index>(d) * report.per_row_histogram[d];
  if (incidences <= 5000) {
    m["omega_R"] = ruszczynski_degree(A);
  } else {
    m["omega_R"] = nullptr;
  }
  return m;
}

}  // namespace

BlockAngularSpec BlockAngularSpec::full_scale() {
  BlockAngularSpec spec;
  spec.blocks = 100;
  spec.block_cols = 100;
  spec.c_rows = 150;
  return spec;
}

GeneratedProblem generate_block_angular(const BlockAngularSpec& spec) {
  if (spec.blocks < 1) throw InvalidArgument("block-angular: need at least one block");
  if (spec.block_cols < 1 || spec.c_rows < 1)
    throw InvalidArgument("block-angular: block dimensions must be positive");
  if (spec.block_cols > spec.c_rows)
    throw InvalidArgument(
        "block-angular: block_cols above c_rows would break the full-column-rank layout");
  if (spec.linking_rows < 1) throw InvalidArgument("block-angular: need at least one linking row");
  if (spec.omega < 1 || spec.omega > spec.blocks)
    throw InvalidArgument("block-angular: need 1 <= omega <= blocks");
  if (spec.c_density < 0.0 || spec.c_density > 1.0 || spec.d_density < 0.0 ||
      spec.d_density > 1.0)
    throw InvalidArgument("block-angular: densities must lie in [0, 1]");
  if (!(spec.r > 0.0)) throw InvalidArgument("block-angular: r must be positive");

  CounterRng rng(spec.seed);
  const Index m = spec.blocks * spec.c_rows + spec.linking_rows;
  const Index linking_base = spec.blocks * spec.c_rows;
  std::vector<Triplet> entries;

  for (Index i = 0; i < spec.blocks; ++i) {
    const Index row_base = i * spec.c_rows;
    const Index col_base = i * spec.block_cols;
    for (Index c = 0; c < spec.block_cols; ++c)
      entries.emplace_back(row_base + c, col_base + c, nonzero_uniform(rng, 0.5));
    for (Index rr = 0; rr < spec.c_rows; ++rr) {
      for (Index c = 0; c < spec.block_cols; ++c) {
        if (rr == c) continue;  // planted position
        if (rng.uniform_real() < spec.c_density)
          entries.emplace_back(row_base + rr, col_base + c, nonzero_uniform(rng));
      }
    }
  }

  // Linking rows touch exactly the active blocks; row 0 touches every one of
  // them so the measured degree equals spec.omega.
  const Index active_count = spec.omega >= 2 ? spec.omega : 0;
  std::vector<Index> pool(static_cast<std::size_t>(spec.blocks));
  for (Index i = 0; i < spec.blocks; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (Index t = 0; t < active_count; ++t) {
    const Index j = t + static_cast<Index>(rng.uniform_below(
                            static_cast<std::uint64_t>(spec.blocks - t)));
    std::swap(pool[static_cast<std::size_t>(t)], pool[static_cast<std::size_t>(j)]);
  }
  std::vector<Index> active(pool.begin(), pool.begin() + active_count);
  std::sort(active.begin(), active.end());

  for (Index i : active) {
    const Index col_base = i * spec.block_cols;
    for (Index ell = 0; ell < spec.linking_rows; ++ell) {
      std::vector<Index> cols;
      for (Index c = 0; c < spec.block_cols; ++c)
        if (rng.uniform_real() < spec.d_density) cols.push_back(c);
      if (ell == 0 && cols.empty())
        cols.push_back(static_cast<Index>(
            rng.uniform_below(static_cast<std::uint64_t>(spec.block_cols))));
      for (Index c : cols)
        entries.emplace_back(linking_base + ell, col_base + c, nonzero_uniform(rng));
    }
  }

  BlockMatrix A = BlockMatrix::from_triplets(
      m, BlockPartition::uniform(spec.blocks, spec.block_cols), entries, Vector::Zero(m));
  std::optional<Vector> x_true;
  const Vector b = make_rhs(A, spec.rhs_mode, rng, x_true);
  GeneratedProblem gen{finish(A.with_b(b), spec.r), std::move(x_true)};
  return gen;
}

GeneratedProblem generate_bounded_row(const BoundedRowSpec& spec) {
  if (spec.cols < 1 || spec.rows < 1)
    throw InvalidArgument("bounded-row: dimensions must be positive");
  if (spec.omega < 1 || spec.omega > spec.cols)
    throw InvalidArgument("bounded-row: need 1 <= omega <= cols");
  const Index cover_rows = (spec.cols + spec.omega - 1) / spec.omega;
  if (spec.rows < cover_rows)
    throw InvalidArgument("bounded-row: too few rows to cover every column at this degree");
  if (!(spec.r > 0.0)) throw InvalidArgument("bounded-row: r must be positive");

  CounterRng rng(spec.seed);
  std::vector<Triplet> entries;
  for (Index row = 0; row < cover_rows; ++row) {
    const Index lo = row * spec.omega;
    const Index hi = std::min(lo + spec.omega, spec.cols);
    for (Index c = lo; c < hi; ++c) entries.emplace_back(row, c, nonzero_uniform(rng));
  }
  for (Index row = cover_rows; row < spec.rows; ++row) {
    const Index k = 1 + static_cast<Index>(rng.uniform_below(
                            static_cast<std::uint64_t>(spec.omega)));
    std::unordered_set<Index> chosen;
    while (static_cast<Index>(chosen.size()) < k)
      chosen.insert(static_cast<Index>(rng.uniform_below(static_cast<std::uint64_t>(spec.cols))));
    std::vector<Index> cols(chosen.begin(), chosen.end());
    std::sort(cols.begin(), cols.end());
    for (Index c : cols) entries.emplace_back(row, c, nonzero_uniform(rng));
  }

  BlockMatrix A = BlockMatrix::from_triplets(spec.rows, BlockPartition::scalar(spec.cols), entries,
                                             Vector::Zero(spec.rows));
  std::optional<Vector> x_true;
  const Vector b = make_rhs(A, spec.rhs_mode, rng, x_true);
  GeneratedProblem gen{finish(A.with_b(b), spec.r), std::move(x_true)};
  return gen;
}

std::string sidecar_json(const BlockAngularSpec& spec, const GeneratedProblem& gen) {
  nlohmann::json j;
  j["generator"] = "block_angular";
  j["spec"] = {{"blocks", spec.blocks},
               {"block_cols", spec.block_cols},
               {"c_rows", spec.c_rows},
               {"c_density", spec.c_density},
               {"linking_rows", spec.linking_rows},
               {"d_density", spec.d_density},
               {"omega", spec.omega},
               {"seed", spec.seed},
               {"rhs_mode", spec.rhs_mode == RhsMode::Feasible ? "feasible" : "random_normal"},
               {"r", spec.r}};
  j["measured"] = measured_json(gen);
  return j.dump(2);
}

std::string sidecar_json(const BoundedRowSpec& spec, const GeneratedProblem& gen) {
  nlohmann::json j;
  j["generator"] = "bounded_row";
  j["spec"] = {{"rows", spec.rows},
               {"cols", spec.cols},
               {"omega", spec.omega},
               {"seed", spec.seed},
               {"rhs_mode", spec.rhs_mode == RhsMode::Feasible ? "feasible" : "random_normal"},
               {"r", spec.r}};
  j["measured"] = measured_json(gen);
  return j.dump(2);
}

}  // namespace aldecomp
