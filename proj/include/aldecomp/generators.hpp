#pragma once

// Reproducible test-problem families.  Both generators are deterministic in
// (spec, seed): the same inputs produce bit-identical problems.

#include <cstdint>
#include <optional>
#include <string>

#include "aldecomp/problem.hpp"

namespace aldecomp {

enum class RhsMode {
  Feasible,     // b = A x_true with x_true standard normal (default)
  RandomNormal  // b standard normal, typically infeasible
};

struct GeneratedProblem {
  CompositeProblem problem;
  std::optional<Vector> x_true;  // present in Feasible mode
};

// Block-angular family: n blocks with private constraint rows C_i stacked
// diagonally, followed by linking rows that touch exactly `omega` randomly
// chosen blocks (none when omega == 1, which leaves zero linking rows).  Each
// C_i has one planted entry per column (full column rank) plus random fill.
struct BlockAngularSpec {
  Index blocks = 20;
  Index block_cols = 10;
  Index c_rows = 15;
  double c_density = 0.1;
  Index linking_rows = 1;
  double d_density = 1.0;
  Index omega = 2;
  std::uint64_t seed = 0;
  RhsMode rhs_mode = RhsMode::Feasible;
  double r = 1.0;

  // The large configuration: 100 blocks of 100 columns, 150 private rows
  // each, one linking row (15001 rows total).
  static BlockAngularSpec full_scale();
};

GeneratedProblem generate_block_angular(const BlockAngularSpec& spec);

// Bounded-row-degree family over scalar blocks: every row has at most omega
// nonzeros.  A leading group of rows covers all columns in runs of omega (so
// row 0 is saturated and the measured degree is exactly omega); remaining
// rows draw between 1 and omega distinct columns.
struct BoundedRowSpec {
  Index rows = 2000;
  Index cols = 1000;
  Index omega = 20;
  std::uint64_t seed = 0;
  RhsMode rhs_mode = RhsMode::Feasible;
  double r = 1.0;
};

GeneratedProblem generate_bounded_row(const BoundedRowSpec& spec);

// JSON description of a generated instance: the spec that produced it plus
// measured quantities (dimensions, nonzeros, degree; the neighbour-based
// degree only when the incidence count keeps its quadratic scan cheap).
std::string sidecar_json(const BlockAngularSpec& spec, const GeneratedProblem& gen);
std::string sidecar_json(const BoundedRowSpec& spec, const GeneratedProblem& gen);

}  // namespace aldecomp
