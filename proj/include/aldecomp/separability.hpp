#pragma once

// Row-coupling measures of a block matrix.  A row's degree is the number of
// blocks it touches (has a structural nonzero in); the partial separability
// degree omega is the maximum row degree.  The neighbour degree omega_R is
// the classical decomposition measure: the largest number of (block, row)
// incidences that share a coupling row with a given incidence from a
// different block.  For a quadratic coupling term omega = omega_R + 1.

#include <string>
#include <vector>

#include "aldecomp/block_structure.hpp"

namespace aldecomp {

// Per-row sorted lists of blocks with a structural nonzero in that row.
std::vector<std::vector<Index>> decompose_rows(const BlockMatrix& A);

// omega = max over rows of the number of blocks touched.  The matrix must
// have at least one structural nonzero, so omega >= 1.
Index partial_separability_degree(const BlockMatrix& A);

// omega_R by literal enumeration: for every incidence (i, u), meaning block i
// with its u-th coupling row, count the incidences (i', u') with i' != i
// whose indicator columns overlap.  Quadratic in the incidence count; meant
// as an oracle and for reports, not for solver paths (solvers use omega).
Index ruszczynski_degree(const BlockMatrix& A);

struct SeparabilityReport {
  Index omega = 0;
  Index omega_R = 0;
  bool omega_R_computed = false;
  // histogram[d] = number of rows touching exactly d blocks, d = 0..omega.
  std::vector<Index> per_row_histogram;
};

// Full report.  with_neighbour_degree = false skips the quadratic omega_R
// enumeration (useful on large instances); the JSON then carries null.
SeparabilityReport separability_report(const BlockMatrix& A, bool with_neighbour_degree = true);

// {"omega": ..., "omega_R": ... | null, "per_row_histogram": [...]}
std::string separability_report_json(const SeparabilityReport& report);

}  // namespace aldecomp
