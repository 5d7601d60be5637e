#include "aldecomp/separability.hpp"

#include <algorithm>

#include <json.hpp>

namespace aldecomp {

std::vector<std::vector<Index>> decompose_rows(const BlockMatrix& A) {
  std::vector<std::vector<Index>> rows(static_cast<std::size_t>(A.rows()));
  for (Index i = 0; i < A.blocks(); ++i) {
    const SparseMatrix& Ai = A.block(i);
    for (Index c = 0; c < Ai.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(Ai, c); it; ++it) {
        auto& support = rows[static_cast<std::size_t>(it.row())];
        if (support.empty() || support.back() != i) support.push_back(i);
      }
  }
  // Blocks are visited in increasing order, so each per-row list is sorted;
  // deduplicate within a block (several columns can hit the same row).
  for (auto& support : rows) support.erase(std::unique(support.begin(), support.end()), support.end());
  return rows;
}

Index partial_separability_degree(const BlockMatrix& A) {
  if (A.nonzeros() == 0)
    throw InvalidArgument("separability: matrix has no structural nonzeros");
  Index omega = 0;
  for (const auto& support : decompose_rows(A))
    omega = std::max(omega, static_cast<Index>(support.size()));
  return omega;
}

Index ruszczynski_degree(const BlockMatrix& A) {
  if (A.nonzeros() == 0)
    throw InvalidArgument("separability: matrix has no structural nonzeros");
  // Incidence (i, u): block i couples through its u-th nonzero row j(i, u).
  // The indicator column of (i, u) is the unit vector e_{j(i,u)}, so the
  // overlap test <e_j, e_j'> != 0 reduces to row equality.
  struct Incidence {
    Index block;
    Index row;
  };
  std::vector<Incidence> incidences;
  for (Index i = 0; i < A.blocks(); ++i) {
    const SparseMatrix& Ai = A.block(i);
    std::vector<char> seen(static_cast<std::size_t>(A.rows()), 0);
    for (Index c = 0; c < Ai.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(Ai, c); it; ++it)
        if (!seen[static_cast<std::size_t>(it.row())]) {
          seen[static_cast<std::size_t>(it.row())] = 1;
          incidences.push_back({i, it.row()});
        }
  }
  Index omega_R = 0;
  for (const Incidence& a : incidences) {
    Index neighbours = 0;
    for (const Incidence& b : incidences)
      if (b.block != a.block && b.row == a.row) ++neighbours;
    omega_R = std::max(omega_R, neighbours);
  }
  return omega_R;
}

SeparabilityReport separability_report(const BlockMatrix& A, bool with_neighbour_degree) {
  SeparabilityReport report;
  auto rows = decompose_rows(A);
  for (const auto& support : rows)
    report.omega = std::max(report.omega, static_cast<Index>(support.size()));
  if (report.omega == 0)
    throw InvalidArgument("separability: matrix has no structural nonzeros");
  report.per_row_histogram.assign(static_cast<std::size_t>(report.omega) + 1, 0);
  for (const auto& support : rows) ++report.per_row_histogram[support.size()];
  if (with_neighbour_degree) {
    report.omega_R = ruszczynski_degree(A);
    report.omega_R_computed = true;
  }
  return report;
}

std::string separability_report_json(const SeparabilityReport& report) {
  nlohmann::json j;
  j["omega"] = report.omega;
  if (report.omega_R_computed)
    j["omega_R"] = report.omega_R;
  else
    j["omega_R"] = nullptr;
  j["per_row_histogram"] = report.per_row_histogram;
  return j.dump();
}

}  // namespace aldecomp
