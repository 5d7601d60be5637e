#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "aldecomp/problem.hpp"

namespace aldecomp {

namespace {

[[noreturn]] void bundle_fail(const std::string& what) {
  throw IoError("problem bundle parse error: " + what);
}

std::string next_line(std::istream& in) {
  std::string s;
  while (std::getline(in, s)) {
    auto pos = s.find_first_not_of(" \t\r");
    if (pos != std::string::npos) return s;
  }
  bundle_fail("unexpected end of input");
}

double parse_number(std::istringstream& row, const std::string& what) {
  std::string tok;
  if (!(row >> tok)) bundle_fail("missing " + what);
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) bundle_fail("bad " + what + " '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    bundle_fail("bad " + what + " '" + tok + "'");
  }
}

Vector parse_vector(std::istringstream& row, Index len, const std::string& what) {
  Vector v(len);
  for (Index j = 0; j < len; ++j) v[j] = parse_number(row, what);
  return v;
}

}  // namespace

CompositeProblem read_problem(std::istream& in) {
  BlockMatrix A = read_block_matrix(in);
  const BlockPartition& part = A.partition();

  std::istringstream r_line(next_line(in));
  std::string tag;
  r_line >> tag;
  if (tag != "r:") bundle_fail("expected 'r:' section after b values");
  double r = parse_number(r_line, "penalty r");

  std::istringstream psi_head(next_line(in));
  psi_head >> tag;
  if (tag != "psi:") bundle_fail("expected 'psi:' section");

  std::vector<BlockPsi> psi;
  psi.reserve(static_cast<std::size_t>(part.blocks()));
  for (Index i = 0; i < part.blocks(); ++i) {
    Index k = part.size(i);
    std::istringstream row(next_line(in));
    std::string kind;
    row >> kind;
    if (kind == "zero") {
      psi.push_back(BlockPsi::zero(k));
    } else if (kind == "box") {
      Vector c = parse_vector(row, k, "box linear coefficient");
      Vector lo = parse_vector(row, k, "box lower bound");
      Vector hi = parse_vector(row, k, "box upper bound");
      psi.push_back(BlockPsi::linear_box(std::move(c), std::move(lo), std::move(hi)));
    } else if (kind == "linquad") {
      double mu = parse_number(row, "linquad mu");
      Vector c = parse_vector(row, k, "linquad linear coefficient");
      psi.push_back(BlockPsi::linear_quadratic(std::move(c), mu));
    } else {
      bundle_fail("unknown psi kind '" + kind + "' for block " + std::to_string(i));
    }
    std::string extra;
    if (row >> extra) bundle_fail("unexpected token after psi line for block " + std::to_string(i));
  }

  Vector pi;
  std::string s;
  while (std::getline(in, s)) {
    auto pos = s.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    std::istringstream head(s);
    head >> tag;
    if (tag != "pi:") bundle_fail("unexpected section '" + tag + "'");
    pi.resize(A.rows());
    Index got = 0;
    while (got < A.rows()) {
      std::istringstream row(next_line(in));
      std::string tok;
      while (row >> tok) {
        if (got >= A.rows()) bundle_fail("more than m values in pi section");
        try {
          std::size_t used = 0;
          pi[got] = std::stod(tok, &used);
          if (used != tok.size()) bundle_fail("bad pi value '" + tok + "'");
        } catch (const std::logic_error&) {
          bundle_fail("bad pi value '" + tok + "'");
        }
        ++got;
      }
    }
    break;
  }

  try {
    return CompositeProblem(std::move(A), r, std::move(psi), std::move(pi));
  } catch (const InvalidArgument& e) {
    bundle_fail(e.what());
  }
}

CompositeProblem read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_problem(in);
}

void write_problem(std::ostream& out, const CompositeProblem& p) {
  write_block_matrix(out, p.matrix());
  out << "r: " << format_scalar(p.r()) << '\n';
  out << "psi:\n";
  for (Index i = 0; i < p.blocks(); ++i) {
    const BlockPsi& psi = p.psi(i);
    switch (psi.kind()) {
      case BlockPsi::Kind::Zero:
        out << "zero\n";
        break;
      case BlockPsi::Kind::LinearBox: {
        out << "box";
        for (Index j = 0; j < psi.dim(); ++j) out << ' ' << format_scalar(psi.c()[j]);
        for (Index j = 0; j < psi.dim(); ++j) out << ' ' << format_scalar(psi.lo()[j]);
        for (Index j = 0; j < psi.dim(); ++j) out << ' ' << format_scalar(psi.hi()[j]);
        out << '\n';
        break;
      }
      case BlockPsi::Kind::LinearQuadratic: {
        out << "linquad " << format_scalar(psi.mu());
        for (Index j = 0; j < psi.dim(); ++j) out << ' ' << format_scalar(psi.c()[j]);
        out << '\n';
        break;
      }
    }
  }
  if (p.pi().cwiseAbs().maxCoeff() != 0.0) {
    out << "pi:\n";
    for (Index j = 0; j < p.rows(); ++j) out << format_scalar(p.pi()[j]) << '\n';
  }
}

void write_problem_file(const std::string& path, const CompositeProblem& p) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_problem(out, p);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace aldecomp
