#include "aldecomp/block_structure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace aldecomp {

BlockPartition::BlockPartition(std::vector<Index> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw InvalidArgument("partition: needs at least one block");
  offsets_.resize(sizes_.size() + 1);
  offsets_[0] = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] <= 0) throw InvalidArgument("partition: block sizes must be positive");
    offsets_[i + 1] = offsets_[i] + sizes_[i];
  }
}

BlockPartition BlockPartition::uniform(Index n, Index width) {
  if (n <= 0 || width <= 0) throw InvalidArgument("partition: n and width must be positive");
  return BlockPartition(std::vector<Index>(static_cast<std::size_t>(n), width));
}

BlockPartition BlockPartition::scalar(Index total) { return uniform(total, 1); }

Index BlockPartition::size(Index i) const {
  if (i < 0 || i >= blocks()) throw InvalidArgument("partition: block index out of range");
  return sizes_[static_cast<std::size_t>(i)];
}

Index BlockPartition::offset(Index i) const {
  if (i < 0 || i >= blocks()) throw InvalidArgument("partition: block index out of range");
  return offsets_[static_cast<std::size_t>(i)];
}

Index BlockPartition::block_of(Index column) const {
  if (column < 0 || column >= total()) throw InvalidArgument("partition: column index out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), column);
  return static_cast<Index>(it - offsets_.begin()) - 1;
}

BlockVector::BlockVector(BlockPartition partition, Vector data)
    : partition_(std::move(partition)), data_(std::move(data)) {
  if (data_.size() != partition_.total())
    throw InvalidArgument("block vector: data length does not match partition");
}

BlockVector BlockVector::zero(const BlockPartition& partition) {
  return BlockVector(partition, Vector::Zero(partition.total()));
}

Eigen::VectorBlock<Vector> BlockVector::block(Index i) {
  return data_.segment(partition_.offset(i), partition_.size(i));
}

Eigen::VectorBlock<const Vector> BlockVector::block(Index i) const {
  return static_cast<const Vector&>(data_).segment(partition_.offset(i), partition_.size(i));
}

BlockNorms BlockNorms::identity(BlockPartition partition) {
  Vector w = Vector::Ones(partition.blocks());
  return BlockNorms(std::move(partition), std::move(w));
}

BlockNorms::BlockNorms(BlockPartition partition, Vector w)
    : partition_(std::move(partition)), w_(std::move(w)) {
  if (w_.size() != partition_.blocks())
    throw InvalidArgument("block norms: weight count does not match partition");
  if ((w_.array() <= 0.0).any()) throw InvalidArgument("block norms: weights must be positive");
}

BlockNorms::BlockNorms(BlockPartition partition, Vector w, std::vector<Matrix> B)
    : partition_(std::move(partition)), w_(std::move(w)), B_(std::move(B)) {
  if (w_.size() != partition_.blocks())
    throw InvalidArgument("block norms: weight count does not match partition");
  if ((w_.array() <= 0.0).any()) throw InvalidArgument("block norms: weights must be positive");
  if (static_cast<Index>(B_.size()) != partition_.blocks())
    throw InvalidArgument("block norms: need one B_i per block");
  validate_blocks();
}

void BlockNorms::validate_blocks() {
  llt_.resize(B_.size());
  lambda_max_.resize(B_.size());
  for (std::size_t i = 0; i < B_.size(); ++i) {
    const Matrix& B = B_[i];
    Index k = partition_.size(static_cast<Index>(i));
    if (B.rows() != k || B.cols() != k)
      throw InvalidArgument("block norms: B_i dimensions do not match block size");
    double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
    if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw InvalidArgument("block norms: B_i is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(B);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0)
      throw InvalidArgument("block norms: B_i is not positive definite");
    lambda_max_[i] = eig.eigenvalues().maxCoeff();
    llt_[i].compute(B);
    if (llt_[i].info() != Eigen::Success)
      throw InvalidArgument("block norms: B_i Cholesky factorization failed");
  }
}

const Matrix& BlockNorms::B(Index i) const {
  if (identity_B()) throw InvalidArgument("block norms: identity B has no stored matrix");
  if (i < 0 || i >= partition_.blocks()) throw InvalidArgument("block norms: index out of range");
  return B_[static_cast<std::size_t>(i)];
}

double BlockNorms::quad_form(Index i, const Eigen::Ref<const Vector>& v) const {
  if (identity_B()) return v.squaredNorm();
  return v.dot(B_[static_cast<std::size_t>(i)] * v);
}

Vector BlockNorms::apply_B(Index i, const Eigen::Ref<const Vector>& v) const {
  if (identity_B()) return v;
  return B_[static_cast<std::size_t>(i)] * v;
}

Vector BlockNorms::solve_B(Index i, const Eigen::Ref<const Vector>& v) const {
  if (identity_B()) return v;
  return llt_[static_cast<std::size_t>(i)].solve(v);
}

double BlockNorms::lambda_max_B(Index i) const {
  if (identity_B()) return 1.0;
  if (i < 0 || i >= partition_.blocks()) throw InvalidArgument("block norms: index out of range");
  return lambda_max_[static_cast<std::size_t>(i)];
}

BlockNorms BlockNorms::with_weights(Vector w) const {
  if (identity_B()) return BlockNorms(partition_, std::move(w));
  return BlockNorms(partition_, std::move(w), B_);
}

BlockMatrix::BlockMatrix(Index rows, BlockPartition partition, std::vector<SparseMatrix> blocks,
                         Vector b)
    : rows_(rows), partition_(std::move(partition)), blocks_(std::move(blocks)), b_(std::move(b)) {
  if (rows_ <= 0) throw InvalidArgument("block matrix: row count must be positive");
  if (static_cast<Index>(blocks_.size()) != partition_.blocks())
    throw InvalidArgument("block matrix: need one storage block per partition cell");
  for (Index i = 0; i < partition_.blocks(); ++i) {
    const SparseMatrix& Ai = blocks_[static_cast<std::size_t>(i)];
    if (Ai.rows() != rows_ || Ai.cols() != partition_.size(i))
      throw InvalidArgument("block matrix: block dimensions do not match partition");
    if (!Ai.isCompressed()) blocks_[static_cast<std::size_t>(i)].makeCompressed();
  }
  if (b_.size() != rows_) throw InvalidArgument("block matrix: b length does not match row count");
}

BlockMatrix BlockMatrix::from_triplets(Index rows, BlockPartition partition,
                                       const std::vector<Triplet>& triplets, Vector b) {
  std::vector<std::vector<Triplet>> by_block(static_cast<std::size_t>(partition.blocks()));
  for (const Triplet& t : triplets) {
    if (t.row() < 0 || t.row() >= rows) throw InvalidArgument("block matrix: triplet row out of range");
    Index blk = partition.block_of(t.col());
    by_block[static_cast<std::size_t>(blk)].emplace_back(t.row(), t.col() - partition.offset(blk),
                                                         t.value());
  }
  std::vector<SparseMatrix> blocks;
  blocks.reserve(by_block.size());
  for (Index i = 0; i < partition.blocks(); ++i) {
    SparseMatrix Ai(rows, partition.size(i));
    auto& ts = by_block[static_cast<std::size_t>(i)];
    Ai.setFromTriplets(ts.begin(), ts.end());
    Ai.makeCompressed();
    blocks.push_back(std::move(Ai));
  }
  return BlockMatrix(rows, std::move(partition), std::move(blocks), std::move(b));
}

const SparseMatrix& BlockMatrix::block(Index i) const {
  if (i < 0 || i >= blocks()) throw InvalidArgument("block matrix: block index out of range");
  return blocks_[static_cast<std::size_t>(i)];
}

Index BlockMatrix::nonzeros() const {
  Index total = 0;
  for (const SparseMatrix& Ai : blocks_) total += Ai.nonZeros();
  return total;
}

Vector BlockMatrix::multiply(const Vector& x) const {
  if (x.size() != cols()) throw InvalidArgument("block matrix: x length does not match columns");
  Vector y = Vector::Zero(rows_);
  for (Index i = 0; i < blocks(); ++i)
    y += blocks_[static_cast<std::size_t>(i)] * x.segment(partition_.offset(i), partition_.size(i));
  return y;
}

Vector BlockMatrix::multiply_transpose(const Vector& y) const {
  if (y.size() != rows_) throw InvalidArgument("block matrix: y length does not match rows");
  Vector out(cols());
  for (Index i = 0; i < blocks(); ++i)
    out.segment(partition_.offset(i), partition_.size(i)) =
        blocks_[static_cast<std::size_t>(i)].transpose() * y;
  return out;
}

SparseMatrix BlockMatrix::assemble() const {
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(nonzeros()));
  for (Index i = 0; i < blocks(); ++i) {
    const SparseMatrix& Ai = blocks_[static_cast<std::size_t>(i)];
    Index off = partition_.offset(i);
    for (Index c = 0; c < Ai.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(Ai, c); it; ++it)
        triplets.emplace_back(it.row(), off + c, it.value());
  }
  SparseMatrix A(rows_, cols());
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  return A;
}

BlockMatrix BlockMatrix::with_b(Vector b) const {
  return BlockMatrix(rows_, partition_, blocks_, std::move(b));
}

Vector residual(const BlockMatrix& A, const Vector& x) { return A.b() - A.multiply(x); }

double weighted_norm(const Vector& x, const BlockNorms& norms) {
  const BlockPartition& p = norms.partition();
  if (x.size() != p.total()) throw InvalidArgument("weighted norm: x length does not match partition");
  double acc = 0.0;
  for (Index i = 0; i < p.blocks(); ++i)
    acc += norms.w()[i] * norms.quad_form(i, x.segment(p.offset(i), p.size(i)));
  return std::sqrt(acc);
}

namespace {

// Dominant eigenvalue of r A_i^T A_i in the B_i metric.  Blocks are column
// slices, so the Gram matrix is k x k; up to a generous width a dense solve
// is exact and cheap.  Wider blocks fall back to power iteration certified
// by the residual bound in the B-inverse norm.
double dominant_block_eigenvalue(const SparseMatrix& Ai, double r, const BlockNorms* norms,
                                 Index block) {
  const Index k = Ai.cols();
  if (Ai.nonZeros() == 0) return 0.0;

  if (k <= 512) {
    Matrix gram = r * (Matrix(Ai).transpose() * Matrix(Ai));
    if (!norms) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
      if (es.info() != Eigen::Success)
        throw NumericError("lipschitz constants: dense eigen-decomposition failed");
      return es.eigenvalues().maxCoeff();
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(gram, norms->B(block));
    if (es.info() != Eigen::Success)
      throw NumericError("lipschitz constants: dense eigen-decomposition failed");
    return es.eigenvalues().maxCoeff();
  }

  auto b_dot = [&](const Vector& a, const Vector& c) {
    return norms ? a.dot(norms->apply_B(block, c)) : a.dot(c);
  };

  Vector v = Vector::Ones(k);
  for (Index restart = 0; restart <= k; ++restart) {
    if (restart > 0) v = Vector::Unit(k, restart - 1);
    double nv = std::sqrt(b_dot(v, v));
    v /= nv;
    bool dead = false;
    const Index cap = 200 + 10 * k;
    for (Index it = 0; it < cap; ++it) {
      Vector mv = r * (Ai.transpose() * (Ai * v));
      const double lambda = v.dot(mv);  // Rayleigh quotient: v is B-normalized
      Vector bv = norms ? norms->apply_B(block, v) : v;
      Vector res = mv - lambda * bv;
      Vector sres = norms ? norms->solve_B(block, res) : res;
      const double err = std::sqrt(std::max(0.0, res.dot(sres)));
      if (it > 0 && err <= 1e-9 * std::max(std::abs(lambda), 1e-30))
        return lambda + err;  // err is an eigenvalue error bound; round up, never under
      Vector w = norms ? norms->solve_B(block, mv) : std::move(mv);
      double nw = std::sqrt(b_dot(w, w));
      if (nw == 0.0) {
        dead = true;  // start was in the null space; try the next start
        break;
      }
      v = w / nw;
    }
    if (!dead)
      throw NumericError("lipschitz constants: power iteration did not certify the dominant eigenvalue");
  }
  return 0.0;  // unreachable for a nonzero block: some basis vector has a nonzero image
}

}  // namespace

Vector block_lipschitz_constants(const BlockMatrix& A, double r, const BlockNorms& norms) {
  if (!(r > 0.0)) throw InvalidArgument("lipschitz constants: r must be positive");
  if (norms.partition() != A.partition())
    throw InvalidArgument("lipschitz constants: norm partition does not match matrix");
  Vector L(A.blocks());
  for (Index i = 0; i < A.blocks(); ++i)
    L[i] = dominant_block_eigenvalue(A.block(i), r, norms.identity_B() ? nullptr : &norms, i);
  return L;
}

Vector block_lipschitz_constants(const BlockMatrix& A, double r) {
  return block_lipschitz_constants(A, r, BlockNorms::identity(A.partition()));
}

BlockNorms gram_norms(const BlockMatrix& A, double r) {
  if (!(r > 0.0)) throw InvalidArgument("gram norms: r must be positive");
  std::vector<Matrix> B;
  B.reserve(static_cast<std::size_t>(A.blocks()));
  for (Index i = 0; i < A.blocks(); ++i) {
    const SparseMatrix& Ai = A.block(i);
    Matrix G = r * (Matrix(Ai.transpose() * Ai));
    // Positive definiteness gate: smallest eigenvalue by inverse power
    // iteration on the Cholesky factor must exceed 1e-12.
    Eigen::LLT<Matrix> llt(G);
    if (llt.info() != Eigen::Success)
      throw NumericError("gram norms: block " + std::to_string(i) + " Gram matrix is not positive definite");
    Index k = G.rows();
    Vector v = Vector::Ones(k);
    v.normalize();
    double lambda_min = 0.0;
    for (Index it = 0; it < 10 * k; ++it) {
      Vector w = llt.solve(v);
      double nw = w.norm();
      if (nw == 0.0) break;
      v = w / nw;
      double prev = lambda_min;
      lambda_min = v.dot(G * v);
      if (it > 0 && std::abs(lambda_min - prev) <= 1e-10 * std::max(std::abs(lambda_min), 1e-30))
        break;
    }
    if (lambda_min <= 1e-12)
      throw NumericError("gram norms: block " + std::to_string(i) +
                         " Gram matrix is numerically singular (smallest eigenvalue <= 1e-12)");
    B.push_back(std::move(G));
  }
  return BlockNorms(A.partition(), Vector::Ones(A.blocks()), std::move(B));
}

std::string format_scalar(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

[[noreturn]] void parse_fail(Index line, const std::string& what) {
  throw IoError("matrix parse error at line " + std::to_string(line) + ": " + what);
}

std::string next_nonempty_line(std::istream& in, Index& line) {
  std::string s;
  while (std::getline(in, s)) {
    ++line;
    auto pos = s.find_first_not_of(" \t\r");
    if (pos != std::string::npos) return s;
  }
  parse_fail(line, "unexpected end of input");
}

double parse_value(const std::string& tok, Index line) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) parse_fail(line, "trailing characters in number '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    parse_fail(line, "expected a number, got '" + tok + "'");
  }
}

}  // namespace

BlockMatrix read_block_matrix(std::istream& in) {
  Index line = 0;
  std::istringstream header(next_nonempty_line(in, line));
  Index m = 0, N = 0, n = 0;
  if (!(header >> m >> N >> n) || m <= 0 || N <= 0 || n <= 0)
    parse_fail(line, "header must be 'm N n' with positive integers");
  std::string extra;
  if (header >> extra) parse_fail(line, "unexpected token after header");

  std::istringstream sizes_line(next_nonempty_line(in, line));
  std::string tag;
  sizes_line >> tag;
  if (tag != "sizes:") parse_fail(line, "expected 'sizes:' section");
  std::vector<Index> sizes(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    if (!(sizes_line >> sizes[static_cast<std::size_t>(i)]))
      parse_fail(line, "expected " + std::to_string(n) + " block sizes");
  if (sizes_line >> extra) parse_fail(line, "unexpected token after block sizes");
  BlockPartition partition(std::move(sizes));
  if (partition.total() != N) parse_fail(line, "block sizes do not sum to N");

  std::vector<Triplet> triplets;
  for (;;) {
    std::string s = next_nonempty_line(in, line);
    std::istringstream row(s);
    std::string first;
    row >> first;
    if (first == "b:") break;
    Index r_idx = 0, c_idx = 0;
    try {
      std::size_t used = 0;
      r_idx = static_cast<Index>(std::stoll(first, &used));
      if (used != first.size()) parse_fail(line, "bad row index '" + first + "'");
    } catch (const std::logic_error&) {
      parse_fail(line, "expected a triplet or 'b:', got '" + first + "'");
    }
    std::string col_tok, val_tok;
    if (!(row >> col_tok >> val_tok)) parse_fail(line, "triplet needs 'row col value'");
    try {
      std::size_t used = 0;
      c_idx = static_cast<Index>(std::stoll(col_tok, &used));
      if (used != col_tok.size()) parse_fail(line, "bad column index '" + col_tok + "'");
    } catch (const std::logic_error&) {
      parse_fail(line, "bad column index '" + col_tok + "'");
    }
    double value = parse_value(val_tok, line);
    if (row >> extra) parse_fail(line, "unexpected token after triplet");
    if (r_idx < 0 || r_idx >= m) parse_fail(line, "row index out of range");
    if (c_idx < 0 || c_idx >= N) parse_fail(line, "column index out of range");
    triplets.emplace_back(r_idx, c_idx, value);
  }

  Vector b(m);
  Index got = 0;
  while (got < m) {
    std::istringstream row(next_nonempty_line(in, line));
    std::string tok;
    while (row >> tok) {
      if (got >= m) parse_fail(line, "more than m values in b section");
      b[got++] = parse_value(tok, line);
    }
  }
  return BlockMatrix::from_triplets(m, std::move(partition), triplets, std::move(b));
}

BlockMatrix read_block_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_block_matrix(in);
}

void write_block_matrix(std::ostream& out, const BlockMatrix& A) {
  out << A.rows() << ' ' << A.cols() << ' ' << A.blocks() << '\n';
  out << "sizes:";
  for (Index i = 0; i < A.blocks(); ++i) out << ' ' << A.partition().size(i);
  out << '\n';
  for (Index i = 0; i < A.blocks(); ++i) {
    const SparseMatrix& Ai = A.block(i);
    Index off = A.partition().offset(i);
    for (Index c = 0; c < Ai.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(Ai, c); it; ++it)
        out << it.row() << ' ' << off + c << ' ' << format_scalar(it.value()) << '\n';
  }
  out << "b:\n";
  for (Index j = 0; j < A.rows(); ++j) out << format_scalar(A.b()[j]) << '\n';
}

void write_block_matrix_file(const std::string& path, const BlockMatrix& A) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_block_matrix(out, A);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace aldecomp
