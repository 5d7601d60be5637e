#pragma once

// Column-block view of a sparse matrix A together with the right-hand side b
// of the linking constraints Ax = b.  The column partition is fixed at
// construction: block i owns the contiguous columns
// [offset(i), offset(i) + size(i)).  Each block is stored as its own
// compressed-column matrix, so extracting A_i is an O(1) slice, never a copy.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "aldecomp/errors.hpp"
#include "aldecomp/types.hpp"

namespace aldecomp {

class BlockPartition {
 public:
  BlockPartition() = default;
  explicit BlockPartition(std::vector<Index> sizes);

  // n equal blocks of width `width`.
  static BlockPartition uniform(Index n, Index width);
  // N scalar blocks.
  static BlockPartition scalar(Index total);

  Index blocks() const { return static_cast<Index>(sizes_.size()); }
  Index total() const { return offsets_.empty() ? 0 : offsets_.back(); }
  Index size(Index i) const;
  Index offset(Index i) const;
  // Block owning global column j.
  Index block_of(Index column) const;
  const std::vector<Index>& sizes() const { return sizes_; }

  bool operator==(const BlockPartition& other) const { return sizes_ == other.sizes_; }
  bool operator!=(const BlockPartition& other) const { return !(*this == other); }

 private:
  std::vector<Index> sizes_;
  std::vector<Index> offsets_;  // size n+1, offsets_[0] = 0, offsets_[n] = N
};

// Dense vector carrying the partition it is blocked by.
class BlockVector {
 public:
  BlockVector() = default;
  BlockVector(BlockPartition partition, Vector data);
  static BlockVector zero(const BlockPartition& partition);

  const BlockPartition& partition() const { return partition_; }
  Index size() const { return data_.size(); }

  Eigen::VectorBlock<Vector> block(Index i);
  Eigen::VectorBlock<const Vector> block(Index i) const;

  Vector& data() { return data_; }
  const Vector& data() const { return data_; }

 private:
  BlockPartition partition_;
  Vector data_;
};

// Per-block norm data: ||x||_w^2 = sum_i w_i <B_i x^(i), x^(i)>.
// B defaults to the identity on every block; custom B_i must be symmetric
// (within 1e-12 relative) and positive definite.
class BlockNorms {
 public:
  BlockNorms() = default;
  static BlockNorms identity(BlockPartition partition);
  BlockNorms(BlockPartition partition, Vector w);
  BlockNorms(BlockPartition partition, Vector w, std::vector<Matrix> B);

  const BlockPartition& partition() const { return partition_; }
  const Vector& w() const { return w_; }
  bool identity_B() const { return B_.empty(); }
  const Matrix& B(Index i) const;

  // <B_i v, v>.
  double quad_form(Index i, const Eigen::Ref<const Vector>& v) const;
  // B_i v.
  Vector apply_B(Index i, const Eigen::Ref<const Vector>& v) const;
  // B_i^{-1} v via the cached Cholesky factor.
  Vector solve_B(Index i, const Eigen::Ref<const Vector>& v) const;
  double lambda_max_B(Index i) const;

  BlockNorms with_weights(Vector w) const;

 private:
  void validate_blocks();

  BlockPartition partition_;
  Vector w_;
  std::vector<Matrix> B_;
  std::vector<Eigen::LLT<Matrix>> llt_;
  std::vector<double> lambda_max_;
};

// Sparse m x N matrix stored one compressed-column block per partition cell,
// with the right-hand side b kept alongside.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  BlockMatrix(Index rows, BlockPartition partition, std::vector<SparseMatrix> blocks, Vector b);
  static BlockMatrix from_triplets(Index rows, BlockPartition partition,
                                   const std::vector<Triplet>& triplets, Vector b);

  Index rows() const { return rows_; }
  Index cols() const { return partition_.total(); }
  Index blocks() const { return partition_.blocks(); }
  const BlockPartition& partition() const { return partition_; }
  const Vector& b() const { return b_; }

  // A_i as a compressed-column slice handle.
  const SparseMatrix& block(Index i) const;

  Index nonzeros() const;
  Index block_nonzeros(Index i) const { return block(i).nonZeros(); }

  // A x.
  Vector multiply(const Vector& x) const;
  // A^T y.
  Vector multiply_transpose(const Vector& y) const;
  // Whole matrix reassembled (test/oracle use; the solvers never need it).
  SparseMatrix assemble() const;

  BlockMatrix with_b(Vector b) const;

 private:
  Index rows_ = 0;
  BlockPartition partition_;
  std::vector<SparseMatrix> blocks_;
  Vector b_;
};

// b - A x.
Vector residual(const BlockMatrix& A, const Vector& x);

// sqrt(sum_i w_i <B_i x^(i), x^(i)>).
double weighted_norm(const Vector& x, const BlockNorms& norms);

// L_i = dominant eigenvalue of r A_i^T A_i in the metric of B_i
// (the spectral norm r ||A_i^T A_i|| when B_i = I), computed by power
// iteration from the normalized all-ones start, relative tolerance 1e-10,
// capped at 10 N_i iterations.  A zero block yields L_i = 0; callers that
// need strict positivity must check.
Vector block_lipschitz_constants(const BlockMatrix& A, double r, const BlockNorms& norms);
Vector block_lipschitz_constants(const BlockMatrix& A, double r);

// Norms with B_i = r A_i^T A_i (so every L_i is exactly 1).  Each Gram block
// must be positive definite: the smallest eigenvalue, estimated by inverse
// power iteration, must exceed 1e-12.
BlockNorms gram_norms(const BlockMatrix& A, double r);

// Text format:
//   m N n
//   sizes: N_1 ... N_n
//   row col value          (0-indexed, one structural nonzero per line)
//   b:
//   b_1 ... b_m            (one value per line)
// Values are written with 17 significant digits so a write/read round trip
// is exact.  The reader leaves the stream positioned after the b section so
// enclosing formats can append further sections.
BlockMatrix read_block_matrix(std::istream& in);
BlockMatrix read_block_matrix_file(const std::string& path);
void write_block_matrix(std::ostream& out, const BlockMatrix& A);
void write_block_matrix_file(const std::string& path, const BlockMatrix& A);

// 17-significant-digit decimal rendering used by every text writer.
std::string format_scalar(double value);

}  // namespace aldecomp
