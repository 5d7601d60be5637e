#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace aldecomp {

using Index = Eigen::Index;

template <typename T>
using MatrixX_t = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
using VectorX_t = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <typename T>
using SparseX_t = Eigen::SparseMatrix<T>;

using Scalar = double;
using Matrix = MatrixX_t<Scalar>;
using Vector = VectorX_t<Scalar>;
using SparseMatrix = SparseX_t<Scalar>;
using Triplet = Eigen::Triplet<Scalar>;

}  // namespace aldecomp
