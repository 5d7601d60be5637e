#pragma once

// Per-block separable terms Psi_i.  Three kinds cover the problem family:
//   Zero             Psi_i(v) = 0
//   LinearBox        Psi_i(v) = <c, v> + indicator of [lo, hi]
//   LinearQuadratic  Psi_i(v) = <c, v> + (mu/2) ||v||^2
// Every kind admits a closed-form proximal map, which is what the block
// updates are built from.  Multiplier terms are folded in through the
// linear coefficient (with_linear_shift), never handled separately.

#include <limits>

#include "aldecomp/errors.hpp"
#include "aldecomp/types.hpp"

namespace aldecomp {

class BlockPsi {
 public:
  enum class Kind { Zero, LinearBox, LinearQuadratic };

  static BlockPsi zero(Index dim);
  static BlockPsi linear(Vector c);  // LinearBox with infinite bounds
  static BlockPsi linear_box(Vector c, Vector lo, Vector hi);
  static BlockPsi linear_quadratic(Vector c, double mu);

  Kind kind() const { return kind_; }
  Index dim() const { return dim_; }
  const Vector& c() const { return c_; }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  double mu() const { return mu_; }

  bool has_box() const { return kind_ == Kind::LinearBox; }
  bool smooth() const { return kind_ != Kind::LinearBox; }

  // Psi_i(v); +infinity outside the box.
  double value(const Eigen::Ref<const Vector>& v) const;

  // argmin_u (d/2)||u - v||^2 + Psi_i(u) for d > 0:
  //   Zero            -> v
  //   LinearBox       -> clip(v - c/d, lo, hi)
  //   LinearQuadratic -> (d v - c) / (d + mu)
  Vector prox(const Eigen::Ref<const Vector>& v, double d) const;

  // Same kind with c replaced by c + delta (Zero promotes to a pure linear).
  BlockPsi with_linear_shift(const Vector& delta) const;

  // Gradient of the smooth kinds; throws for LinearBox.
  Vector gradient(const Eigen::Ref<const Vector>& v) const;

  bool box_feasible(const Eigen::Ref<const Vector>& v) const;
  // clip(v, lo, hi); identity for kinds without a box.
  Vector project(const Eigen::Ref<const Vector>& v) const;

 private:
  BlockPsi(Kind kind, Index dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  Index dim_;
  Vector c_;
  Vector lo_, hi_;
  double mu_ = 0.0;
};

}  // namespace aldecomp
