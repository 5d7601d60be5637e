#include "aldecomp/psi.hpp"

#include <cmath>

namespace aldecomp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

BlockPsi BlockPsi::zero(Index dim) {
  if (dim <= 0) throw InvalidArgument("psi: block dimension must be positive");
  BlockPsi p(Kind::Zero, dim);
  p.c_ = Vector::Zero(dim);
  return p;
}

BlockPsi BlockPsi::linear(Vector c) {
  Index dim = c.size();
  return linear_box(std::move(c), Vector::Constant(dim, -kInf), Vector::Constant(dim, kInf));
}

BlockPsi BlockPsi::linear_box(Vector c, Vector lo, Vector hi) {
  if (c.size() <= 0) throw InvalidArgument("psi: block dimension must be positive");
  if (lo.size() != c.size() || hi.size() != c.size())
    throw InvalidArgument("psi: bound lengths do not match the linear coefficient");
  for (Index j = 0; j < c.size(); ++j) {
    if (std::isnan(lo[j]) || std::isnan(hi[j])) throw InvalidArgument("psi: bounds must not be NaN");
    if (lo[j] > hi[j]) throw InvalidArgument("psi: lower bound exceeds upper bound");
  }
  BlockPsi p(Kind::LinearBox, c.size());
  p.c_ = std::move(c);
  p.lo_ = std::move(lo);
  p.hi_ = std::move(hi);
  return p;
}

BlockPsi BlockPsi::linear_quadratic(Vector c, double mu) {
  if (c.size() <= 0) throw InvalidArgument("psi: block dimension must be positive");
  if (!(mu >= 0.0)) throw InvalidArgument("psi: mu must be nonnegative");
  BlockPsi p(Kind::LinearQuadratic, c.size());
  p.c_ = std::move(c);
  p.mu_ = mu;
  return p;
}

double BlockPsi::value(const Eigen::Ref<const Vector>& v) const {
  if (v.size() != dim_) throw InvalidArgument("psi: argument length does not match block");
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::LinearBox:
      if (!box_feasible(v)) return kInf;
      return c_.dot(v);
    case Kind::LinearQuadratic:
      return c_.dot(v) + 0.5 * mu_ * v.squaredNorm();
  }
  return 0.0;
}

Vector BlockPsi::prox(const Eigen::Ref<const Vector>& v, double d) const {
  if (v.size() != dim_) throw InvalidArgument("psi: argument length does not match block");
  if (!(d > 0.0)) throw InvalidArgument("psi: prox scale d must be positive");
  switch (kind_) {
    case Kind::Zero:
      return v;
    case Kind::LinearBox:
      return (v - c_ / d).cwiseMax(lo_).cwiseMin(hi_);
    case Kind::LinearQuadratic:
      return (d * v - c_) / (d + mu_);
  }
  return v;
}

BlockPsi BlockPsi::with_linear_shift(const Vector& delta) const {
  if (delta.size() != dim_) throw InvalidArgument("psi: shift length does not match block");
  switch (kind_) {
    case Kind::Zero:
      return linear(delta);
    case Kind::LinearBox:
      return linear_box(c_ + delta, lo_, hi_);
    case Kind::LinearQuadratic:
      return linear_quadratic(c_ + delta, mu_);
  }
  return *this;
}

Vector BlockPsi::gradient(const Eigen::Ref<const Vector>& v) const {
  if (v.size() != dim_) throw InvalidArgument("psi: argument length does not match block");
  switch (kind_) {
    case Kind::Zero:
      return Vector::Zero(dim_);
    case Kind::LinearBox: {
      bool bounded = false;
      for (Index j = 0; j < dim_; ++j)
        if (lo_[j] > -kInf || hi_[j] < kInf) bounded = true;
      if (bounded) throw InvalidArgument("psi: box indicator has no gradient");
      return c_;
    }
    case Kind::LinearQuadratic:
      return c_ + mu_ * v;
  }
  return Vector::Zero(dim_);
}

bool BlockPsi::box_feasible(const Eigen::Ref<const Vector>& v) const {
  if (kind_ != Kind::LinearBox) return true;
  for (Index j = 0; j < dim_; ++j)
    if (v[j] < lo_[j] || v[j] > hi_[j]) return false;
  return true;
}

Vector BlockPsi::project(const Eigen::Ref<const Vector>& v) const {
  if (kind_ != Kind::LinearBox) return v;
  return v.cwiseMax(lo_).cwiseMin(hi_);
}

}  // namespace aldecomp
