#include <doctest.h>

#include <cmath>
#include <limits>

#include "aldecomp/psi.hpp"
#include "aldecomp/rng.hpp"

using namespace aldecomp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Index>(vals.size()));
  Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

// d/2 ||u - v||^2 + psi(u), the objective the prox minimizes.
double prox_objective(const BlockPsi& psi, const Vector& v, double d, const Vector& u) {
  return 0.5 * d * (u - v).squaredNorm() + psi.value(u);
}

}  // namespace

TEST_SUITE("psi") {
  TEST_CASE("zero kind is the identity prox with zero value") {
    BlockPsi psi = BlockPsi::zero(3);
    Vector v = vec({1.0, -2.0, 0.5});
    CHECK(psi.value(v) == 0.0);
    CHECK((psi.prox(v, 2.5) - v).norm() == 0.0);
    CHECK(psi.gradient(v).norm() == 0.0);
  }

  TEST_CASE("linear kind shifts the prox by c/d") {
    BlockPsi psi = BlockPsi::linear(vec({2.0, -1.0}));
    Vector v = vec({0.0, 0.0});
    Vector u = psi.prox(v, 4.0);
    CHECK(u[0] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(u[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(psi.value(v) == 0.0);
    CHECK(psi.value(vec({1.0, 1.0})) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK((psi.gradient(v) - vec({2.0, -1.0})).norm() == 0.0);
  }

  TEST_CASE("box kind clips and is infinite outside") {
    BlockPsi psi = BlockPsi::linear_box(vec({0.0, 0.0}), vec({-1.0, 0.0}), vec({1.0, 2.0}));
    CHECK(psi.value(vec({0.0, 1.0})) == 0.0);
    CHECK(std::isinf(psi.value(vec({1.5, 1.0}))));
    CHECK(psi.box_feasible(vec({1.0, 2.0})));
    CHECK_FALSE(psi.box_feasible(vec({1.0, 2.1})));
    Vector u = psi.prox(vec({3.0, -5.0}), 1.0);
    CHECK(u[0] == 1.0);
    CHECK(u[1] == 0.0);
    CHECK((psi.project(vec({3.0, -5.0})) - u).norm() == 0.0);
    CHECK_THROWS_AS(psi.gradient(vec({0.0, 0.0})), InvalidArgument);
  }

  TEST_CASE("quadratic kind has the closed-form prox (d v - c)/(d + mu)") {
    BlockPsi psi = BlockPsi::linear_quadratic(vec({0.0}), 1.0);
    CHECK(psi.prox(vec({2.0}), 1.0)[0] == doctest::Approx(1.0).epsilon(1e-15));
    BlockPsi shifted = BlockPsi::linear_quadratic(vec({3.0}), 2.0);
    // argmin d/2 (u-v)^2 + 3u + u^2 at v=1, d=4: u = (4 - 3)/6.
    CHECK(shifted.prox(vec({1.0}), 4.0)[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(shifted.value(vec({2.0})) == doctest::Approx(6.0 + 4.0).epsilon(1e-14));
    CHECK(shifted.gradient(vec({2.0}))[0] == doctest::Approx(3.0 + 4.0).epsilon(1e-14));
  }

  TEST_CASE("prox minimizes its objective against perturbations") {
    CounterRng rng(31);
    std::vector<BlockPsi> kinds;
    kinds.push_back(BlockPsi::zero(2));
    kinds.push_back(BlockPsi::linear(vec({0.7, -0.3})));
    kinds.push_back(BlockPsi::linear_box(vec({0.2, -0.5}), vec({-1.0, -0.5}), vec({0.5, 1.0})));
    kinds.push_back(BlockPsi::linear_box(vec({0.0, 1.0}), vec({-kInf, 0.0}), vec({1.0, kInf})));
    kinds.push_back(BlockPsi::linear_quadratic(vec({-0.4, 0.8}), 1.7));
    for (const BlockPsi& psi : kinds) {
      for (int trial = 0; trial < 20; ++trial) {
        Vector v(2);
        v << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
        const double d = 0.5 + 2.0 * rng.uniform_real();
        const Vector u = psi.prox(v, d);
        const double base = prox_objective(psi, v, d, u);
        CHECK(std::isfinite(base));
        for (double delta : {1e-3, 1e-2, 0.1}) {
          for (Index j = 0; j < 2; ++j) {
            for (double sign : {-1.0, 1.0}) {
              Vector cand = u;
              cand[j] += sign * delta;
              CHECK(prox_objective(psi, v, d, cand) >= base - 1e-12);
            }
          }
        }
      }
    }
  }

  TEST_CASE("linear shifts fold into the value everywhere") {
    CounterRng rng(37);
    Vector delta = vec({0.9, -1.1});
    std::vector<BlockPsi> kinds;
    kinds.push_back(BlockPsi::zero(2));
    kinds.push_back(BlockPsi::linear_box(vec({0.2, -0.5}), vec({-1.0, -0.5}), vec({0.5, 1.0})));
    kinds.push_back(BlockPsi::linear_quadratic(vec({-0.4, 0.8}), 0.6));
    for (const BlockPsi& psi : kinds) {
      BlockPsi shifted = psi.with_linear_shift(delta);
      for (int trial = 0; trial < 25; ++trial) {
        Vector v(2);
        v << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
        const double lhs = shifted.value(v);
        const double rhs = psi.value(v) + delta.dot(v);
        if (std::isinf(rhs)) {
          CHECK(std::isinf(lhs));
        } else {
          CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
        }
      }
    }
  }

  TEST_CASE("construction validates its inputs") {
    CHECK_THROWS_AS(BlockPsi::zero(0), InvalidArgument);
    CHECK_THROWS_AS(BlockPsi::linear_box(vec({0.0}), vec({1.0}), vec({-1.0})), InvalidArgument);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(BlockPsi::linear_box(vec({0.0}), vec({nan}), vec({1.0})), InvalidArgument);
    CHECK_THROWS_AS(BlockPsi::linear_quadratic(vec({0.0}), -0.5), InvalidArgument);
    CHECK_THROWS_AS(BlockPsi::linear_box(vec({0.0, 0.0}), vec({0.0}), vec({1.0})),
                    InvalidArgument);
    BlockPsi psi = BlockPsi::zero(2);
    CHECK_THROWS_AS(psi.prox(vec({1.0}), 1.0), InvalidArgument);
    CHECK_THROWS_AS(psi.prox(vec({1.0, 1.0}), 0.0), InvalidArgument);
  }
}
