#include <doctest.h>

#include <cmath>
#include <vector>

#include "aldecomp/eso.hpp"
#include "aldecomp/rng.hpp"

using namespace aldecomp;

namespace {

CompositeProblem random_quadratic(CounterRng& rng, Index rows, Index n) {
  std::vector<Triplet> trips;
  for (Index j = 0; j < n; ++j) {
    trips.emplace_back(j % rows, j, rng.uniform(0.5, 1.5));
    for (Index r = 0; r < rows; ++r)
      if (rng.uniform_real() < 0.5) trips.emplace_back(r, j, rng.uniform(-1.0, 1.0));
  }
  Vector b(rows);
  for (Index r = 0; r < rows; ++r) b[r] = rng.normal();
  BlockMatrix A = BlockMatrix::from_triplets(rows, BlockPartition::scalar(n), trips, b);
  std::vector<BlockPsi> psi;
  for (Index i = 0; i < n; ++i) psi.push_back(BlockPsi::zero(1));
  return CompositeProblem(std::move(A), 1.0 + rng.uniform_real(), std::move(psi));
}

std::vector<EsoCheckPoint> random_points(CounterRng& rng, Index dim, int count) {
  std::vector<EsoCheckPoint> pts;
  for (int k = 0; k < count; ++k) {
    EsoCheckPoint pt;
    pt.x.resize(dim);
    pt.h.resize(dim);
    for (Index j = 0; j < dim; ++j) {
      pt.x[j] = rng.normal();
      pt.h[j] = rng.normal();
    }
    pts.push_back(std::move(pt));
  }
  return pts;
}

}  // namespace

TEST_SUITE("eso") {
  TEST_CASE("beta closed form") {
    CHECK(eso_beta(3, 2, 5) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(eso_beta(1, 1, 1) == 1.0);
    CHECK(eso_beta(4, 1, 9) == 1.0);     // serial sampling never pays for overlap
    CHECK(eso_beta(5, 5, 5) == 5.0);     // fully parallel pays beta = omega
    CHECK(eso_beta(7, 7, 7) == 7.0);
    CHECK(eso_beta(2, 3, 5) == doctest::Approx(1.5).epsilon(1e-15));
  }

  TEST_CASE("beta is nondecreasing in tau and omega") {
    for (Index n : {2, 6, 11}) {
      for (Index omega = 1; omega <= n; ++omega)
        for (Index tau = 2; tau <= n; ++tau)
          CHECK(eso_beta(omega, tau, n) >= eso_beta(omega, tau - 1, n));
      for (Index tau = 1; tau <= n; ++tau)
        for (Index omega = 2; omega <= n; ++omega)
          CHECK(eso_beta(omega, tau, n) >= eso_beta(omega - 1, tau, n));
    }
  }

  TEST_CASE("beta arguments are validated") {
    CHECK_THROWS_AS(eso_beta(0, 1, 3), InvalidArgument);
    CHECK_THROWS_AS(eso_beta(4, 1, 3), InvalidArgument);
    CHECK_THROWS_AS(eso_beta(1, 0, 3), InvalidArgument);
    CHECK_THROWS_AS(eso_beta(1, 4, 3), InvalidArgument);
    CHECK_THROWS_AS(eso_beta(1, 1, 0), InvalidArgument);
  }

  TEST_CASE("eso_params reads omega and the Lipschitz weights off the problem") {
    CounterRng rng(101);
    CompositeProblem p = random_quadratic(rng, 4, 6);
    EsoParams params = eso_params(p, 3);
    CHECK(params.n == 6);
    CHECK(params.tau == 3);
    CHECK(params.beta == eso_beta(p.omega(), 3, 6));
    CHECK((params.w - p.lipschitz_constants()).norm() == 0.0);
  }

  TEST_CASE("eso_params rejects a zero block") {
    std::vector<Triplet> trips{{0, 0, 1.0}};
    BlockMatrix A = BlockMatrix::from_triplets(1, BlockPartition::scalar(2), trips, Vector::Zero(1));
    CompositeProblem p(A, 1.0, {BlockPsi::zero(1), BlockPsi::zero(1)});
    CHECK_THROWS_AS(eso_params(p, 1), NumericError);
  }

  TEST_CASE("the inequality holds exhaustively on random quadratics") {
    CounterRng rng(103);
    for (int trial = 0; trial < 4; ++trial) {
      CompositeProblem p = random_quadratic(rng, 4, 5);
      for (Index tau : {1, 2, 3, 5}) {
        EsoParams params = eso_params(p, tau);
        EsoCheckReport report = verify_eso_exhaustive(p, params, random_points(rng, 5, 20));
        CHECK(report.holds());
        CHECK(report.points_checked == 20);
        CHECK(report.worst_margin <= 1e-10);
      }
    }
  }

  TEST_CASE("an understated beta is caught with the exact margin") {
    // With both blocks updated every time, the quadratic needs beta = 2;
    // beta = 1.9 undershoots by 0.05 ||h||^2 = 0.1 at h = (1, 1).
    std::vector<Triplet> trips{{0, 0, 1.0}, {0, 1, 1.0}};
    BlockMatrix A = BlockMatrix::from_triplets(1, BlockPartition::scalar(2), trips, Vector::Zero(1));
    CompositeProblem p(A, 1.0, {BlockPsi::zero(1), BlockPsi::zero(1)});

    EsoCheckPoint pt;
    pt.x = Vector::Zero(2);
    pt.h = Vector::Ones(2);

    EsoParams bad;
    bad.beta = 1.9;
    bad.w = Vector::Ones(2);
    bad.tau = 2;
    bad.n = 2;
    EsoCheckReport report = verify_eso_exhaustive(p, bad, {pt});
    CHECK(report.violations == 1);
    CHECK(report.worst_margin == doctest::Approx(0.1).epsilon(1e-12));

    EsoParams good = eso_params(p, 2);
    CHECK(good.beta == 2.0);
    report = verify_eso_exhaustive(p, good, {pt});
    CHECK(report.holds());
    CHECK(std::abs(report.worst_margin) <= 1e-14);
  }

  TEST_CASE("the enumeration budget and shape mismatches are rejected") {
    CounterRng rng(107);
    CompositeProblem p = random_quadratic(rng, 6, 40);
    EsoParams params;
    params.beta = 2.0;
    params.w = Vector::Ones(40);
    params.tau = 20;
    params.n = 40;
    CHECK_THROWS_AS(verify_eso_exhaustive(p, params, {}), InvalidArgument);

    CompositeProblem small = random_quadratic(rng, 3, 4);
    EsoParams wrong_n = eso_params(small, 2);
    wrong_n.n = 5;
    CHECK_THROWS_AS(verify_eso_exhaustive(small, wrong_n, {}), InvalidArgument);
    EsoParams good = eso_params(small, 2);
    EsoCheckPoint bad_point;
    bad_point.x = Vector::Zero(3);
    bad_point.h = Vector::Zero(4);
    CHECK_THROWS_AS(verify_eso_exhaustive(small, good, {bad_point}), InvalidArgument);
  }

  TEST_CASE("the psi identity holds with feasible boxes") {
    CounterRng rng(109);
    std::vector<Triplet> trips;
    for (Index j = 0; j < 4; ++j) trips.emplace_back(0, j, rng.uniform(0.5, 1.0));
    BlockMatrix A =
        BlockMatrix::from_triplets(1, BlockPartition::scalar(4), trips, Vector::Ones(1));
    Vector lo = Vector::Constant(1, -2.0), hi = Vector::Constant(1, 2.0);
    std::vector<BlockPsi> psi{BlockPsi::linear_box(Vector::Constant(1, 0.3), lo, hi),
                              BlockPsi::zero(1),
                              BlockPsi::linear_quadratic(Vector::Constant(1, -0.1), 0.8),
                              BlockPsi::linear_box(Vector::Constant(1, -0.2), lo, hi)};
    CompositeProblem p(A, 1.0, psi);

    std::vector<EsoCheckPoint> pts;
    for (int k = 0; k < 50; ++k) {
      EsoCheckPoint pt;
      pt.x = Vector::NullaryExpr(4, [&](Index) { return rng.uniform(-0.5, 0.5); });
      pt.h = Vector::NullaryExpr(4, [&](Index) { return rng.uniform(-0.5, 0.5); });
      pts.push_back(std::move(pt));
    }
    for (Index tau = 1; tau <= 4; ++tau) {
      PsiIdentityReport report = verify_psi_identity(p, tau, pts);
      CHECK(report.holds());
      CHECK(report.vacuous == 0);
      CHECK(report.worst_error <= 1e-12);
    }
  }

  TEST_CASE("points outside the box on both sides are vacuous") {
    Vector lo = Vector::Zero(1), hi = Vector::Ones(1);
    std::vector<Triplet> trips{{0, 0, 1.0}, {0, 1, 1.0}};
    BlockMatrix A = BlockMatrix::from_triplets(1, BlockPartition::scalar(2), trips, Vector::Ones(1));
    CompositeProblem p(A, 1.0,
                       {BlockPsi::linear_box(Vector::Zero(1), lo, hi), BlockPsi::zero(1)});
    EsoCheckPoint pt;
    pt.x = Vector::Constant(2, 5.0);   // block 1 infeasible
    pt.h = Vector::Constant(2, 0.1);   // and stays infeasible after the step
    PsiIdentityReport report = verify_psi_identity(p, 1, {pt});
    CHECK(report.holds());
    CHECK(report.vacuous == 1);
  }

  TEST_CASE("tau = n recovers from an infeasible start") {
    // With every block updated, only psi(x + h) matters; the identity must not
    // multiply the infinite psi(x) by its zero weight.
    Vector lo = Vector::Zero(1), hi = Vector::Ones(1);
    std::vector<Triplet> trips{{0, 0, 1.0}, {0, 1, 1.0}};
    BlockMatrix A = BlockMatrix::from_triplets(1, BlockPartition::scalar(2), trips, Vector::Ones(1));
    CompositeProblem p(A, 1.0,
                       {BlockPsi::linear_box(Vector::Zero(1), lo, hi),
                        BlockPsi::linear_box(Vector::Zero(1), lo, hi)});
    EsoCheckPoint pt;
    pt.x = Vector::Constant(2, -1.0);
    pt.h = Vector::Constant(2, 1.5);
    PsiIdentityReport report = verify_psi_identity(p, 2, {pt});
    CHECK(report.holds());
    CHECK(report.vacuous == 0);
    CHECK(report.worst_error == 0.0);
  }

  TEST_CASE("psi identity validates tau and the enumeration budget") {
    CounterRng rng(113);
    CompositeProblem p = random_quadratic(rng, 3, 4);
    CHECK_THROWS_AS(verify_psi_identity(p, 0, {}), InvalidArgument);
    CHECK_THROWS_AS(verify_psi_identity(p, 5, {}), InvalidArgument);
    CompositeProblem wide = random_quadratic(rng, 6, 40);
    CHECK_THROWS_AS(verify_psi_identity(wide, 20, {}), InvalidArgument);
  }
}
