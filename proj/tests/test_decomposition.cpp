#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace ridge_equiv;
namespace ts = testsupport;

namespace {
const ToleranceConfig tol;
}

TEST_CASE("canonical null basis spans the stated complements") {
  const Matrix X1{{1, 1}, {1, 0}, {0, 1}};
  const Matrix Z1 = null_basis(X1, tol).Z;
  REQUIRE(Z1.cols() == 1);
  // Proportional to (1, -1, -1); canonical sign makes the first entry
  // positive, and the column is unit length.
  const Vector expected = Vector{{1.0, -1.0, -1.0}} / std::sqrt(3.0);
  CHECK((Z1.col(0) - expected).norm() < 1e-12);

  const Matrix X2{{1, 0}, {0, 1}, {0, 0}};
  const Matrix Z2 = null_basis(X2, tol).Z;
  CHECK((Z2.col(0) - Vector{{0.0, 0.0, 1.0}}).norm() < 1e-12);
}

TEST_CASE("null basis is orthogonal to X and deterministic") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto [n, k] = ts::DimCycle::at(seed);
    Rng rng(seed + 100);
    const Matrix X = rng.matrix(n, k, -2.0, 2.0);
    if (numerical_rank(X, tol) < k) continue;
    const Matrix Z = null_basis(X, tol).Z;
    CHECK((X.transpose() * Z).norm() < 1e-12);
    CHECK(numerical_rank(Z, tol) == n - k);
    CHECK(validate_null_basis(X, Z, tol).empty());
    const Matrix Z2 = null_basis(X, tol).Z;
    CHECK((Z - Z2).norm() == 0.0);
  }
}

TEST_CASE("null basis rejects rank-deficient designs") {
  const Matrix X{{1, 1}, {2, 2}, {3, 3}};
  CHECK_THROWS_AS(null_basis(X, tol), PreconditionError);
}

TEST_CASE("blocks of the shared-RSS fixture match its stated coordinates") {
  const ModelInstance m = ts::example3();
  const auto blocks = omega_blocks(m.X, *m.Z, m.Omega, tol);
  CHECK((blocks.Gamma - Matrix::Identity(2, 2) / 3.0).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(blocks.Xi.norm() < 1e-12);
  REQUIRE(blocks.Delta.rows() == 1);
  CHECK(blocks.Delta(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("identity covariance gives the projector coordinates") {
  Rng rng(7);
  const Matrix X = rng.matrix(5, 2, -2.0, 2.0);
  REQUIRE(numerical_rank(X, tol) == 2);
  const Matrix Z = null_basis(X, tol).Z;
  const auto blocks = omega_blocks(X, Z, Matrix::Identity(5, 5), tol);

  const Matrix XtX_inv =
      Eigen::LLT<Matrix>(X.transpose() * X).solve(Matrix::Identity(2, 2));
  const Matrix ZtZ_inv =
      Eigen::LLT<Matrix>(Z.transpose() * Z).solve(Matrix::Identity(3, 3));
  CHECK(equality_residual(blocks.Gamma, XtX_inv) < 1e-12);
  CHECK(blocks.Xi.norm() < 1e-12);
  CHECK(equality_residual(blocks.Delta, ZtZ_inv) < 1e-12);

  // Gamma = (X^T X)^{-1}, Xi = 0, Delta = (Z^T Z)^{-1} reassembles to the
  // sum of the two projectors, i.e. the identity.
  CHECK(equality_residual(reconstruct_omega(X, Z, blocks),
                          Matrix::Identity(5, 5)) < 1e-12);
}

TEST_CASE("round trip through blocks reproduces Omega") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [n, k] = ts::DimCycle::at(seed);
    GenSpec spec{n, k, GenKind::RandomSPD, seed + 500, 1.0};
    const ModelInstance m = gen_instance(spec);
    const Matrix Z = null_basis(m.X, tol).Z;
    const auto blocks = omega_blocks(m.X, Z, m.Omega, tol);
    CHECK(equality_residual(reconstruct_omega(m.X, Z, blocks), m.Omega) <
          1e-10);
  }
}

TEST_CASE("block-formula inverse agrees with direct inversion") {
  // Fixture covariance from the shared-penalty example.
  const ModelInstance ex2 = ts::example2();
  {
    const Matrix Z = null_basis(ex2.X, tol).Z;
    const auto blocks = omega_blocks(ex2.X, Z, ex2.Omega, tol);
    const Matrix inv = omega_inverse_via_blocks(ex2.X, Z, blocks);
    CHECK(equality_residual(inv * ex2.Omega, Matrix::Identity(3, 3)) < 1e-12);
  }

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto [n, k] = ts::DimCycle::at(seed);
    GenSpec spec{n, k, GenKind::RandomSPD, seed + 900, 1.0};
    const ModelInstance m = gen_instance(spec);
    const Matrix Z = null_basis(m.X, tol).Z;
    const auto blocks = omega_blocks(m.X, Z, m.Omega, tol);
    const Matrix via_blocks = omega_inverse_via_blocks(m.X, Z, blocks);
    const Matrix direct = Eigen::LLT<Matrix>(m.Omega).solve(
        Matrix::Identity(m.n, m.n));
    CHECK(equality_residual(via_blocks, direct) < 1e-10);
    CHECK(equality_residual(via_blocks * m.Omega,
                            Matrix::Identity(m.n, m.n)) < 1e-10);
  }
}

TEST_CASE("inverse-block contractions recover A, B and D") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [n, k] = ts::DimCycle::at(seed + 3);
    GenSpec spec{n, k, GenKind::RandomSPD, seed + 1300, 1.0};
    const ModelInstance m = gen_instance(spec);
    const Matrix Z = null_basis(m.X, tol).Z;
    const auto blocks = omega_blocks(m.X, Z, m.Omega, tol);
    const Matrix omega_inv =
        Eigen::LLT<Matrix>(m.Omega).solve(Matrix::Identity(m.n, m.n));
    CHECK(equality_residual(m.X.transpose() * omega_inv * m.X, blocks.A) <
          1e-9);
    CHECK(equality_residual(m.X.transpose() * omega_inv * Z, blocks.B) < 1e-9);
    CHECK(equality_residual(Z.transpose() * omega_inv * Z, blocks.D) < 1e-9);
  }
}

TEST_CASE("the Delta predicate is invariant under a change of basis for Z") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto [n, k] = ts::DimCycle::at(seed + 7);
    GenSpec spec{n, k,
                 seed % 2 == 0 ? GenKind::KruskalForm : GenKind::RandomSPD,
                 seed + 1700, 1.0};
    const ModelInstance m = gen_instance(spec);
    const Matrix Z = null_basis(m.X, tol).Z;
    const Matrix Q = ts::random_basis_change(n - k, seed + 41);
    const Matrix Zq = Z * Q;

    const auto with_z = approx_equal(Z.transpose() * m.Omega * Z,
                                     Z.transpose() * Z, tol);
    const auto with_zq = approx_equal(Zq.transpose() * m.Omega * Zq,
                                      Zq.transpose() * Zq, tol);
    CHECK(with_z.holds == with_zq.holds);
  }
}

TEST_CASE("omega_blocks rejects a covariance that is not positive definite") {
  ModelInstance m = ts::example1();
  m.Omega(2, 2) = -1.0;
  const Matrix Z = null_basis(m.X, tol).Z;
  CHECK_THROWS_AS(omega_blocks(m.X, Z, m.Omega, tol), PreconditionError);
}

TEST_CASE("user-supplied Z is honored when valid and rejected otherwise") {
  ModelInstance m = ts::example3();
  CHECK(equality_residual(resolve_null_basis(m, tol), *m.Z) == 0.0);

  m.Z = Matrix{{1.0}, {1.0}, {1.0}};  // not orthogonal to X
  CHECK_THROWS_AS(resolve_null_basis(m, tol), PreconditionError);
}
