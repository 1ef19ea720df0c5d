#include "ridge_equiv/decomposition.hpp"

#include <cmath>
#include <sstream>

namespace ridge_equiv {

namespace {

Matrix spd_inverse(const Matrix& m, const ToleranceConfig& tol,
                   const char* what) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() != Eigen::Success || !is_spd(sym, tol)) {
    throw PreconditionError(std::string(what) +
                            " is not positive definite; Omega is not SPD");
  }
  return llt.solve(Matrix::Identity(m.rows(), m.cols()));
}

}  // namespace

NullBasis null_basis(const Matrix& X, const ToleranceConfig& tol) {
  const Index n = X.rows();
  const Index k = X.cols();
  if (n <= k) {
    throw PreconditionError("null_basis: X must have more rows than columns");
  }
  if (numerical_rank(X, tol) < k) {
    throw PreconditionError("null_basis: X is rank-deficient");
  }

  Eigen::HouseholderQR<Matrix> qr(X);
  Matrix Q = qr.householderQ();
  Matrix Z = Q.rightCols(n - k);

  // Sign convention: first entry above 1e-8 of each (unit) column positive.
  for (Index j = 0; j < Z.cols(); ++j) {
    for (Index i = 0; i < Z.rows(); ++i) {
      if (std::abs(Z(i, j)) > 1e-8) {
        if (Z(i, j) < 0.0) Z.col(j) = -Z.col(j);
        break;
      }
    }
  }
  return {Z};
}

std::vector<Violation> validate_null_basis(const Matrix& X, const Matrix& Z,
                                           const ToleranceConfig& tol) {
  const Index n = X.rows();
  const Index k = X.cols();
  if (Z.rows() != n || Z.cols() != n - k) {
    throw DimensionError("validate_null_basis: Z must be n x (n-k)");
  }
  std::vector<Violation> violations;
  const double cross = (X.transpose() * Z).norm();
  const double scale = std::max(1.0, X.norm() * Z.norm());
  if (cross / scale > tol.rel_eq && cross > tol.abs_eq) {
    violations.push_back({"X^T Z != 0", cross});
  }
  if (numerical_rank(Z, tol) < n - k) {
    violations.push_back(
        {"Z rank-deficient", Z.jacobiSvd().singularValues().minCoeff()});
  }
  return violations;
}

Matrix resolve_null_basis(const ModelInstance& instance,
                          const ToleranceConfig& tol) {
  if (instance.Z) {
    const auto violations = validate_null_basis(instance.X, *instance.Z, tol);
    if (!violations.empty()) {
      std::ostringstream msg;
      msg << "supplied Z is not a valid null-space basis:";
      for (const auto& v : violations) msg << " [" << v.invariant << "]";
      throw PreconditionError(msg.str());
    }
    return *instance.Z;
  }
  return null_basis(instance.X, tol).Z;
}

BlockDecomposition omega_blocks(const Matrix& X, const Matrix& Z,
                                const Matrix& Omega,
                                const ToleranceConfig& tol) {
  const Index n = X.rows();
  const Index k = X.cols();
  if (Omega.rows() != n || Omega.cols() != n) {
    throw DimensionError("omega_blocks: Omega must be n x n");
  }
  if (Z.rows() != n || Z.cols() != n - k) {
    throw DimensionError("omega_blocks: Z must be n x (n-k)");
  }

  // Px = (X^T X)^{-1} X^T, Pz = (Z^T Z)^{-1} Z^T.
  const Matrix Px = Eigen::LLT<Matrix>(X.transpose() * X).solve(X.transpose());
  const Matrix Pz = Eigen::LLT<Matrix>(Z.transpose() * Z).solve(Z.transpose());

  BlockDecomposition blocks;
  const Matrix OmegaSym = 0.5 * (Omega + Omega.transpose());
  blocks.Gamma = Px * OmegaSym * Px.transpose();
  blocks.Gamma = 0.5 * (blocks.Gamma + blocks.Gamma.transpose()).eval();
  blocks.Xi = Px * OmegaSym * Pz.transpose();
  blocks.Delta = Pz * OmegaSym * Pz.transpose();
  blocks.Delta = 0.5 * (blocks.Delta + blocks.Delta.transpose()).eval();

  const Matrix DeltaInv = spd_inverse(blocks.Delta, tol, "Delta");
  Matrix schur = blocks.Gamma - blocks.Xi * DeltaInv * blocks.Xi.transpose();
  schur = 0.5 * (schur + schur.transpose()).eval();
  blocks.A = spd_inverse(schur, tol, "Gamma - Xi Delta^{-1} Xi^T");
  blocks.A = 0.5 * (blocks.A + blocks.A.transpose()).eval();
  blocks.B = -blocks.A * blocks.Xi * DeltaInv;
  blocks.C = blocks.B.transpose();
  blocks.D = DeltaInv + blocks.B.transpose() * schur * blocks.B;
  blocks.D = 0.5 * (blocks.D + blocks.D.transpose()).eval();
  return blocks;
}

Matrix reconstruct_omega(const Matrix& X, const Matrix& Z,
                         const BlockDecomposition& blocks) {
  if (blocks.Gamma.rows() != X.cols() || blocks.Delta.rows() != Z.cols() ||
      blocks.Xi.rows() != X.cols() || blocks.Xi.cols() != Z.cols()) {
    throw DimensionError("reconstruct_omega: block shapes inconsistent");
  }
  return X * blocks.Gamma * X.transpose() + X * blocks.Xi * Z.transpose() +
         Z * blocks.Xi.transpose() * X.transpose() +
         Z * blocks.Delta * Z.transpose();
}

Matrix omega_inverse_via_blocks(const Matrix& X, const Matrix& Z,
                                const BlockDecomposition& blocks) {
  const Index n = X.rows();
  const Index k = X.cols();
  if (Z.rows() != n || Z.cols() != n - k) {
    throw DimensionError("omega_inverse_via_blocks: Z must be n x (n-k)");
  }
  const Matrix Ux =
      Eigen::LLT<Matrix>(X.transpose() * X).solve(X.transpose()).transpose();
  const Matrix Uz =
      Eigen::LLT<Matrix>(Z.transpose() * Z).solve(Z.transpose()).transpose();

  Matrix U(n, n);
  U.leftCols(k) = Ux;
  U.rightCols(n - k) = Uz;

  Matrix inner(n, n);
  inner.topLeftCorner(k, k) = blocks.A;
  inner.topRightCorner(k, n - k) = blocks.B;
  inner.bottomLeftCorner(n - k, k) = blocks.C;
  inner.bottomRightCorner(n - k, n - k) = blocks.D;

  Matrix result = U * inner * U.transpose();
  return 0.5 * (result + result.transpose());
}

}  // namespace ridge_equiv
