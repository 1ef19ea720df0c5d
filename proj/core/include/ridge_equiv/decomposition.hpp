#pragma once

#include "ridge_equiv/model.hpp"

namespace ridge_equiv {

/// Basis of the orthogonal complement of the column space of X:
/// X^T Z = 0 with rank(Z) = n - k.
struct NullBasis {
  Matrix Z;
};

/// Coordinates of Omega in the (X, Z) basis,
///
///   Omega = (X Z) [Gamma Xi; Xi^T Delta] (X Z)^T,
///
/// together with the blocks of the matching inverse representation:
/// A = (Gamma - Xi Delta^{-1} Xi^T)^{-1}, B = -A Xi Delta^{-1}, C = B^T,
/// D = Delta^{-1} + B^T A^{-1} B.
struct BlockDecomposition {
  Matrix Gamma;  // k x k, SPD
  Matrix Xi;     // k x (n-k)
  Matrix Delta;  // (n-k) x (n-k), SPD
  Matrix A;      // k x k, SPD
  Matrix B;      // k x (n-k)
  Matrix C;      // (n-k) x k
  Matrix D;      // (n-k) x (n-k)
};

/// Canonical null-space basis: the orthonormal complement columns of a full
/// Householder QR of X, with each column's sign fixed so its first
/// non-negligible entry is positive. Deterministic for fixed X.
NullBasis null_basis(const Matrix& X, const ToleranceConfig& tol);

/// Empty iff Z is a valid null-space basis for X.
std::vector<Violation> validate_null_basis(const Matrix& X, const Matrix& Z,
                                           const ToleranceConfig& tol);

/// The instance's own Z when present (validated), otherwise the canonical one.
Matrix resolve_null_basis(const ModelInstance& instance,
                          const ToleranceConfig& tol);

/// Gamma = (X^T X)^{-1} X^T Omega X (X^T X)^{-1}, Xi and Delta likewise
/// contracted through (Z^T Z)^{-1}. Throws PreconditionError when Delta or the
/// Schur complement Gamma - Xi Delta^{-1} Xi^T is not positive definite
/// (i.e. Omega is not SPD).
BlockDecomposition omega_blocks(const Matrix& X, const Matrix& Z,
                                const Matrix& Omega,
                                const ToleranceConfig& tol);

/// X Gamma X^T + X Xi Z^T + Z Xi^T X^T + Z Delta Z^T.
Matrix reconstruct_omega(const Matrix& X, const Matrix& Z,
                         const BlockDecomposition& blocks);

/// Omega^{-1} assembled from the inverse blocks:
/// (X(X^T X)^{-1}  Z(Z^T Z)^{-1}) [A B; C D] (...)^T.
Matrix omega_inverse_via_blocks(const Matrix& X, const Matrix& Z,
                                const BlockDecomposition& blocks);

}  // namespace ridge_equiv
