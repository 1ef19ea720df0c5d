#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace ridge_equiv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numeric policy shared by every approximate predicate in the library.
///
/// Matrix equality is relative Frobenius with an absolute floor; rank uses a
/// singular-value cutoff relative to the largest singular value; semidefinite
/// checks tolerate a small negative eigenvalue relative to the spectral norm.
struct ToleranceConfig {
  double rel_eq = 1e-9;
  double abs_eq = 1e-12;
  double rank_rel = 1e-10;
  double psd_floor = -1e-10;  // factor applied to the spectral norm; <= 0

  /// Throws std::invalid_argument unless rel_eq, abs_eq, rank_rel are
  /// strictly positive and psd_floor <= 0.
  void require_valid() const;
};

/// Mismatched shapes where the caller's contract promises agreement.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An operation's stated precondition does not hold for the given inputs.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Independent numerical routes that must agree disagreed beyond tolerance.
/// Signals numerical trouble with the inputs, not a mathematical verdict.
struct DiagnosticError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ApproxResult {
  bool holds = false;
  double residual = 0.0;
};

/// residual = |a - b|_F / max(1, |a|_F, |b|_F)
double equality_residual(const Matrix& a, const Matrix& b);

/// holds iff the relative residual is <= tol.rel_eq or |a - b|_F <= tol.abs_eq.
ApproxResult approx_equal(const Matrix& a, const Matrix& b,
                          const ToleranceConfig& tol);

/// Largest singular value (zero for an empty matrix).
double spectral_norm(const Matrix& m);

double symmetry_residual(const Matrix& m);
bool is_symmetric(const Matrix& m, const ToleranceConfig& tol);

/// Smallest eigenvalue of the symmetrized input.
double min_eigenvalue(const Matrix& m);

/// PSD via eigenvalues: min eigenvalue >= psd_floor * spectral norm. A zero
/// matrix passes. Eigenvalues are used instead of Cholesky so that singular
/// positive semidefinite inputs are accepted.
bool is_psd(const Matrix& m, const ToleranceConfig& tol);

/// Positive definite: symmetric and min eigenvalue > rank_rel * spectral norm.
bool is_spd(const Matrix& m, const ToleranceConfig& tol);

/// Count of singular values above rank_rel * (largest singular value).
Index numerical_rank(const Matrix& m, const ToleranceConfig& tol);

}  // namespace ridge_equiv
