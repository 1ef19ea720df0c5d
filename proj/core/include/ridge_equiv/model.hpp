#pragma once

#include "ridge_equiv/tolerance.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ridge_equiv {

/// One instance of the linear model y = X b + e with Cov(e) = sigma2 * Omega,
/// together with the two penalty matrices being compared. X must have full
/// column rank, Omega must be symmetric positive definite, K1 and K2 symmetric
/// positive semidefinite. An explicit null-space basis Z may be attached; when
/// absent a canonical one is derived from X.
struct ModelInstance {
  Index n = 0;
  Index k = 0;
  Matrix X;      // n x k design
  Matrix Omega;  // n x n error covariance structure
  Matrix K1;     // k x k penalty paired with Omega weighting
  Matrix K2;     // k x k penalty paired with identity weighting
  std::optional<Vector> y;
  std::optional<Vector> beta;
  std::optional<double> sigma2;
  std::optional<Matrix> Z;  // n x (n-k) user-supplied null-space basis
};

struct Violation {
  std::string invariant;
  double residual = 0.0;  // measured quantity, e.g. min eigenvalue of Omega
};

struct Condition {
  std::string name;
  double residual = 0.0;
  bool holds = false;
};

/// Per-condition verdicts plus the tolerance that produced them. The verdict
/// is always the conjunction of the condition flags.
struct CheckReport {
  bool verdict = false;
  std::vector<Condition> conditions;
  ToleranceConfig tolerance_used;
  std::optional<Matrix> witness;

  static CheckReport make(std::vector<Condition> conditions,
                          const ToleranceConfig& tol,
                          std::optional<Matrix> witness = std::nullopt);
};

/// Empty iff all ModelInstance invariants hold. Dimensionally inconsistent
/// input is a hard error (DimensionError), not a violation.
std::vector<Violation> validate(const ModelInstance& instance,
                                const ToleranceConfig& tol);

/// Throws PreconditionError listing the violations unless validate is empty.
void require_valid(const ModelInstance& instance, const ToleranceConfig& tol);

}  // namespace ridge_equiv
