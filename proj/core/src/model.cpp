#include "ridge_equiv/model.hpp"

#include <sstream>
#include <utility>

namespace ridge_equiv {

CheckReport CheckReport::make(std::vector<Condition> conditions,
                              const ToleranceConfig& tol,
                              std::optional<Matrix> witness) {
  CheckReport report;
  report.verdict = true;
  for (const auto& c : conditions) report.verdict = report.verdict && c.holds;
  report.conditions = std::move(conditions);
  report.tolerance_used = tol;
  report.witness = std::move(witness);
  return report;
}

namespace {

void check_dimensions(const ModelInstance& m) {
  if (m.n <= 0 || m.k <= 0 || m.k >= m.n) {
    throw DimensionError("ModelInstance: requires n > k >= 1");
  }
  if (m.X.rows() != m.n || m.X.cols() != m.k) {
    throw DimensionError("ModelInstance: X must be n x k");
  }
  if (m.Omega.rows() != m.n || m.Omega.cols() != m.n) {
    throw DimensionError("ModelInstance: Omega must be n x n");
  }
  if (m.K1.rows() != m.k || m.K1.cols() != m.k) {
    throw DimensionError("ModelInstance: K1 must be k x k");
  }
  if (m.K2.rows() != m.k || m.K2.cols() != m.k) {
    throw DimensionError("ModelInstance: K2 must be k x k");
  }
  if (m.y && m.y->size() != m.n) {
    throw DimensionError("ModelInstance: y must have length n");
  }
  if (m.beta && m.beta->size() != m.k) {
    throw DimensionError("ModelInstance: beta must have length k");
  }
  if (m.Z && (m.Z->rows() != m.n || m.Z->cols() != m.n - m.k)) {
    throw DimensionError("ModelInstance: Z must be n x (n-k)");
  }
}

void check_psd_pair(const Matrix& K, const char* label,
                    const ToleranceConfig& tol, std::vector<Violation>& out) {
  if (!is_symmetric(K, tol)) {
    out.push_back({std::string(label) + " not symmetric", symmetry_residual(K)});
    return;
  }
  if (!is_psd(K, tol)) {
    out.push_back({std::string(label) + " not positive semidefinite",
                   min_eigenvalue(K)});
  }
}

}  // namespace

std::vector<Violation> validate(const ModelInstance& instance,
                                const ToleranceConfig& tol) {
  tol.require_valid();
  check_dimensions(instance);

  std::vector<Violation> violations;

  {
    const Eigen::VectorXd sv = instance.X.jacobiSvd().singularValues();
    const double smin = sv(sv.size() - 1);
    if (numerical_rank(instance.X, tol) < instance.k) {
      violations.push_back({"X not full column rank", smin});
    }
  }

  if (!is_symmetric(instance.Omega, tol)) {
    violations.push_back(
        {"Omega not symmetric", symmetry_residual(instance.Omega)});
  } else if (!is_spd(instance.Omega, tol)) {
    violations.push_back(
        {"Omega not positive definite", min_eigenvalue(instance.Omega)});
  }

  check_psd_pair(instance.K1, "K1", tol, violations);
  check_psd_pair(instance.K2, "K2", tol, violations);

  if (instance.sigma2 && !(*instance.sigma2 > 0.0)) {
    violations.push_back({"sigma2 not positive", *instance.sigma2});
  }

  if (instance.Z) {
    const Matrix& Z = *instance.Z;
    const double cross = (instance.X.transpose() * Z).norm();
    const double scale = std::max(1.0, instance.X.norm() * Z.norm());
    if (cross / scale > tol.rel_eq && cross > tol.abs_eq) {
      violations.push_back({"Z not orthogonal to the columns of X", cross});
    }
    if (numerical_rank(Z, tol) < instance.n - instance.k) {
      violations.push_back(
          {"Z rank-deficient", Z.jacobiSvd().singularValues().minCoeff()});
    }
  }

  return violations;
}

void require_valid(const ModelInstance& instance, const ToleranceConfig& tol) {
  const auto violations = validate(instance, tol);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid model instance:";
  for (const auto& v : violations) {
    msg << " [" << v.invariant << " (residual " << v.residual << ")]";
  }
  throw PreconditionError(msg.str());
}

}  // namespace ridge_equiv
