#include "ridge_equiv/tolerance.hpp"

#include <algorithm>
#include <cmath>

namespace ridge_equiv {

void ToleranceConfig::require_valid() const {
  if (!(rel_eq > 0.0) || !(abs_eq > 0.0) || !(rank_rel > 0.0)) {
    throw std::invalid_argument(
        "ToleranceConfig: rel_eq, abs_eq, rank_rel must be strictly positive");
  }
  if (!(psd_floor <= 0.0)) {
    throw std::invalid_argument("ToleranceConfig: psd_floor must be <= 0");
  }
}

double equality_residual(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("equality_residual: shape mismatch");
  }
  const double diff = (a - b).norm();
  const double scale = std::max({1.0, a.norm(), b.norm()});
  return diff / scale;
}

ApproxResult approx_equal(const Matrix& a, const Matrix& b,
                          const ToleranceConfig& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("approx_equal: shape mismatch");
  }
  const double diff = (a - b).norm();
  const double scale = std::max({1.0, a.norm(), b.norm()});
  const double residual = diff / scale;
  return {residual <= tol.rel_eq || diff <= tol.abs_eq, residual};
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.jacobiSvd().singularValues()(0);
}

double symmetry_residual(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("symmetry_residual: matrix not square");
  }
  return equality_residual(m, m.transpose());
}

bool is_symmetric(const Matrix& m, const ToleranceConfig& tol) {
  const double diff = (m - m.transpose()).norm();
  const double scale = std::max(1.0, m.norm());
  return diff / scale <= tol.rel_eq || diff <= tol.abs_eq;
}

double min_eigenvalue(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("min_eigenvalue: matrix not square");
  }
  if (m.size() == 0) return 0.0;
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool is_psd(const Matrix& m, const ToleranceConfig& tol) {
  if (!is_symmetric(m, tol)) return false;
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
  return lo >= tol.psd_floor * hi;
}

bool is_spd(const Matrix& m, const ToleranceConfig& tol) {
  if (!is_symmetric(m, tol)) return false;
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
  return lo > 0.0 && lo > tol.rank_rel * hi;
}

Index numerical_rank(const Matrix& m, const ToleranceConfig& tol) {
  if (m.size() == 0) return 0;
  const Eigen::VectorXd sv = m.jacobiSvd().singularValues();
  const double cutoff = tol.rank_rel * sv(0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
  }
  return rank;
}

}  // namespace ridge_equiv
