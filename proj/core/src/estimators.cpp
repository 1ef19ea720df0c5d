#include "ridge_equiv/estimators.hpp"

namespace ridge_equiv {

namespace {

Eigen::LLT<Matrix> phi_factor(const Matrix& Phi) {
  Eigen::LLT<Matrix> llt(0.5 * (Phi + Phi.transpose()));
  if (llt.info() != Eigen::Success) {
    throw PreconditionError("Phi is not positive definite");
  }
  return llt;
}

Matrix map_matrix(const Matrix& X, const Matrix& Phi, const Matrix& K) {
  const Index n = X.rows();
  const Index k = X.cols();
  if (Phi.rows() != n || Phi.cols() != n) {
    throw DimensionError("ridge_map: Phi must be n x n");
  }
  if (K.rows() != k || K.cols() != k) {
    throw DimensionError("ridge_map: K must be k x k");
  }

  // W = Phi^{-1} X without forming Phi^{-1}.
  const Matrix W = phi_factor(Phi).solve(X);
  Matrix M = X.transpose() * W + K;
  M = 0.5 * (M + M.transpose()).eval();
  Eigen::LLT<Matrix> Mllt(M);
  if (Mllt.info() != Eigen::Success) {
    throw PreconditionError("ridge_map: X^T Phi^{-1} X + K is singular");
  }
  return Mllt.solve(W.transpose());
}

}  // namespace

RidgeMap ridge_map(const Matrix& X, const Matrix& Phi, const Matrix& K,
                   PhiKind kind) {
  return {map_matrix(X, Phi, K), kind, K};
}

ResidualMap residual_map(const Matrix& X, const RidgeMap& map) {
  if (map.P.rows() != X.cols() || map.P.cols() != X.rows()) {
    throw DimensionError("residual_map: P must be k x n");
  }
  return {Matrix::Identity(X.rows(), X.rows()) - X * map.P};
}

double map_validity_residual(const Matrix& X, const Matrix& Phi,
                             const RidgeMap& map) {
  const Matrix W = phi_factor(Phi).solve(X);  // Phi^{-1} X
  const Matrix lhs = (X.transpose() * W + map.K) * map.P;
  return equality_residual(lhs, W.transpose());
}

Vector estimate(const RidgeMap& map, const Vector& y) {
  if (y.size() != map.P.cols()) {
    throw DimensionError("estimate: y must have length n");
  }
  return map.P * y;
}

double rss(const Matrix& X, const Matrix& Phi, const Matrix& K,
           const Vector& y) {
  if (y.size() != X.rows()) {
    throw DimensionError("rss: y must have length n");
  }
  const Matrix P = map_matrix(X, Phi, K);
  const Vector r = y - X * (P * y);
  return r.dot(phi_factor(Phi).solve(r));
}

Matrix rss_form_matrix(const Matrix& X, const Matrix& Phi, const Matrix& K) {
  const Matrix R =
      Matrix::Identity(X.rows(), X.rows()) - X * map_matrix(X, Phi, K);
  Matrix Q = R.transpose() * phi_factor(Phi).solve(R);
  return 0.5 * (Q + Q.transpose());
}

Matrix expectation_map(const Matrix& X, const Matrix& Phi, const Matrix& K) {
  return map_matrix(X, Phi, K) * X;
}

Vector bias(const Matrix& X, const Matrix& Phi, const Matrix& K,
            const Vector& beta, const ToleranceConfig& tol) {
  if (beta.size() != X.cols()) {
    throw DimensionError("bias: beta must have length k");
  }
  const Matrix M = expectation_map(X, Phi, K);
  const Vector via_expectation = M * beta - beta;

  const Matrix W = phi_factor(Phi).solve(X);
  Matrix G = X.transpose() * W + K;
  G = 0.5 * (G + G.transpose()).eval();
  const Vector direct = -Eigen::LLT<Matrix>(G).solve(K * beta);

  if (!approx_equal(via_expectation, direct, tol).holds) {
    throw DiagnosticError("bias: the two computation routes disagree");
  }
  return direct;
}

Matrix estimator_covariance(const Matrix& X, const Matrix& Omega_true,
                            const Matrix& Phi, const Matrix& K) {
  if (Omega_true.rows() != X.rows() || Omega_true.cols() != X.rows()) {
    throw DimensionError("estimator_covariance: Omega_true must be n x n");
  }
  const Matrix P = map_matrix(X, Phi, K);
  Matrix cov = P * Omega_true * P.transpose();
  return 0.5 * (cov + cov.transpose());
}

Matrix d1_matrix(const ModelInstance& instance, const Vector& beta,
                 double sigma2) {
  if (beta.size() != instance.k) {
    throw DimensionError("d1_matrix: beta must have length k");
  }
  if (!(sigma2 > 0.0)) {
    throw PreconditionError("d1_matrix: sigma2 must be positive");
  }
  const Matrix P1 = map_matrix(instance.X, instance.Omega, instance.K1);
  const Matrix P2 = map_matrix(
      instance.X, Matrix::Identity(instance.n, instance.n), instance.K2);
  const Matrix diff = P2 - P1;
  const Vector mean_gap = diff * instance.X * beta;
  Matrix d1 = mean_gap * mean_gap.transpose() +
              sigma2 * diff * instance.Omega * diff.transpose();
  return 0.5 * (d1 + d1.transpose());
}

Index d1_rank(const Matrix& d1, const ToleranceConfig& tol) {
  if (d1.rows() != d1.cols()) {
    throw DimensionError("d1_rank: matrix not square");
  }
  // The relative cutoff alone would report full rank for a matrix that is
  // zero up to roundoff; the absolute floor treats such matrices as zero.
  const Eigen::VectorXd sv = d1.jacobiSvd().singularValues();
  const double cutoff = std::max(tol.rank_rel * sv(0), tol.abs_eq);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

}  // namespace ridge_equiv
