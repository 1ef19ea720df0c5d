#pragma once

#include "ridge_equiv/model.hpp"

namespace ridge_equiv {

enum class PhiKind { Identity, Omega };

/// The linear map behind a general ridge estimate:
///   b_hat = P y with P = (X^T Phi^{-1} X + K)^{-1} X^T Phi^{-1}.
/// K = 0 with Phi = Omega gives the BLUE map, K = 0 with Phi = I the OLS map.
struct RidgeMap {
  Matrix P;  // k x n
  PhiKind phi_kind = PhiKind::Identity;
  Matrix K;  // k x k penalty used
};

/// y - X b_hat = R y with R = I - X P.
struct ResidualMap {
  Matrix R;  // n x n
};

RidgeMap ridge_map(const Matrix& X, const Matrix& Phi, const Matrix& K,
                   PhiKind kind);

ResidualMap residual_map(const Matrix& X, const RidgeMap& map);

/// |(X^T Phi^{-1} X + K) P - X^T Phi^{-1}| relative; validates a RidgeMap
/// against its factors.
double map_validity_residual(const Matrix& X, const Matrix& Phi,
                             const RidgeMap& map);

Vector estimate(const RidgeMap& map, const Vector& y);

/// Generalized residual sum of squares (y - X b_hat)^T Phi^{-1} (y - X b_hat).
double rss(const Matrix& X, const Matrix& Phi, const Matrix& K,
           const Vector& y);

/// The symmetric n x n matrix Q with rss = y^T Q y, i.e. R^T Phi^{-1} R for
/// the companion residual map.
Matrix rss_form_matrix(const Matrix& X, const Matrix& Phi, const Matrix& K);

/// M with E[b_hat] = M beta, i.e. M = P X. Identity for K = 0.
Matrix expectation_map(const Matrix& X, const Matrix& Phi, const Matrix& K);

/// E[b_hat] - beta, computed both as (P X - I) beta and as
/// -(X^T Phi^{-1} X + K)^{-1} K beta; the two routes are cross-checked and a
/// DiagnosticError is thrown if they disagree beyond tolerance.
Vector bias(const Matrix& X, const Matrix& Phi, const Matrix& K,
            const Vector& beta, const ToleranceConfig& tol = {});

/// P Omega_true P^T, the estimator covariance per unit sigma^2.
Matrix estimator_covariance(const Matrix& X, const Matrix& Omega_true,
                            const Matrix& Phi, const Matrix& K);

/// Second moment of the difference between the identity-weighted and the
/// Omega-weighted ridge estimators at the given (beta, sigma2):
///   (P2 - P1) X beta beta^T X^T (P2 - P1)^T + sigma2 (P2 - P1) Omega (P2 - P1)^T.
Matrix d1_matrix(const ModelInstance& instance, const Vector& beta,
                 double sigma2);

/// Numerical rank of the (symmetric PSD) difference matrix.
Index d1_rank(const Matrix& d1, const ToleranceConfig& tol);

}  // namespace ridge_equiv
