#pragma once

#include "ridge_equiv/decomposition.hpp"
#include "ridge_equiv/estimators.hpp"

#include <span>

namespace ridge_equiv {

struct OracleResult {
  bool holds = false;
  double residual = 0.0;
};

/// Exact decision of "b_hat(Omega, K1) = b_hat(I, K2) for every y" by
/// comparing the two k x n estimator maps. Equality of linear maps is
/// equivalent to equality of their values on all of R^n.
OracleResult oracle_estimator_equality(const ModelInstance& instance,
                                       const ToleranceConfig& tol);

/// Exact decision of "RSS(Omega, K1) = RSS(I, K2) for every y" by comparing
/// the two symmetric quadratic-form matrices S^T Omega^{-1} S and T T.
OracleResult oracle_rss_equality(const ModelInstance& instance,
                                 const ToleranceConfig& tol);

/// A closed-form criterion evaluated next to the map-level oracle deciding the
/// same statement. `agreement` is the library's central meta-invariant: it
/// must hold on every valid instance.
struct EquivalenceVerdict {
  bool oracle_holds = false;
  bool theorem_holds = false;
  CheckReport report;  // criterion-route conditions only
  bool agreement = false;
  double oracle_residual = 0.0;
};

/// Weighted-equals-ordinary least squares (zero penalties) via three
/// equivalent routes: Xi = 0 in the block decomposition ("Rcond"), the column
/// space equality rank(X | Omega X) = k ("Kcond1"), and solvability of
/// Omega X G = X ("Kcond2"). Routes must agree; DiagnosticError otherwise.
/// The witness G is attached when the verdict is true.
CheckReport check_blue_ols(const Matrix& X, const Matrix& Omega,
                           const ToleranceConfig& tol);

/// Estimator-map equality via the witness criterion: Xi = 0 and, with
/// G = (Gamma X^T X)^{-1}, both X = Omega X G ("Mcond1_X") and K1 = K2 G
/// ("Mcond1_K"). When Xi != 0 a least-squares G is used only to report
/// residuals.
EquivalenceVerdict check_gre_equality(const ModelInstance& instance,
                                      const ToleranceConfig& tol);

/// Estimator-map equality via "Rcond" (Xi = 0) plus the bias condition
/// "Th33" (X^T X A^{-1} K1 = K2).
EquivalenceVerdict check_gre_equality_via_bias(const ModelInstance& instance,
                                               const ToleranceConfig& tol);

/// Bias equality for all beta: "Th33", cross-checked against direct equality
/// of the two expectation maps ("biascond").
CheckReport check_bias_equality(const ModelInstance& instance,
                                const ToleranceConfig& tol);

/// Bias and covariance equality: "Th33" and "Pr35"
/// (A + K1 Xi Delta^{-1} Xi^T K1 =
///  (I - K1 Xi Delta^{-1} Xi^T) Gamma^{-1} (I - Xi Delta^{-1} Xi^T K1)),
/// cross-checked against the direct expectation-map and covariance
/// comparisons ("biascond", "Covcond").
CheckReport check_bias_cov_equality(const ModelInstance& instance,
                                    const ToleranceConfig& tol);

/// d1 = 0 at every sampled (beta, sigma2) pair ("d1_zero"), reported next to
/// the closed-form pair "Th33" + "Pr35" it is equivalent to. The sample lists
/// are consumed pairwise and must be nonempty and of equal length.
CheckReport check_d1_zero(const ModelInstance& instance,
                          std::span<const Vector> beta_samples,
                          std::span<const double> sigma2_samples,
                          const ToleranceConfig& tol);

/// Necessity check for idempotent penalties: if the estimator maps coincide,
/// then the zero-penalty maps coincide and K1 = K2. The report carries an
/// informational row "R2E_antecedent" (holds = true, residual = map gap) and
/// the two implication rows "OBE_if_R2E" and "K1_eq_K2_if_R2E"; the verdict is
/// the conjunction of the implications. PreconditionError unless both
/// penalties are idempotent and PSD.
CheckReport check_idempotent_necessity(const ModelInstance& instance,
                                       const ToleranceConfig& tol);

/// Zero-penalty RSS equality: Z^T Omega Z = Z^T Z ("Mcond23", the
/// basis-invariant form of Delta = (Z^T Z)^{-1}), cross-checked against the
/// projector form N (Omega - I) N = 0 ("Kcond") and the quadratic-form oracle.
CheckReport check_rss0_equality(const Matrix& X, const Matrix& Z,
                                const Matrix& Omega,
                                const ToleranceConfig& tol);

/// RSS equality for general PSD penalties via the three conditions
/// "Mcond21" (K1 (A+K1)^{-1} A (A+K1)^{-1} K1 =
///            K2 (X^T X+K2)^{-1} X^T X (X^T X+K2)^{-1} K2),
/// "Mcond22" (K2 (X^T X+K2)^{-1} K2 Xi = 0) and "Mcond23".
EquivalenceVerdict check_rss_equality(const ModelInstance& instance,
                                      const ToleranceConfig& tol);

/// RSS equality for K1 = K2 = K positive definite via
/// "Cr431" (K {Gamma - (X^T X)^{-1}} K = X^T X - Gamma^{-1}) together with
/// "Cr432_Xi" and "Cr432_Delta". PreconditionError when K1 != K2 or K is
/// not positive definite.
EquivalenceVerdict check_rss_equality_same_k(const ModelInstance& instance,
                                             const ToleranceConfig& tol);

/// Positive definite penalty special cases: X = Omega X K2^{-1} K1
/// ("Cor32i"); for K1 = K2 this reduces to X = Omega X ("Cor32ii", evaluated
/// directly). PreconditionError when the applicable penalties are not
/// positive definite.
CheckReport check_pd_special(const ModelInstance& instance,
                             const ToleranceConfig& tol);

}  // namespace ridge_equiv
