#include "ridge_equiv/equivalence.hpp"

namespace ridge_equiv {

namespace {

Matrix identity(Index n) { return Matrix::Identity(n, n); }

Matrix omega_map(const ModelInstance& m) {
  return ridge_map(m.X, m.Omega, m.K1, PhiKind::Omega).P;
}

Matrix identity_map(const ModelInstance& m) {
  return ridge_map(m.X, identity(m.n), m.K2, PhiKind::Identity).P;
}

Matrix spd_solve(const Matrix& S, const Matrix& rhs) {
  Eigen::LLT<Matrix> llt(0.5 * (S + S.transpose()));
  if (llt.info() != Eigen::Success) {
    throw PreconditionError("SPD solve failed: matrix not positive definite");
  }
  return llt.solve(rhs);
}

/// A^{-1} = Gamma - Xi Delta^{-1} Xi^T, assembled from the blocks.
Matrix a_inverse(const BlockDecomposition& blocks) {
  Matrix ainv = blocks.Gamma -
                blocks.Xi * spd_solve(blocks.Delta, blocks.Xi.transpose());
  return 0.5 * (ainv + ainv.transpose());
}

Condition cond(std::string name, const ApproxResult& r) {
  return {std::move(name), r.residual, r.holds};
}

ApproxResult bias_condition(const ModelInstance& m,
                            const BlockDecomposition& blocks,
                            const ToleranceConfig& tol) {
  const Matrix lhs = m.X.transpose() * m.X * a_inverse(blocks) * m.K1;
  return approx_equal(lhs, m.K2, tol);
}

ApproxResult bias_cov_second_condition(const ModelInstance& m,
                                       const BlockDecomposition& blocks,
                                       const ToleranceConfig& tol) {
  const Index k = m.k;
  Matrix W = blocks.Xi * spd_solve(blocks.Delta, blocks.Xi.transpose());
  W = 0.5 * (W + W.transpose()).eval();
  const Matrix lhs = blocks.A + m.K1 * W * m.K1;
  const Matrix gamma_inv = spd_solve(blocks.Gamma, identity(k));
  const Matrix rhs =
      (identity(k) - m.K1 * W) * gamma_inv * (identity(k) - W * m.K1);
  return approx_equal(lhs, rhs, tol);
}

EquivalenceVerdict to_verdict(CheckReport report, const OracleResult& oracle) {
  EquivalenceVerdict v;
  v.theorem_holds = report.verdict;
  v.oracle_holds = oracle.holds;
  v.oracle_residual = oracle.residual;
  v.agreement = (v.theorem_holds == v.oracle_holds);
  v.report = std::move(report);
  return v;
}

}  // namespace

OracleResult oracle_estimator_equality(const ModelInstance& instance,
                                       const ToleranceConfig& tol) {
  const auto r = approx_equal(omega_map(instance), identity_map(instance), tol);
  return {r.holds, r.residual};
}

OracleResult oracle_rss_equality(const ModelInstance& instance,
                                 const ToleranceConfig& tol) {
  const Matrix q_omega = rss_form_matrix(instance.X, instance.Omega, instance.K1);
  const Matrix q_identity =
      rss_form_matrix(instance.X, identity(instance.n), instance.K2);
  const auto r = approx_equal(q_omega, q_identity, tol);
  return {r.holds, r.residual};
}

CheckReport check_blue_ols(const Matrix& X, const Matrix& Omega,
                           const ToleranceConfig& tol) {
  const Index k = X.cols();
  const Matrix Z = null_basis(X, tol).Z;
  const auto blocks = omega_blocks(X, Z, Omega, tol);

  const auto xi_zero =
      approx_equal(blocks.Xi, Matrix::Zero(blocks.Xi.rows(), blocks.Xi.cols()),
                   tol);

  const Matrix OX = Omega * X;
  Matrix augmented(X.rows(), 2 * k);
  augmented.leftCols(k) = X;
  augmented.rightCols(k) = OX;
  const Eigen::VectorXd sv = augmented.jacobiSvd().singularValues();
  const double rank_residual = sv(k) / sv(0);
  const bool rank_holds = numerical_rank(augmented, tol) == k;

  const Matrix G = OX.colPivHouseholderQr().solve(X);
  const auto solve_fit = approx_equal(OX * G, X, tol);

  if (xi_zero.holds != rank_holds || xi_zero.holds != solve_fit.holds) {
    throw DiagnosticError(
        "check_blue_ols: the three equivalent routes disagree; the instance "
        "is numerically ill-conditioned near the decision boundary");
  }

  std::vector<Condition> conditions{
      cond("Rcond", xi_zero),
      {"Kcond1", rank_residual, rank_holds},
      cond("Kcond2", solve_fit),
  };
  std::optional<Matrix> witness;
  if (xi_zero.holds) witness = G;
  return CheckReport::make(std::move(conditions), tol, std::move(witness));
}

EquivalenceVerdict check_gre_equality(const ModelInstance& instance,
                                      const ToleranceConfig& tol) {
  const Matrix Z = resolve_null_basis(instance, tol);
  const auto blocks = omega_blocks(instance.X, Z, instance.Omega, tol);

  const auto xi_zero =
      approx_equal(blocks.Xi, Matrix::Zero(blocks.Xi.rows(), blocks.Xi.cols()),
                   tol);

  Matrix G;
  if (xi_zero.holds) {
    // Constructive witness G = (Gamma X^T X)^{-1}.
    const Matrix M = blocks.Gamma * (instance.X.transpose() * instance.X);
    G = M.partialPivLu().solve(identity(instance.k));
  } else {
    // Least-squares G over the stacked system, for residual reporting only.
    Matrix lhs(instance.n + instance.k, instance.k);
    lhs.topRows(instance.n) = instance.Omega * instance.X;
    lhs.bottomRows(instance.k) = instance.K2;
    Matrix rhs(instance.n + instance.k, instance.k);
    rhs.topRows(instance.n) = instance.X;
    rhs.bottomRows(instance.k) = instance.K1;
    G = lhs.colPivHouseholderQr().solve(rhs);
  }

  const auto x_eq = approx_equal(instance.Omega * instance.X * G, instance.X, tol);
  const auto k_eq = approx_equal(instance.K1, instance.K2 * G, tol);

  std::vector<Condition> conditions{
      cond("Rcond", xi_zero),
      cond("Mcond1_X", x_eq),
      cond("Mcond1_K", k_eq),
  };
  CheckReport report = CheckReport::make(std::move(conditions), tol);
  if (report.verdict) report.witness = G;
  return to_verdict(std::move(report), oracle_estimator_equality(instance, tol));
}

EquivalenceVerdict check_gre_equality_via_bias(const ModelInstance& instance,
                                               const ToleranceConfig& tol) {
  const Matrix Z = resolve_null_basis(instance, tol);
  const auto blocks = omega_blocks(instance.X, Z, instance.Omega, tol);
  const auto xi_zero =
      approx_equal(blocks.Xi, Matrix::Zero(blocks.Xi.rows(), blocks.Xi.cols()),
                   tol);
  const auto th33 = bias_condition(instance, blocks, tol);
  CheckReport report = CheckReport::make(
      {cond("Rcond", xi_zero), cond("Th33", th33)}, tol);
  return to_verdict(std::move(report), oracle_estimator_equality(instance, tol));
}

CheckReport check_bias_equality(const ModelInstance& instance,
                                const ToleranceConfig& tol) {
  const Matrix Z = resolve_null_basis(instance, tol);
  const auto blocks = omega_blocks(instance.X, Z, instance.Omega, tol);
  const auto th33 = bias_condition(instance, blocks, tol);

  const Matrix m_omega = expectation_map(instance.X, instance.Omega, instance.K1);
  const Matrix m_identity =
      expectation_map(instance.X, identity(instance.n), instance.K2);
  const auto direct = approx_equal(m_omega, m_identity, tol);

  return CheckReport::make({cond("Th33", th33), cond("biascond", direct)}, tol);
}

CheckReport check_bias_cov_equality(const ModelInstance& instance,
                                    const ToleranceConfig& tol) {
  const Matrix Z = resolve_null_basis(instance, tol);
  const auto blocks = omega_blocks(instance.X, Z, instance.Omega, tol);
  const auto th33 = bias_condition(instance, blocks, tol);
  const auto pr35 = bias_cov_second_condition(instance, blocks, tol);

  const Matrix m_omega = expectation_map(instance.X, instance.Omega, instance.K1);
  const Matrix m_identity =
      expectation_map(instance.X, identity(instance.n), instance.K2);
  const auto bias_direct = approx_equal(m_omega, m_identity, tol);

  const Matrix cov_omega = estimator_covariance(instance.X, instance.Omega,
                                                instance.Omega, instance.K1);
  const Matrix cov_identity = estimator_covariance(
      instance.X, instance.Omega, identity(instance.n), instance.K2);
  const auto cov_direct = approx_equal(cov_omega, cov_identity, tol);

  return CheckReport::make({cond("Th33", th33), cond("Pr35", pr35),
                            cond("biascond", bias_direct),
                            cond("Covcond", cov_direct)},
                           tol);
}

CheckReport check_d1_zero(const ModelInstance& instance,
                          std::span<const Vector> beta_samples,
                          std::span<const double> sigma2_samples,
                          const ToleranceConfig& tol) {
  if (beta_samples.empty() || beta_samples.size() != sigma2_samples.size()) {
    throw PreconditionError(
        "check_d1_zero: sample lists must be nonempty and of equal length");
  }
  const Matrix zero = Matrix::Zero(instance.k, instance.k);
  bool all_zero = true;
  double max_residual = 0.0;
  for (std::size_t i = 0; i < beta_samples.size(); ++i) {
    const Matrix d1 = d1_matrix(instance, beta_samples[i], sigma2_samples[i]);
    const auto r = approx_equal(d1, zero, tol);
    all_zero = all_zero && r.holds;
    max_residual = std::max(max_residual, r.residual);
  }

  const Matrix Z = resolve_null_basis(instance, tol);
  const auto blocks = omega_blocks(instance.X, Z, instance.Omega, tol);
  const auto th33 = bias_condition(instance, blocks, tol);
  const auto pr35 = bias_cov_second_condition(instance, blocks, tol);

  return CheckReport::make({Condition{"d1_zero", max_residual, all_zero},
                            cond("Th33", th33), cond("Pr35", pr35)},
                           tol);
}

CheckReport check_idempotent_necessity(const ModelInstance& instance,
                                       const ToleranceConfig& tol) {
  const auto idem1 = approx_equal(instance.K1 * instance.K1, instance.K1, tol);
  const auto idem2 = approx_equal(instance.K2 * instance.K2, instance.K2, tol);
  if (!idem1.holds || !idem2.holds || !is_psd(instance.K1, tol) ||
      !is_psd(instance.K2, tol)) {
    throw PreconditionError(
        "check_idempotent_necessity: K1 and K2 must be idempotent PSD");
  }

  const auto antecedent = oracle_estimator_equality(instance, tol);
  const CheckReport obe = check_blue_ols(instance.X, instance.Omega, tol);
  const double obe_residual = obe.conditions.front().residual;
  const auto k_eq = approx_equal(instance.K1, instance.K2, tol);

  return CheckReport::make(
      {Condition{"R2E_antecedent", antecedent.residual, true},
       Condition{"OBE_if_R2E", obe_residual,
                 !antecedent.holds || obe.verdict},
       Condition{"K1_eq_K2_if_R2E", k_eq.residual,
                 !antecedent.holds || k_eq.holds}},
      tol);
}

CheckReport check_rss0_equality(const Matrix& X, const Matrix& Z,
                                const Matrix& Omega,
                                const ToleranceConfig& tol) {
  const Index n = X.rows();
  const auto delta_eq = approx_equal(Z.transpose() * Omega * Z,
                                     Z.transpose() * Z, tol);

  const Matrix Px = spd_solve(X.transpose() * X, X.transpose());
  const Matrix N = identity(n) - X * Px;
  const auto kruskal =
      approx_equal(N * (Omega - identity(n)) * N, Matrix::Zero(n, n), tol);

  ModelInstance zero_penalty;
  zero_penalty.n = n;
  zero_penalty.k = X.cols();
  zero_penalty.X = X;
  zero_penalty.Omega = Omega;
  zero_penalty.K1 = Matrix::Zero(X.cols(), X.cols());
  zero_penalty.K2 = Matrix::Zero(X.cols(), X.cols());
  const auto oracle = oracle_rss_equality(zero_penalty, tol);

  return CheckReport::make(
      {cond("Mcond23", delta_eq), cond("Kcond", kruskal),
       Condition{"oracle_rss_equality", oracle.residual, oracle.holds}},
      tol);
}

EquivalenceVerdict check_rss_equality(const ModelInstance& instance,
                                      const ToleranceConfig& tol) {
  const Matrix Z = resolve_null_basis(instance, tol);
  const auto blocks = omega_blocks(instance.X, Z, instance.Omega, tol);

  // Weighted-penalty condition, kept in its symmetric K-sandwich form.
  const Matrix W1 = spd_solve(blocks.A + instance.K1, instance.K1);
  const Matrix lhs21 = W1.transpose() * blocks.A * W1;
  const Matrix XtX = instance.X.transpose() * instance.X;
  const Matrix W2 = spd_solve(XtX + instance.K2, instance.K2);
  const Matrix rhs21 = W2.transpose() * XtX * W2;
  const auto c21 = approx_equal(lhs21, rhs21, tol);

  const Matrix cross = instance.K2 * W2 * blocks.Xi;
  const auto c22 =
      approx_equal(cross, Matrix::Zero(cross.rows(), cross.cols()), tol);

  const auto c23 =
      approx_equal(Z.transpose() * instance.Omega * Z, Z.transpose() * Z, tol);

  CheckReport report = CheckReport::make(
      {cond("Mcond21", c21), cond("Mcond22", c22), cond("Mcond23", c23)}, tol);
  return to_verdict(std::move(report), oracle_rss_equality(instance, tol));
}

EquivalenceVerdict check_rss_equality_same_k(const ModelInstance& instance,
                                             const ToleranceConfig& tol) {
  const auto same = approx_equal(instance.K1, instance.K2, tol);
  if (!same.holds) {
    throw PreconditionError("check_rss_equality_same_k: requires K1 = K2");
  }
  if (!is_spd(instance.K1, tol)) {
    throw PreconditionError(
        "check_rss_equality_same_k: requires a positive definite K");
  }
  const Matrix& K = instance.K1;

  const Matrix Z = resolve_null_basis(instance, tol);
  const auto blocks = omega_blocks(instance.X, Z, instance.Omega, tol);
  const Matrix XtX = instance.X.transpose() * instance.X;
  const Matrix XtX_inv = spd_solve(XtX, identity(instance.k));
  const Matrix gamma_inv = spd_solve(blocks.Gamma, identity(instance.k));

  const auto c431 =
      approx_equal(K * (blocks.Gamma - XtX_inv) * K, XtX - gamma_inv, tol);
  const auto c432_xi =
      approx_equal(blocks.Xi, Matrix::Zero(blocks.Xi.rows(), blocks.Xi.cols()),
                   tol);
  const auto c432_delta =
      approx_equal(Z.transpose() * instance.Omega * Z, Z.transpose() * Z, tol);

  CheckReport report = CheckReport::make(
      {cond("Cr431", c431), cond("Cr432_Xi", c432_xi),
       cond("Cr432_Delta", c432_delta)},
      tol);
  return to_verdict(std::move(report), oracle_rss_equality(instance, tol));
}

CheckReport check_pd_special(const ModelInstance& instance,
                             const ToleranceConfig& tol) {
  const auto same = approx_equal(instance.K1, instance.K2, tol);
  if (same.holds) {
    if (!is_spd(instance.K1, tol)) {
      throw PreconditionError(
          "check_pd_special: equal penalties must be positive definite");
    }
    const auto r = approx_equal(instance.Omega * instance.X, instance.X, tol);
    return CheckReport::make({cond("Cor32ii", r)}, tol);
  }
  if (!is_spd(instance.K1, tol) || !is_spd(instance.K2, tol)) {
    throw PreconditionError(
        "check_pd_special: both penalties must be positive definite");
  }
  const Matrix K2inv_K1 = spd_solve(instance.K2, instance.K1);
  const auto r =
      approx_equal(instance.Omega * instance.X * K2inv_K1, instance.X, tol);
  return CheckReport::make({cond("Cor32i", r)}, tol);
}

}  // namespace ridge_equiv
