#include "ridge_equiv/generators.hpp"

#include "ridge_equiv/decomposition.hpp"
#include "ridge_equiv/equivalence.hpp"

#include <cmath>
#include <string>

namespace ridge_equiv {

namespace {

constexpr int kRedrawBudget = 16;
constexpr double kConstructionResidual = 1e-10;

ToleranceConfig construction_tolerance() {
  ToleranceConfig tol;
  tol.rel_eq = kConstructionResidual;
  return tol;
}

Matrix identity(Index n) { return Matrix::Identity(n, n); }

Matrix random_psd(Rng& rng, Index dim, double scale) {
  // Occasionally rank-deficient (including zero) to exercise the
  // semidefinite boundary of the penalty space.
  const double p = rng.unit();
  if (p < 0.15) return Matrix::Zero(dim, dim);
  Index rank = dim;
  if (p < 0.35 && dim > 1) rank = 1 + static_cast<Index>(rng.unit() * (dim - 1));
  const Matrix L = rng.matrix(rank, dim, -scale, scale);
  Matrix K = L.transpose() * L;
  return 0.5 * (K + K.transpose());
}

Matrix random_spd_from(Rng& rng, Index dim, double scale) {
  const Matrix M = rng.matrix(dim, dim, -scale, scale);
  Matrix S = M.transpose() * M + 0.1 * scale * identity(dim);
  return 0.5 * (S + S.transpose());
}

Matrix draw_full_rank_design(Rng& rng, Index n, Index k, double scale,
                             std::uint64_t seed) {
  for (int attempt = 0; attempt < kRedrawBudget; ++attempt) {
    Matrix X = rng.matrix(n, k, -scale, scale);
    const Eigen::VectorXd sv = X.jacobiSvd().singularValues();
    if (sv(sv.size() - 1) > 1e-2 * sv(0)) return X;
  }
  throw GenerationError("gen_instance: no well-conditioned design drawn", seed);
}

/// Design with orthogonal columns: X^T X is diagonal with the given scales.
Matrix orthogonal_column_design(Rng& rng, Index n, Index k) {
  const Matrix M = rng.matrix(n, k, -1.0, 1.0);
  Eigen::HouseholderQR<Matrix> qr(M);
  Matrix Q = Matrix(qr.householderQ()).leftCols(k);
  for (Index j = 0; j < k; ++j) Q.col(j) *= rng.uniform(0.5, 2.0);
  return Q;
}

ModelInstance base_instance(Index n, Index k, Matrix X, Matrix Omega,
                            Matrix K1, Matrix K2) {
  ModelInstance m;
  m.n = n;
  m.k = k;
  m.X = std::move(X);
  m.Omega = std::move(Omega);
  m.K1 = std::move(K1);
  m.K2 = std::move(K2);
  return m;
}

Matrix assemble(const Matrix& X, const Matrix& Z, const Matrix& Gamma,
                const Matrix& Xi, const Matrix& Delta) {
  BlockDecomposition blocks;
  blocks.Gamma = Gamma;
  blocks.Xi = Xi;
  blocks.Delta = Delta;
  return reconstruct_omega(X, Z, blocks);
}

void verify_target(const ModelInstance& m, GenKind kind, std::uint64_t seed) {
  const ToleranceConfig tol = construction_tolerance();
  if (!validate(m, tol).empty()) {
    throw GenerationError("gen_instance: emitted instance fails validation",
                          seed);
  }
  bool ok = true;
  switch (kind) {
    case GenKind::RandomSPD:
      break;
    case GenKind::RcondOnly:
      ok = check_blue_ols(m.X, m.Omega, tol).verdict;
      break;
    case GenKind::GreEquality:
      ok = oracle_estimator_equality(m, tol).holds;
      break;
    case GenKind::RssEquality:
      ok = oracle_rss_equality(m, tol).holds;
      break;
    case GenKind::BiasOnly:
      ok = check_bias_equality(m, tol).conditions.front().holds;
      break;
    case GenKind::KruskalForm: {
      const Matrix Z = null_basis(m.X, tol).Z;
      ok = check_rss0_equality(m.X, Z, m.Omega, tol).verdict;
      break;
    }
  }
  if (!ok) {
    throw GenerationError("gen_instance: target condition not met", seed);
  }
}

ModelInstance gen_rcond_only(Rng& rng, const GenSpec& spec) {
  const Index n = spec.n;
  const Index k = spec.k;
  const ToleranceConfig tol;
  const Matrix X =
      draw_full_rank_design(rng, n, k, spec.scale, spec.seed);
  const Matrix Z = null_basis(X, tol).Z;
  const Matrix Gamma = random_spd_from(rng, k, spec.scale);
  const Matrix Delta = random_spd_from(rng, n - k, spec.scale);
  const Matrix Omega =
      assemble(X, Z, Gamma, Matrix::Zero(k, n - k), Delta);

  // With Xi = 0 the bias condition reads X^T X Gamma K1 = K2; draw penalties
  // until it fails.
  const Matrix head = X.transpose() * X * Gamma;
  for (int attempt = 0; attempt < kRedrawBudget; ++attempt) {
    const Matrix K1 = random_psd(rng, k, spec.scale);
    const Matrix K2 = random_psd(rng, k, spec.scale);
    if (K1.norm() < 0.01 && K2.norm() < 0.01) continue;
    if (approx_equal(head * K1, K2, tol).holds) continue;
    return base_instance(n, k, X, Omega, K1, K2);
  }
  throw GenerationError(
      "gen_instance: could not violate the bias condition for RcondOnly",
      spec.seed);
}

ModelInstance gen_gre_equality(Rng& rng, const GenSpec& spec) {
  const Index n = spec.n;
  const Index k = spec.k;
  const ToleranceConfig tol;

  if (rng.coin()) {
    // Scalar sub-family: Gamma = c (X^T X)^{-1}, K1 = K2 / c.
    const Matrix X =
        draw_full_rank_design(rng, n, k, spec.scale, spec.seed);
    const Matrix Z = null_basis(X, tol).Z;
    const double c = rng.uniform(0.3, 3.0);
    const Matrix XtX = X.transpose() * X;
    Matrix Gamma = c * Eigen::LLT<Matrix>(XtX).solve(identity(k));
    Gamma = 0.5 * (Gamma + Gamma.transpose()).eval();
    const Matrix Delta = random_spd_from(rng, n - k, spec.scale);
    const Matrix K2 = random_psd(rng, k, spec.scale);
    const Matrix K1 = K2 / c;
    const Matrix Omega = assemble(X, Z, Gamma, Matrix::Zero(k, n - k), Delta);
    return base_instance(n, k, X, Omega, K1, K2);
  }

  // Diagonal sub-family: orthogonal design columns and diagonal blocks.
  const Matrix X = orthogonal_column_design(rng, n, k);
  const Matrix Z = null_basis(X, tol).Z;
  const Matrix XtX = X.transpose() * X;  // diagonal
  Vector gamma_diag(k), k1_diag(k), k2_diag(k);
  for (Index i = 0; i < k; ++i) {
    gamma_diag(i) = rng.uniform(0.3, 3.0);
    k1_diag(i) = rng.coin() ? rng.uniform(0.1, 2.0) : 0.0;
    k2_diag(i) = XtX(i, i) * gamma_diag(i) * k1_diag(i);
  }
  const Matrix Gamma = gamma_diag.asDiagonal();
  const Matrix Delta = random_spd_from(rng, n - k, spec.scale);
  const Matrix Omega = assemble(X, Z, Gamma, Matrix::Zero(k, n - k), Delta);
  return base_instance(n, k, X, Matrix(Omega), Matrix(k1_diag.asDiagonal()),
                       Matrix(k2_diag.asDiagonal()));
}

ModelInstance gen_rss_equality(Rng& rng, const GenSpec& spec) {
  const Index n = spec.n;
  const Index k = spec.k;
  const ToleranceConfig tol;

  const Matrix X =
      draw_full_rank_design(rng, n, k, spec.scale, spec.seed);
  const Matrix Z = null_basis(X, tol).Z;  // orthonormal, so Z^T Z = I
  const double kappa = rng.uniform(0.5, 2.0);

  // Per eigenvalue m of X^T X, gamma in {1/m, m/kappa^2} solves
  // kappa^2 (gamma - 1/m) = m - 1/gamma; mix the two roots.
  Eigen::SelfAdjointEigenSolver<Matrix> es(X.transpose() * X);
  Vector gamma_eigs(k);
  for (Index i = 0; i < k; ++i) {
    const double m = es.eigenvalues()(i);
    gamma_eigs(i) = rng.coin() ? m / (kappa * kappa) : 1.0 / m;
  }
  Matrix Gamma = es.eigenvectors() * gamma_eigs.asDiagonal() *
                 es.eigenvectors().transpose();
  Gamma = 0.5 * (Gamma + Gamma.transpose()).eval();

  const Matrix Omega =
      assemble(X, Z, Gamma, Matrix::Zero(k, n - k), identity(n - k));
  const Matrix K = kappa * identity(k);
  return base_instance(n, k, X, Omega, K, K);
}

ModelInstance gen_bias_only(Rng& rng, const GenSpec& spec) {
  const Index n = spec.n;
  const Index k = spec.k;
  const ToleranceConfig tol;

  const Matrix X =
      draw_full_rank_design(rng, n, k, spec.scale, spec.seed);
  const Matrix Z = null_basis(X, tol).Z;
  const double c = rng.uniform(0.3, 3.0);
  const Matrix XtX = X.transpose() * X;
  Matrix XtX_inv = Eigen::LLT<Matrix>(XtX).solve(identity(k));
  XtX_inv = 0.5 * (XtX_inv + XtX_inv.transpose()).eval();
  const Matrix Delta = random_spd_from(rng, n - k, spec.scale);

  for (int attempt = 0; attempt < kRedrawBudget; ++attempt) {
    const Matrix Xi = rng.matrix(k, n - k, -0.3 * spec.scale, 0.3 * spec.scale);
    if (Xi.norm() < 0.05) continue;
    // A^{-1} = c (X^T X)^{-1} regardless of Xi, so the bias condition reads
    // K2 = c K1.
    Matrix Gamma =
        c * XtX_inv + Xi * Eigen::LLT<Matrix>(Delta).solve(Xi.transpose());
    Gamma = 0.5 * (Gamma + Gamma.transpose()).eval();
    Matrix K1 = random_psd(rng, k, spec.scale);
    if (K1.norm() < 0.01) K1 = identity(k);
    const Matrix K2 = c * K1;
    const Matrix Omega = assemble(X, Z, Gamma, Xi, Delta);
    ModelInstance m = base_instance(n, k, X, Omega, K1, K2);
    const auto blocks = omega_blocks(X, Z, Omega, tol);
    if (approx_equal(blocks.Xi, Matrix::Zero(k, n - k), tol).holds) continue;
    return m;
  }
  throw GenerationError(
      "gen_instance: could not realize a nonzero Xi for BiasOnly", spec.seed);
}

ModelInstance gen_kruskal(Rng& rng, const GenSpec& spec) {
  const Index n = spec.n;
  const Index k = spec.k;
  const ToleranceConfig tol;

  const Matrix X =
      draw_full_rank_design(rng, n, k, spec.scale, spec.seed);
  const Matrix Px = Eigen::LLT<Matrix>(X.transpose() * X).solve(X.transpose());
  const Matrix N = identity(n) - X * Px;

  // Lambda is drawn around the identity (Lambda = I gives Omega = I); the
  // perturbation is halved until Omega is positive definite.
  Matrix E = rng.matrix(n, n, -0.4 * spec.scale, 0.4 * spec.scale);
  E = 0.5 * (E + E.transpose()).eval();
  const Matrix K1 = random_psd(rng, k, spec.scale);
  const Matrix K2 = random_psd(rng, k, spec.scale);
  for (int attempt = 0; attempt < kRedrawBudget; ++attempt) {
    const Matrix Lambda = identity(n) + E;
    Matrix Omega = N + Lambda - N * Lambda * N;
    Omega = 0.5 * (Omega + Omega.transpose()).eval();
    if (is_spd(Omega, tol)) {
      return base_instance(n, k, X, Omega, K1, K2);
    }
    E *= 0.5;
  }
  throw GenerationError(
      "gen_instance: no positive definite Kruskal-form covariance", spec.seed);
}

ModelInstance gen_random(Rng& rng, const GenSpec& spec) {
  const Index n = spec.n;
  const Index k = spec.k;
  const ToleranceConfig tol;
  const Matrix X =
      draw_full_rank_design(rng, n, k, spec.scale, spec.seed);
  const Matrix Omega = random_spd_from(rng, n, spec.scale);
  const Matrix K1 = random_psd(rng, k, spec.scale);
  const Matrix K2 = random_psd(rng, k, spec.scale);
  return base_instance(n, k, X, Omega, K1, K2);
}

}  // namespace

Matrix Rng::matrix(Index rows, Index cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
  }
  return m;
}

Vector Rng::vector(Index size, double lo, double hi) {
  Vector v(size);
  for (Index i = 0; i < size; ++i) v(i) = uniform(lo, hi);
  return v;
}

Matrix gen_random_spd(Index dim, std::uint64_t seed, double scale) {
  if (dim < 1) throw PreconditionError("gen_random_spd: dim must be >= 1");
  if (!(scale > 0.0)) {
    throw PreconditionError("gen_random_spd: scale must be positive");
  }
  Rng rng(seed);
  return random_spd_from(rng, dim, scale);
}

ModelInstance gen_instance(const GenSpec& spec) {
  if (spec.n <= spec.k || spec.k < 1) {
    throw PreconditionError("gen_instance: requires n > k >= 1");
  }
  if (!(spec.scale > 0.0)) {
    throw PreconditionError("gen_instance: scale must be positive");
  }
  Rng rng(spec.seed);
  ModelInstance m;
  switch (spec.kind) {
    case GenKind::RandomSPD:
      m = gen_random(rng, spec);
      break;
    case GenKind::RcondOnly:
      m = gen_rcond_only(rng, spec);
      break;
    case GenKind::GreEquality:
      m = gen_gre_equality(rng, spec);
      break;
    case GenKind::RssEquality:
      m = gen_rss_equality(rng, spec);
      break;
    case GenKind::BiasOnly:
      m = gen_bias_only(rng, spec);
      break;
    case GenKind::KruskalForm:
      m = gen_kruskal(rng, spec);
      break;
  }
  verify_target(m, spec.kind, spec.seed);
  return m;
}

ModelInstance perturb_single_condition(const ModelInstance& instance,
                                       FaultTarget target, std::uint64_t seed,
                                       double magnitude) {
  const ToleranceConfig tol;
  Rng rng(seed);
  ModelInstance out = instance;
  switch (target) {
    case FaultTarget::DeltaBlock: {
      // Omega + Z E Z^T shifts Delta by E and leaves Gamma, Xi unchanged.
      const Matrix Z = resolve_null_basis(instance, tol);
      out.Omega = instance.Omega +
                  Z * (magnitude * identity(instance.n - instance.k)) *
                      Z.transpose();
      out.Omega = 0.5 * (out.Omega + out.Omega.transpose()).eval();
      return out;
    }
    case FaultTarget::XiBlock: {
      // Omega + X E Z^T + Z E^T X^T shifts Xi by E and leaves Gamma, Delta
      // unchanged; E is halved until the result stays positive definite.
      const Matrix Z = resolve_null_basis(instance, tol);
      Matrix E = rng.matrix(instance.k, instance.n - instance.k, -1.0, 1.0);
      const double norm = E.norm();
      if (norm > 0.0) E *= magnitude / norm;
      for (int attempt = 0; attempt < kRedrawBudget; ++attempt) {
        Matrix Omega = instance.Omega + instance.X * E * Z.transpose() +
                       Z * E.transpose() * instance.X.transpose();
        Omega = 0.5 * (Omega + Omega.transpose()).eval();
        if (is_spd(Omega, tol)) {
          out.Omega = std::move(Omega);
          return out;
        }
        E *= 0.5;
      }
      throw GenerationError(
          "perturb_single_condition: no SPD Xi perturbation found", seed);
    }
    case FaultTarget::PenaltyRelation:
      out.K2 = instance.K2 + magnitude * identity(instance.k);
      return out;
  }
  throw std::logic_error("perturb_single_condition: unknown target");
}

}  // namespace ridge_equiv
