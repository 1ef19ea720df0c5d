#pragma once

#include "ridge_equiv/decomposition.hpp"
#include "ridge_equiv/equivalence.hpp"
#include "ridge_equiv/generators.hpp"

#include <cmath>

// Fixtures and test-local oracles shared by the suites. The oracles here are
// deliberately independent of the library's production paths.
namespace testsupport {

using namespace ridge_equiv;

// Diagonal covariance with a free trailing entry; the penalties are related
// by the diagonal witness diag(1, 2).
inline ModelInstance example1(double a = 7.3) {
  ModelInstance m;
  m.n = 3;
  m.k = 2;
  m.X = Matrix{{1, 0}, {0, 1}, {0, 0}};
  m.Omega = Matrix{{1, 0, 0}, {0, 0.5, 0}, {0, 0, a}};
  m.K1 = Matrix{{1, 0}, {0, 2}};
  m.K2 = Matrix::Identity(2, 2);
  return m;
}

// Covariance fixing the design columns (Omega X = X) with a shared ridge
// penalty lambda I.
inline ModelInstance example2(double lambda = 1.0) {
  ModelInstance m;
  m.n = 3;
  m.k = 2;
  m.X = Matrix{{1, 2}, {1, 0}, {0, 1}};
  m.Omega = Matrix{{2, -1, -2}, {-1, 2, 2}, {-2, 2, 5}};
  m.K1 = lambda * Matrix::Identity(2, 2);
  m.K2 = m.K1;
  return m;
}

// Equal residual sums of squares at K = sqrt(3) I; carries the non-orthonormal
// basis Z = (1, -1, -1)^T.
inline ModelInstance example3() {
  ModelInstance m;
  m.n = 3;
  m.k = 2;
  m.X = Matrix{{1, 1}, {1, 0}, {0, 1}};
  m.Omega = (1.0 / 3.0) * Matrix{{3, 0, 0}, {0, 2, 1}, {0, 1, 2}};
  m.K1 = std::sqrt(3.0) * Matrix::Identity(2, 2);
  m.K2 = m.K1;
  m.Z = Matrix{{1.0}, {-1.0}, {-1.0}};
  return m;
}

inline Matrix expected_map_example1() {
  return 0.5 * Matrix{{1, 0, 0}, {0, 1, 0}};
}

inline Matrix expected_map_example2(double lambda) {
  Matrix p{{lambda + 1, lambda + 5, -2},
           {2 * (lambda + 1), -2, lambda + 2}};
  return p / ((lambda + 1) * (lambda + 6));
}

// Entries derived symbolically from X and K = sqrt(3) I: with
// d = 6 + 4 sqrt(3), the form is I - X (X^T X + K)^{-1} X^T squared, whose
// distinct entries reduce to 2(3 - sqrt(3))/6 on the leading diagonal entry,
// -sqrt(3)/6 on the first row/column, (12 - 5 sqrt(3))/6 on the trailing
// diagonal, and 2/d = (4 sqrt(3) - 6)/6 on the trailing off-diagonal.
inline Matrix expected_rss_form_example3() {
  const double s = std::sqrt(3.0);
  Matrix q{{2 * (3 - s), -s, -s},
           {-s, 12 - 5 * s, 4 * s - 6},
           {-s, 4 * s - 6, 12 - 5 * s}};
  return q / 6.0;
}

// Symmetric square root / inverse square root via eigendecomposition;
// test-only oracle for the RSS definition.
inline Matrix sym_sqrt(const Matrix& spd) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(spd);
  return es.eigenvectors() *
         es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

inline Matrix sym_inv_sqrt(const Matrix& spd) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(spd);
  return es.eigenvectors() *
         es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

// Standard normal draws via Box-Muller on the deterministic uniform stream.
class NormalRng {
 public:
  explicit NormalRng(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = rng_.unit();
    while (u1 <= 1e-300) u1 = rng_.unit();
    const double u2 = rng_.unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Vector vector(Index size) {
    Vector v(size);
    for (Index i = 0; i < size; ++i) v(i) = (*this)();
    return v;
  }

 private:
  Rng rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Well-conditioned random basis change: orthogonal factor times a diagonal
// scaling in [0.5, 2].
inline Matrix random_basis_change(Index dim, std::uint64_t seed) {
  Rng rng(seed);
  const Matrix m = rng.matrix(dim, dim, -1.0, 1.0);
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  for (Index j = 0; j < dim; ++j) q.col(j) *= rng.uniform(0.5, 2.0);
  return q;
}

struct DimCycle {
  // Deterministic (n, k) pairs covering n in [3, 8], k in [1, n-1].
  static std::pair<int, int> at(std::size_t index) {
    static const auto pairs = [] {
      std::vector<std::pair<int, int>> p;
      for (int n = 3; n <= 8; ++n) {
        for (int k = 1; k < n; ++k) p.emplace_back(n, k);
      }
      return p;
    }();
    return pairs[index % pairs.size()];
  }
};

}  // namespace testsupport
