#pragma once

// Seeded generators for property checks.

#include "hflow/lie_core.hpp"

#include <random>

namespace hflow::testing {

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Matrix matrix(int rows, int cols) {
    Matrix M(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) M(i, j) = uniform();
    return M;
  }

  Matrix symmetric(int n) {
    const Matrix A = matrix(n, n);
    return 0.5 * (A + A.transpose());
  }

  /// I + eps * random, invertible for small eps.
  Matrix near_identity(int n, double eps = 0.1) { return Matrix::Identity(n, n) + eps * matrix(n, n); }

  /// Random orthogonal matrix (QR of a random matrix, sign-fixed).
  Matrix orthogonal(int n) {
    Eigen::HouseholderQR<Matrix> qr(matrix(n, n));
    Matrix Q = qr.householderQ();
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
      if (R(i, i) < 0.0) Q.col(i) *= -1.0;
    return Q;
  }

  /// Any skew-symmetric bilinear map on R^n (no Jacobi identity).
  LieBracket antisymmetric(int n) {
    LieBracket mu(SplitSpace{0, n});
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < n; ++k) mu.set(i, j, k, uniform());
    return mu;
  }

  /// 2-step nilpotent Lie bracket: the first m basis vectors bracket into the last n - m.
  LieBracket two_step_nilpotent(int n, int m) {
    LieBracket mu(SplitSpace{0, n});
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        for (int k = m; k < n; ++k) mu.set(i, j, k, uniform());
    return mu;
  }

  /// A Lie bracket in general position: GL-orbit point of a random 2-step nilpotent one.
  LieBracket lie_bracket(int n) {
    const int m = std::max(2, n - integer(1, std::max(1, n / 2)));
    const LieBracket base = two_step_nilpotent(n, m);
    return act(near_identity(n, 0.3), base);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace hflow::testing
