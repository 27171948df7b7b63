#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace hflow {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised when a mathematical precondition fails (singular operator,
/// degenerate structure, non-integrable J, ...).
class PreconditionError : public std::domain_error {
 public:
  explicit PreconditionError(const std::string& what) : std::domain_error(what) {}
};

/// Raised for malformed configuration or unresolved names.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised for file input/output failures.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical tolerances shared by the algebraic checks.
struct Tolerances {
  double jacobi = 1e-9;           // (h1) Jacobi residual
  double block = 1e-9;            // (h1) block inclusions
  double kernel = 1e-9;           // (h3) smallest singular value
  double invariance = 1e-9;       // (h4)
  double nullspace_rel = 1e-9;    // sigma < nullspace_rel * sigma_max
  double solve_residual = 1e-9;   // theta(Q)gamma = q
  double condition = 1e12;        // invertibility bound for act()
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

namespace linalg {

/// Column-major flattening of a square matrix; the Frobenius inner product
/// of two matrices equals the dot product of their flattenings.
inline Vector flatten(const Matrix& A) {
  return Eigen::Map<const Vector>(A.data(), A.size());
}

inline Matrix unflatten(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

/// Rank of A by singular-value thresholding at rel_tol * sigma_max.
inline int numerical_rank(const Eigen::JacobiSVD<Matrix>& svd, double rel_tol) {
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  const double cut = rel_tol * s(0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

/// Orthonormal basis (as columns) of ker A, by SVD thresholding.
inline Matrix nullspace(const Matrix& A, double rel_tol = default_tolerances().nullspace_rel) {
  const Eigen::Index cols = A.cols();
  if (cols == 0) return Matrix(0, 0);
  if (A.rows() == 0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const int r = numerical_rank(svd, rel_tol);
  return svd.matrixV().rightCols(cols - r);
}

/// Orthonormal basis (as columns) of the column span of A.
inline Matrix range(const Matrix& A, double rel_tol = default_tolerances().nullspace_rel) {
  if (A.cols() == 0 || A.rows() == 0) return Matrix(A.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU);
  const int r = numerical_rank(svd, rel_tol);
  return svd.matrixU().leftCols(r);
}

/// Minimal-norm least-squares solution of A x = b.
inline Vector lstsq(const Matrix& A, const Vector& b) {
  if (A.cols() == 0) return Vector(0);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
  return cod.solve(b);
}

inline double min_singular_value(const Matrix& A) {
  if (A.cols() == 0 || A.rows() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

inline double condition_number(const Matrix& A) {
  Eigen::JacobiSVD<Matrix> svd(A);
  const Vector& s = svd.singularValues();
  if (s(s.size() - 1) == 0.0) return INFINITY;
  return s(0) / s(s.size() - 1);
}

/// Square root of a symmetric positive definite matrix.
inline Matrix spd_sqrt(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (A + A.transpose()));
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw PreconditionError("spd_sqrt: matrix is not positive definite");
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

/// Matrix exponential of a symmetric matrix.
inline Matrix sym_exp(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (A + A.transpose()));
  return es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

/// Matrix exponential by scaling and squaring with a Taylor core.
inline Matrix expm(const Matrix& A) {
  const double norm = A.lpNorm<Eigen::Infinity>();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix X = A / std::ldexp(1.0, squarings);
  Matrix term = Matrix::Identity(A.rows(), A.cols());
  Matrix result = term;
  for (int k = 1; k <= 20; ++k) {
    term = term * X / static_cast<double>(k);
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace linalg
}  // namespace hflow
