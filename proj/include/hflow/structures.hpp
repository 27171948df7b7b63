#pragma once

// Geometric structures on p, the infinitesimal action theta of gl(p) on
// tensors, and the splitting gl = g_gamma + q_gamma with the unique solve of
// q = theta(Q) gamma for Q in q_gamma.

#include "hflow/exterior.hpp"
#include "hflow/lie_core.hpp"
#include "hflow/linalg.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hflow {

enum class StructureKind { metric, complex, symplectic, hermitian, g2 };

inline const char* to_string(StructureKind k) {
  switch (k) {
    case StructureKind::metric: return "metric";
    case StructureKind::complex: return "complex";
    case StructureKind::symplectic: return "symplectic";
    case StructureKind::hermitian: return "hermitian";
    case StructureKind::g2: return "g2";
  }
  return "?";
}

/// A tensor of the type of a structure's evolving tensor: a bilinear form or
/// operator stored as an n x n matrix, or a k-form.
///
/// Bilinear forms B are stored so that B(X, Y) = X^T B Y. Operators A are
/// stored so that A e_i is column i.
using Tensor = std::variant<Matrix, KForm>;

inline Vector flatten(const Tensor& t) {
  if (const auto* m = std::get_if<Matrix>(&t)) return linalg::flatten(*m);
  return std::get<KForm>(t).coeffs();
}

inline Tensor unflatten_like(const Tensor& like, const Vector& v) {
  if (const auto* m = std::get_if<Matrix>(&like)) return linalg::unflatten(v, m->rows(), m->cols());
  KForm f = std::get<KForm>(like);
  f.coeffs() = v;
  return f;
}

inline double tensor_norm(const Tensor& t) { return flatten(t).norm(); }

inline Tensor tensor_difference(const Tensor& a, const Tensor& b) {
  return unflatten_like(a, flatten(a) - flatten(b));
}

/// (r, s) type: r covariant, s contravariant slots.
struct TensorType {
  int r = 0;
  int s = 0;
};

struct G2Metric {
  Matrix metric;
  bool positive = false;
  int orientation = 1;
};

namespace detail {

/// B(X, Y) vol = (1/6) (i_X phi) ^ (i_Y phi) ^ phi, as a matrix in the e^1..e^7 volume.
inline Matrix g2_bilinear(const KForm& phi) {
  const int n = phi.dim();
  std::vector<KForm> contracted;
  contracted.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) contracted.push_back(interior(Vector::Unit(n, i), phi));
  Matrix B(n, n);
  for (int i = 0; i < n; ++i) {
    const KForm left = wedge(contracted[static_cast<size_t>(i)], phi);
    for (int j = i; j < n; ++j) {
      const KForm top = wedge(contracted[static_cast<size_t>(j)], left);
      B(i, j) = B(j, i) = top.coeffs()(0) / 6.0;
    }
  }
  return B;
}

}  // namespace detail

/// Metric and orientation determined by a 3-form on a 7-dimensional space.
///
/// With B as above, the metric is g = B / det(B)^{1/9} once B is made
/// positive by the orientation sign; phi is positive iff B is definite.
inline G2Metric g2_induced_metric(const KForm& phi, double det_floor = 1e-9) {
  G2Metric out;
  out.metric = Matrix::Identity(7, 7);
  if (phi.dim() != 7 || phi.degree() != 3) return out;
  Matrix B = detail::g2_bilinear(phi);
  Eigen::SelfAdjointEigenSolver<Matrix> es(B);
  const Vector ev = es.eigenvalues();
  int sign = 0;
  if (ev.minCoeff() > 0.0) sign = 1;
  if (ev.maxCoeff() < 0.0) sign = -1;
  if (sign == 0) return out;
  const Matrix Bp = sign * B;
  const double det = Bp.determinant();
  if (det < det_floor) return out;
  // Under orientation reversal B picks up the sign, and det(-B) = -det(B) in dimension 7.
  out.metric = Bp / std::pow(det, 1.0 / 9.0);
  out.positive = true;
  out.orientation = sign;
  return out;
}

/// A nondegenerate tensor on p: metric, complex structure, symplectic form,
/// hermitian pair (J, g) with J fixed, or a G2 3-form.
class GeometricStructure {
 public:
  static GeometricStructure metric(Matrix g) {
    GeometricStructure s(StructureKind::metric);
    s.m_ = std::move(g);
    s.validate();
    return s;
  }
  static GeometricStructure complex(Matrix J) {
    GeometricStructure s(StructureKind::complex);
    s.m_ = std::move(J);
    s.validate();
    return s;
  }
  static GeometricStructure symplectic(Matrix omega) {
    GeometricStructure s(StructureKind::symplectic);
    s.m_ = std::move(omega);
    s.validate();
    return s;
  }
  static GeometricStructure hermitian(Matrix J, Matrix g) {
    GeometricStructure s(StructureKind::hermitian);
    s.m_ = std::move(g);
    s.J_ = std::move(J);
    s.validate();
    return s;
  }
  static GeometricStructure g2(KForm phi) {
    GeometricStructure s(StructureKind::g2);
    s.phi_ = std::move(phi);
    s.validate();
    return s;
  }

  StructureKind kind() const { return kind_; }

  int dim() const { return kind_ == StructureKind::g2 ? phi_.dim() : static_cast<int>(m_.rows()); }

  TensorType type() const {
    switch (kind_) {
      case StructureKind::metric:
      case StructureKind::symplectic:
      case StructureKind::hermitian: return {2, 0};
      case StructureKind::complex: return {1, 1};
      case StructureKind::g2: return {3, 0};
    }
    return {};
  }

  /// The tensor that evolves under a flow (g for hermitian pairs; J is fixed).
  Tensor tensor() const {
    if (kind_ == StructureKind::g2) return phi_;
    return m_;
  }

  /// Same structure class and fixed data, with a new evolving tensor.
  GeometricStructure with_tensor(const Tensor& t) const {
    GeometricStructure s = *this;
    if (kind_ == StructureKind::g2)
      s.phi_ = std::get<KForm>(t);
    else
      s.m_ = std::get<Matrix>(t);
    s.validate();
    return s;
  }

  /// g for metric/hermitian, J for complex, omega for symplectic.
  const Matrix& matrix() const { return m_; }
  const Matrix& complex_structure() const {
    if (kind_ == StructureKind::complex) return m_;
    if (kind_ == StructureKind::hermitian) return J_;
    throw PreconditionError("structure carries no complex structure");
  }
  const KForm& form() const { return phi_; }

  /// Metric determined by the structure; identity when there is none.
  Matrix induced_metric() const {
    switch (kind_) {
      case StructureKind::metric:
      case StructureKind::hermitian: return m_;
      case StructureKind::g2: return g2_induced_metric(phi_).metric;
      default: return Matrix::Identity(dim(), dim());
    }
  }

  int orientation() const { return kind_ == StructureKind::g2 ? g2_induced_metric(phi_).orientation : 1; }

 private:
  explicit GeometricStructure(StructureKind k) : kind_(k) {}

  void validate() {
    const auto fail = [this](const std::string& why) {
      throw PreconditionError(std::string("degenerate ") + to_string(kind_) + " structure: " + why);
    };
    if (kind_ == StructureKind::g2) {
      if (phi_.dim() != 7 || phi_.degree() != 3) fail("a G2 structure is a 3-form in dimension 7");
      if (!g2_induced_metric(phi_).positive) fail("3-form is not positive");
      return;
    }
    const auto n = m_.rows();
    if (n == 0 || m_.cols() != n) fail("matrix must be square and nonempty");
    auto check_metric = [&](const Matrix& g) {
      if ((g - g.transpose()).norm() > 1e-10 * std::max(1.0, g.norm())) fail("metric is not symmetric");
      Eigen::LLT<Matrix> llt(g);
      if (llt.info() != Eigen::Success) fail("metric is not positive definite");
    };
    auto check_J = [&](const Matrix& J) {
      if (J.rows() != n || J.cols() != n || n % 2 != 0) fail("J must act on an even-dimensional space");
      if ((J * J + Matrix::Identity(n, n)).norm() > 1e-10) fail("J^2 != -I");
    };
    switch (kind_) {
      case StructureKind::metric: check_metric(m_); break;
      case StructureKind::complex: check_J(m_); break;
      case StructureKind::symplectic:
        if ((m_ + m_.transpose()).norm() > 1e-10 * std::max(1.0, m_.norm())) fail("omega is not skew");
        if (std::abs(m_.determinant()) < 1e-12) fail("omega is degenerate");
        break;
      case StructureKind::hermitian:
        check_J(J_);
        check_metric(m_);
        if ((J_.transpose() * m_ * J_ - m_).norm() > 1e-10 * std::max(1.0, m_.norm()))
          fail("g is not J-invariant");
        break;
      case StructureKind::g2: break;
    }
  }

  StructureKind kind_;
  Matrix m_;
  Matrix J_;
  KForm phi_;
};

/// theta(A) acting on a tensor of the given kind's type.
///
/// Bilinear forms: theta(A)B = -B(A., .) - B(., A.); operators: [A, J];
/// k-forms: -sum over slots of a(.., A., ..).
inline Tensor theta(const Matrix& A, const Tensor& t, StructureKind kind) {
  if (kind == StructureKind::g2) {
    // theta(A) a = -sum_i e^i ^ i_{A e_i} a
    const KForm& a = std::get<KForm>(t);
    const int n = a.dim();
    KForm out(n, a.degree());
    for (Eigen::Index r = 0; r < a.size(); ++r) {
      const double v = a.coeffs()(r);
      if (v == 0.0) continue;
      const std::uint32_t I = a.mask(r);
      for (int m = 0; m < n; ++m) {
        if (!(I & (1u << m))) continue;
        const std::uint32_t rest = I & ~(1u << m);
        const double s1 = (std::popcount(I & ((1u << m) - 1u)) & 1) ? -v : v;
        for (int i = 0; i < n; ++i) {
          const double w = A(m, i);
          if (w == 0.0 || (rest & (1u << i))) continue;
          const double s2 = (std::popcount(rest & ((1u << i) - 1u)) & 1) ? -1.0 : 1.0;
          out.coeffs()(out.rank(rest | (1u << i))) -= w * s1 * s2;
        }
      }
    }
    return out;
  }
  const Matrix& B = std::get<Matrix>(t);
  if (kind == StructureKind::complex) return Matrix(A * B - B * A);
  return Matrix(-(A.transpose() * B + B * A));
}

inline Tensor theta(const Matrix& A, const GeometricStructure& gamma) {
  return theta(A, gamma.tensor(), gamma.kind());
}

/// h . t for invertible h: (h^{-1})^* on covariant tensors, conjugation on operators.
inline Tensor act_tensor(const Matrix& h, const Tensor& t, StructureKind kind) {
  const Matrix hinv = h.inverse();
  if (kind == StructureKind::g2) return pullback(hinv, std::get<KForm>(t));
  const Matrix& B = std::get<Matrix>(t);
  if (kind == StructureKind::complex) return Matrix(h * B * hinv);
  return Matrix(hinv.transpose() * B * hinv);
}

/// h . gamma; for hermitian pairs J is transported as well.
inline GeometricStructure act(const Matrix& h, const GeometricStructure& gamma) {
  if (gamma.kind() == StructureKind::hermitian) {
    const Matrix J = h * gamma.complex_structure() * h.inverse();
    return GeometricStructure::hermitian(J, std::get<Matrix>(act_tensor(h, gamma.tensor(), gamma.kind())));
  }
  return gamma.with_tensor(act_tensor(h, gamma.tensor(), gamma.kind()));
}

/// h^* gamma = h^{-1} . gamma.
inline GeometricStructure pullback(const Matrix& h, const GeometricStructure& gamma) {
  return act(Matrix(h.inverse()), gamma);
}

/// Matrix of A -> theta(A) gamma on a list of operators (columns = flattened tensors).
inline Matrix theta_matrix(const GeometricStructure& gamma, const std::vector<Matrix>& ops) {
  const Vector probe = flatten(gamma.tensor());
  Matrix T(probe.size(), static_cast<Eigen::Index>(ops.size()));
  for (size_t c = 0; c < ops.size(); ++c) T.col(static_cast<Eigen::Index>(c)) = flatten(theta(ops[c], gamma));
  return T;
}

inline std::vector<Matrix> columns_to_operators(const Matrix& cols, Eigen::Index n) {
  std::vector<Matrix> out;
  out.reserve(static_cast<size_t>(cols.cols()));
  for (Eigen::Index c = 0; c < cols.cols(); ++c) out.push_back(linalg::unflatten(cols.col(c), n, n));
  return out;
}

/// Orthonormal (Frobenius) basis of the ambient algebra: gl(p), or the
/// commutant of J for hermitian metrics on a fixed complex manifold.
inline std::vector<Matrix> ambient_basis(const GeometricStructure& gamma) {
  const int n = gamma.dim();
  if (gamma.kind() == StructureKind::hermitian) {
    const Matrix& J = gamma.complex_structure();
    Matrix C(n * n, n * n);  // A -> AJ - JA
    for (int c = 0; c < n * n; ++c) {
      Matrix E = Matrix::Zero(n, n);
      E(c % n, c / n) = 1.0;
      C.col(c) = linalg::flatten(E * J - J * E);
    }
    return columns_to_operators(linalg::nullspace(C), n);
  }
  std::vector<Matrix> basis;
  basis.reserve(static_cast<size_t>(n * n));
  for (int c = 0; c < n * n; ++c) {
    Matrix E = Matrix::Zero(n, n);
    E(c % n, c / n) = 1.0;
    basis.push_back(std::move(E));
  }
  return basis;
}

/// Orthonormal basis of g_gamma = {A in ambient : theta(A) gamma = 0}.
inline std::vector<Matrix> stabilizer_algebra(const GeometricStructure& gamma) {
  const auto amb = ambient_basis(gamma);
  const Matrix T = theta_matrix(gamma, amb);
  const Matrix K = linalg::nullspace(T);
  Matrix ambient_cols(gamma.dim() * gamma.dim(), static_cast<Eigen::Index>(amb.size()));
  for (size_t c = 0; c < amb.size(); ++c) ambient_cols.col(static_cast<Eigen::Index>(c)) = linalg::flatten(amb[c]);
  return columns_to_operators(linalg::range(ambient_cols * K), gamma.dim());
}

/// Orthonormal (Frobenius) basis of the complement q_gamma.
///
/// Metric, hermitian and G2 structures: the orthogonal complement of g_gamma
/// in the ambient algebra for the inner product tr(A B^*) with B^* the
/// adjoint for the structure's own metric (so q_g = g-self-adjoint
/// operators). At an orthonormal structure this is the Frobenius complement.
/// Complex: {A : AJ = -JA}. Symplectic: {A : omega(A., .) = omega(., A.)}.
/// Each choice satisfies q_{h.gamma} = h q_gamma h^{-1}.
inline std::vector<Matrix> complement_basis(const GeometricStructure& gamma) {
  const int n = gamma.dim();
  const int n2 = n * n;
  auto constraint_kernel = [&](auto&& constraint) {
    Matrix C(n2, n2);
    for (int c = 0; c < n2; ++c) {
      Matrix E = Matrix::Zero(n, n);
      E(c % n, c / n) = 1.0;
      C.col(c) = linalg::flatten(constraint(E));
    }
    return columns_to_operators(linalg::nullspace(C), n);
  };
  if (gamma.kind() == StructureKind::complex) {
    const Matrix& J = gamma.matrix();
    return constraint_kernel([&](const Matrix& A) { return Matrix(A * J + J * A); });
  }
  if (gamma.kind() == StructureKind::symplectic) {
    const Matrix& W = gamma.matrix();
    return constraint_kernel([&](const Matrix& A) { return Matrix(A.transpose() * W - W * A); });
  }
  const Matrix G = gamma.induced_metric();
  const Matrix Ginv = G.inverse();
  const auto amb = ambient_basis(gamma);
  const auto stab = stabilizer_algebra(gamma);
  // Coordinates in the ambient basis; find x with <S_i, sum x_c A_c>_G = 0.
  Matrix ambient_cols(n2, static_cast<Eigen::Index>(amb.size()));
  for (size_t c = 0; c < amb.size(); ++c) ambient_cols.col(static_cast<Eigen::Index>(c)) = linalg::flatten(amb[c]);
  Matrix C(static_cast<Eigen::Index>(stab.size()), static_cast<Eigen::Index>(amb.size()));
  for (size_t i = 0; i < stab.size(); ++i) {
    const Matrix Sadj = Ginv * stab[i].transpose() * G;
    for (size_t c = 0; c < amb.size(); ++c) C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = (amb[c] * Sadj).trace();
  }
  const Matrix K = stab.empty() ? Matrix(Matrix::Identity(static_cast<Eigen::Index>(amb.size()), static_cast<Eigen::Index>(amb.size())))
                                : linalg::nullspace(C);
  return columns_to_operators(linalg::range(ambient_cols * K), n);
}

/// Precomputed solver for q = theta(Q) gamma with Q in q_gamma.
///
/// Complex and symplectic structures solve on an explicit basis of q_gamma.
/// For metric, hermitian and G2 structures q_gamma is the orthogonal
/// complement of ker theta = g_gamma for |A|_G = |U A U^{-1}| (G = U^T U),
/// so Q is the minimal |.|_G-norm solution over the ambient algebra.
class QSolver {
 public:
  explicit QSolver(const GeometricStructure& gamma, double residual_tol = default_tolerances().solve_residual)
      : gamma_(gamma), tol_(residual_tol) {
    const int n = gamma_.dim();
    const bool weighted = gamma_.kind() != StructureKind::complex && gamma_.kind() != StructureKind::symplectic;
    if (!weighted) {
      basis_ = complement_basis(gamma_);
      basis_ready_ = true;
      ops_ = basis_;
      T_ = theta_matrix(gamma_, ops_);
      Eigen::JacobiSVD<Matrix> svd(T_);
      const Vector& sv = svd.singularValues();
      if (sv.size() == 0 || sv(sv.size() - 1) <= 1e-12 * sv(0))
        throw PreconditionError("solve_Q: theta restricted to q_gamma is not injective");
      R_ = Matrix::Identity(T_.cols(), T_.cols());
      cod_.compute(T_);
      return;
    }
    ops_ = ambient_basis(gamma_);
    T_ = theta_matrix(gamma_, ops_);
    const Matrix G = gamma_.induced_metric();
    Eigen::LLT<Matrix> llt(G);
    const Matrix U = llt.matrixU();
    const Matrix Uinv = U.inverse();
    Matrix W(n * n, static_cast<Eigen::Index>(ops_.size()));
    for (size_t c = 0; c < ops_.size(); ++c) W.col(static_cast<Eigen::Index>(c)) = linalg::flatten(U * ops_[c] * Uinv);
    Eigen::HouseholderQR<Matrix> qr(W);
    R_ = qr.matrixQR().topRows(W.cols()).triangularView<Eigen::Upper>();
    // T x = q with y = R x: minimal |y| is minimal |A|_G
    const Matrix TR = R_.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(T_);
    cod_.setThreshold(1e-11);
    cod_.compute(TR);
  }

  const GeometricStructure& structure() const { return gamma_; }

  /// Orthonormal basis of q_gamma (built on first use for the weighted kinds).
  const std::vector<Matrix>& basis() const {
    if (!basis_ready_) {
      basis_ = complement_basis(gamma_);
      basis_ready_ = true;
    }
    return basis_;
  }

  /// Comparability constant: |theta(Q) gamma| >= C |Q| on q_gamma.
  double comparability_constant() const { return linalg::min_singular_value(theta_matrix(gamma_, basis())); }

  /// Unique Q in q_gamma with theta(Q) gamma = q.
  Matrix solve(const Tensor& q) const {
    const Vector rhs = flatten(q);
    const Vector y = cod_.solve(rhs);
    const Vector x = R_.triangularView<Eigen::Upper>().solve(y);
    const double res = (T_ * x - rhs).norm();
    if (res > tol_ * std::max(1.0, rhs.norm()))
      throw PreconditionError("solve_Q: tensor is not in the image of theta(q_gamma) (residual " +
                              std::to_string(res) + ")");
    const int n = gamma_.dim();
    Matrix Q = Matrix::Zero(n, n);
    for (size_t c = 0; c < ops_.size(); ++c) Q += x(static_cast<Eigen::Index>(c)) * ops_[c];
    return Q;
  }

 private:
  GeometricStructure gamma_;
  double tol_;
  std::vector<Matrix> ops_;  // operators parametrizing the unknown
  Matrix T_;                 // theta on ops_
  Matrix R_;                 // coordinate change to the weighted norm
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod_;
  mutable std::vector<Matrix> basis_;
  mutable bool basis_ready_ = false;
};

inline Matrix solve_Q(const GeometricStructure& gamma, const Tensor& q) { return QSolver(gamma).solve(q); }

struct ConditionReport {
  std::string condition;
  double residual = 0.0;
  bool ok = false;
};

/// Integrability (h5-J) for complex/hermitian structures, closedness (h5-omega)
/// for symplectic ones, evaluated on mu_p over all basis pairs/triples.
inline ConditionReport structure_conditions(const LieBracket& mu, const GeometricStructure& gamma,
                                            double tol = 1e-9) {
  const LieBracket mp = p_component(mu);
  const int n = mp.dim();
  if (n != gamma.dim()) throw ConfigError("structure_conditions: dimension mismatch");
  ConditionReport rep;
  const double scale = std::max(1.0, norm(mp));
  if (gamma.kind() == StructureKind::complex || gamma.kind() == StructureKind::hermitian) {
    const Matrix& J = gamma.complex_structure();
    rep.condition = "h5-J";
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const Vector X = Vector::Unit(n, a), Y = Vector::Unit(n, b);
        const Vector JX = J * X, JY = J * Y;
        const Vector r = mp.apply(JX, JY) - mp.apply(X, Y) - J * mp.apply(JX, Y) - J * mp.apply(X, JY);
        rep.residual = std::max(rep.residual, r.lpNorm<Eigen::Infinity>());
      }
  } else if (gamma.kind() == StructureKind::symplectic) {
    const Matrix& W = gamma.matrix();
    rep.condition = "h5-omega";
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          const Vector X = Vector::Unit(n, a), Y = Vector::Unit(n, b), Z = Vector::Unit(n, c);
          const double r = mp.apply(X, Y).dot(W * Z) + mp.apply(Y, Z).dot(W * X) + mp.apply(Z, X).dot(W * Y);
          rep.residual = std::max(rep.residual, std::abs(r));
        }
  } else {
    throw PreconditionError("structure_conditions: needs a complex, hermitian or symplectic structure");
  }
  rep.ok = rep.residual <= tol * scale;
  return rep;
}

struct AdmissibilityReport {
  bool h1_ok = false;
  bool h3_ok = false;
  bool h4_ok = false;
  double jacobi = 0.0;
  double block = 0.0;       // norm of the parts of mu(k,k) outside k and mu(k,p) outside p
  double kernel = 0.0;      // smallest singular value of Z -> ad Z|_p on k
  double invariance = 0.0;  // max over Z of |theta(ad Z|_p) gamma|
  std::string h2 = "not checked";
};

/// Conditions (h1), (h3), (h4) for (mu, gamma); (h2) is never inferred.
inline AdmissibilityReport check_admissible(const LieBracket& mu, const GeometricStructure& gamma,
                                            const Tolerances& tol = default_tolerances()) {
  const int q = mu.space().q, n = mu.space().n, N = mu.dim();
  if (gamma.dim() != n) throw ConfigError("check_admissible: structure dimension does not match p");
  AdmissibilityReport rep;
  const double scale = std::max(1.0, norm(mu));
  rep.jacobi = jacobi_residual(mu);
  double off = 0.0;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        // mu(k,k) must land in k, mu(k,p) in p
        const bool bad = (j < q) ? (k >= q) : (k < q);
        if (bad) off += 2.0 * mu(i, j, k) * mu(i, j, k);
      }
  rep.block = std::sqrt(off);
  rep.h1_ok = rep.jacobi <= tol.jacobi * scale * scale && rep.block <= tol.block * scale;
  if (q == 0) {
    rep.kernel = INFINITY;
    rep.h3_ok = true;
    rep.h4_ok = true;
    return rep;
  }
  Matrix adk(n * n, q);
  for (int l = 0; l < q; ++l) {
    const Matrix A = ad_restricted_p(mu, l);
    adk.col(l) = linalg::flatten(A);
    rep.invariance = std::max(rep.invariance, tensor_norm(theta(A, gamma)));
  }
  rep.kernel = linalg::min_singular_value(adk);
  rep.h3_ok = rep.kernel > tol.kernel;
  rep.h4_ok = rep.invariance <= tol.invariance * scale;
  return rep;
}

}  // namespace hflow
