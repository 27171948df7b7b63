#pragma once

// Structure-constant model of brackets on a split space g = k + p.
//
// Basis indices are 0-based here: 0..q-1 span the isotropy part k and
// q..q+n-1 span the tangent part p. The inner product is the one making
// this basis orthonormal, with k and p orthogonal.

#include "hflow/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>
#include <vector>

namespace hflow {

struct SplitSpace {
  int q = 0;  // dim k
  int n = 1;  // dim p

  SplitSpace() = default;
  SplitSpace(int q_, int n_) : q(q_), n(n_) {
    if (q < 0 || n < 1) throw ConfigError("SplitSpace requires q >= 0 and n >= 1");
  }

  int dim() const { return q + n; }
  bool in_k(int i) const { return i < q; }
  bool in_p(int i) const { return i >= q; }

  friend bool operator==(const SplitSpace&, const SplitSpace&) = default;
};

/// Antisymmetric bilinear map g x g -> g, stored densely as c_{ij}^k.
///
/// Antisymmetry is structural: set() writes both (i,j) and (j,i). The same
/// type holds points of the variety (Lie brackets) and arbitrary elements of
/// Lambda^2 g* (x) g such as delta_mu(A).
class LieBracket {
 public:
  LieBracket() : LieBracket(SplitSpace{0, 1}) {}
  explicit LieBracket(SplitSpace space)
      : space_(space), c_(static_cast<size_t>(space.dim()) * space.dim() * space.dim(), 0.0) {}

  struct Entry {
    int i, j, k;
    double v;
  };

  /// Builds a bracket from entries c_{ij}^k = v (mirrored to c_{ji}^k = -v).
  static LieBracket from_entries(SplitSpace space, const std::vector<Entry>& entries) {
    LieBracket mu(space);
    for (const auto& e : entries) mu.add(e.i, e.j, e.k, e.v);
    return mu;
  }

  const SplitSpace& space() const { return space_; }
  int dim() const { return space_.dim(); }

  double operator()(int i, int j, int k) const { return c_[index(i, j, k)]; }

  void set(int i, int j, int k, double v) {
    if (i == j) {
      if (v != 0.0) throw ConfigError("LieBracket: c_{ii}^k must vanish");
      return;
    }
    c_[index(i, j, k)] = v;
    c_[index(j, i, k)] = -v;
  }

  void add(int i, int j, int k, double v) { set(i, j, k, (*this)(i, j, k) + v); }

  /// mu(X, Y) for coordinate vectors X, Y of length dim().
  Vector apply(const Vector& X, const Vector& Y) const {
    const int N = dim();
    Vector out = Vector::Zero(N);
    for (int i = 0; i < N; ++i) {
      if (X(i) == 0.0) continue;
      for (int j = 0; j < N; ++j) {
        const double w = X(i) * Y(j);
        if (w == 0.0) continue;
        for (int k = 0; k < N; ++k) out(k) += w * (*this)(i, j, k);
      }
    }
    return out;
  }

  /// Raw storage, layout ((i*N)+j)*N+k.
  const std::vector<double>& data() const { return c_; }
  std::vector<double>& data() { return c_; }

  Vector as_vector() const { return Eigen::Map<const Vector>(c_.data(), static_cast<Eigen::Index>(c_.size())); }
  static LieBracket from_vector(SplitSpace space, const Vector& v) {
    LieBracket mu(space);
    assert(static_cast<size_t>(v.size()) == mu.c_.size());
    std::copy(v.data(), v.data() + v.size(), mu.c_.begin());
    return mu;
  }

  LieBracket& operator+=(const LieBracket& o) {
    check_same(o);
    for (size_t a = 0; a < c_.size(); ++a) c_[a] += o.c_[a];
    return *this;
  }
  LieBracket& operator-=(const LieBracket& o) {
    check_same(o);
    for (size_t a = 0; a < c_.size(); ++a) c_[a] -= o.c_[a];
    return *this;
  }
  LieBracket& operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend LieBracket operator+(LieBracket a, const LieBracket& b) { return a += b; }
  friend LieBracket operator-(LieBracket a, const LieBracket& b) { return a -= b; }
  friend LieBracket operator*(double s, LieBracket a) { return a *= s; }

  void check_same(const LieBracket& o) const {
    if (!(space_ == o.space_)) throw ConfigError("LieBracket: split spaces differ");
  }

 private:
  size_t index(int i, int j, int k) const {
    const size_t N = static_cast<size_t>(dim());
    return (static_cast<size_t>(i) * N + static_cast<size_t>(j)) * N + static_cast<size_t>(k);
  }

  SplitSpace space_;
  std::vector<double> c_;
};

/// <mu, lambda> = sum over ordered basis pairs of <mu(e_i,e_j), lambda(e_i,e_j)>.
inline double bracket_inner(const LieBracket& mu, const LieBracket& lambda) {
  mu.check_same(lambda);
  double s = 0.0;
  const auto& a = mu.data();
  const auto& b = lambda.data();
  for (size_t t = 0; t < a.size(); ++t) s += a[t] * b[t];
  return s;
}

inline double norm(const LieBracket& mu) { return std::sqrt(bracket_inner(mu, mu)); }

/// p-component of mu restricted to p x p, as a bracket on p alone (q = 0).
inline LieBracket p_component(const LieBracket& mu) {
  const int q = mu.space().q, n = mu.space().n;
  LieBracket out(SplitSpace{0, n});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) out.set(i, j, k, mu(q + i, q + j, q + k));
  return out;
}

/// k-component of mu restricted to p x p, on the full space (all other entries zero).
inline LieBracket k_component(const LieBracket& mu) {
  const int q = mu.space().q, N = mu.dim();
  LieBracket out(mu.space());
  for (int i = q; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      for (int l = 0; l < q; ++l) out.set(i, j, l, mu(i, j, l));
  return out;
}

/// The part of mu involving at least one k argument, i.e. mu restricted to k x g.
inline LieBracket k_by_g_part(const LieBracket& mu) {
  const int q = mu.space().q, N = mu.dim();
  LieBracket out(mu.space());
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      for (int k = 0; k < N; ++k) out.set(i, j, k, mu(i, j, k));
    }
  return out;
}

inline double norm_p(const LieBracket& mu) { return norm(p_component(mu)); }
inline double norm_k(const LieBracket& mu) { return norm(k_component(mu)); }

/// Frobenius norm of the Jacobiator over all ordered basis triples.
inline double jacobi_residual(const LieBracket& mu) {
  const int N = mu.dim();
  // T(x,y,z,k) = sum_m c_{xy}^m c_{mz}^k
  double total = 0.0;
  std::vector<double> term(static_cast<size_t>(N));
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y)
      for (int z = 0; z < N; ++z) {
        std::fill(term.begin(), term.end(), 0.0);
        for (int m = 0; m < N; ++m) {
          const double a = mu(x, y, m), b = mu(y, z, m), c = mu(z, x, m);
          if (a == 0.0 && b == 0.0 && c == 0.0) continue;
          for (int k = 0; k < N; ++k)
            term[static_cast<size_t>(k)] += a * mu(m, z, k) + b * mu(m, x, k) + c * mu(m, y, k);
        }
        for (double v : term) total += v * v;
      }
  return std::sqrt(total);
}

/// (h . mu)(X, Y) = h mu(h^{-1} X, h^{-1} Y).
inline LieBracket act(const Matrix& h, const LieBracket& mu,
                      double max_condition = default_tolerances().condition) {
  const int N = mu.dim();
  if (h.rows() != N || h.cols() != N) throw ConfigError("act: dimension mismatch");
  Eigen::FullPivLU<Matrix> lu(h);
  if (!lu.isInvertible() || linalg::condition_number(h) > max_condition)
    throw PreconditionError("act: operator is singular or ill-conditioned");
  const Matrix hinv = lu.inverse();

  // Stage through the three indices: c'_{ij}^k = h_{km} c_{ab}^m hinv_{ai} hinv_{bj}.
  const size_t NN = static_cast<size_t>(N);
  std::vector<double> t1(NN * NN * NN, 0.0), t2(NN * NN * NN, 0.0);
  auto at = [NN](std::vector<double>& v, int a, int b, int c) -> double& {
    return v[(static_cast<size_t>(a) * NN + static_cast<size_t>(b)) * NN + static_cast<size_t>(c)];
  };
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int m = 0; m < N; ++m) {
        const double v = mu(a, b, m);
        if (v == 0.0) continue;
        for (int k = 0; k < N; ++k) at(t1, a, b, k) += h(k, m) * v;
      }
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int k = 0; k < N; ++k) {
        const double v = at(t1, a, b, k);
        if (v == 0.0) continue;
        for (int j = 0; j < N; ++j) at(t2, a, j, k) += hinv(b, j) * v;
      }
  LieBracket out(mu.space());
  auto& c = out.data();
  for (int a = 0; a < N; ++a)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        const double v = at(t2, a, j, k);
        if (v == 0.0) continue;
        for (int i = 0; i < N; ++i)
          c[(static_cast<size_t>(i) * NN + static_cast<size_t>(j)) * NN + static_cast<size_t>(k)] +=
              hinv(a, i) * v;
      }
  return out;
}

/// delta_mu(A) = mu(A., .) + mu(., A.) - A mu(., .).
inline LieBracket delta(const LieBracket& mu, const Matrix& A) {
  const int N = mu.dim();
  if (A.rows() != N || A.cols() != N) throw ConfigError("delta: dimension mismatch");
  LieBracket out(mu.space());
  auto& c = out.data();
  const size_t NN = static_cast<size_t>(N);
  auto idx = [NN](int i, int j, int k) {
    return (static_cast<size_t>(i) * NN + static_cast<size_t>(j)) * NN + static_cast<size_t>(k);
  };
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      for (int k = 0; k < N; ++k) {
        double s = 0.0;
        for (int a = 0; a < N; ++a) {
          s += A(a, i) * mu(a, j, k) + A(a, j) * mu(i, a, k);
          s -= A(k, a) * mu(i, j, a);
        }
        c[idx(i, j, k)] = s;
      }
    }
  return out;
}

/// Embeds an operator on p as the block operator [0 0; 0 A_p] on g.
inline Matrix block_p(const Matrix& A_p, int q) {
  const auto n = A_p.rows();
  Matrix A = Matrix::Zero(q + n, q + n);
  A.bottomRightCorner(n, n) = A_p;
  return A;
}

/// The block operator [I 0; 0 h] on g.
inline Matrix block_identity_p(const Matrix& h, int q) {
  const auto n = h.rows();
  Matrix A = Matrix::Identity(q + n, q + n);
  A.bottomRightCorner(n, n) = h;
  return A;
}

/// Geometric scaling c . mu: unchanged on k x g, c^2 on mu_k, c on mu_p.
inline LieBracket scale(double c, const LieBracket& mu) {
  const int q = mu.space().q, N = mu.dim();
  LieBracket out = mu;
  for (int i = q; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      for (int k = 0; k < N; ++k) out.set(i, j, k, (k < q ? c * c : c) * mu(i, j, k));
  return out;
}

/// Moment-map operator M on p: tr(M E) = -1/4 <delta_{mu_p}(E), mu_p> for all E.
///
/// Assembled entrywise from the elementary operators E_ij = e_i e_j^T, for
/// which tr(M E_ij) = M_ji.
inline Matrix moment_map(const LieBracket& mu) {
  const LieBracket mp = p_component(mu);
  const int n = mp.dim();
  Matrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix E = Matrix::Zero(n, n);
      E(i, j) = 1.0;
      M(j, i) = -0.25 * bracket_inner(delta(mp, E), mp);
    }
  return 0.5 * (M + M.transpose());
}

/// Normalized moment map m(mu_p) = 4 / |mu_p|^2 M; zero for mu_p = 0.
inline Matrix normalized_moment_map(const LieBracket& mu) {
  const double n2 = std::pow(norm_p(mu), 2);
  const Matrix M = moment_map(mu);
  if (n2 == 0.0) return Matrix::Zero(M.rows(), M.cols());
  return (4.0 / n2) * M;
}

/// Skew map J(Z) on p with <J(Z)X, Y> = <mu_k(X, Y), Z> for the basis vector Z = e_l of k.
inline Matrix j_map(const LieBracket& mu, int l) {
  const int q = mu.space().q, n = mu.space().n;
  if (q == 0) throw PreconditionError("j_map: isotropy is trivial (q = 0)");
  if (l < 0 || l >= q) throw ConfigError("j_map: index outside k");
  Matrix J(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) J(b, a) = mu(q + a, q + b, l);
  return J;
}

enum class BlockConstraint { none, p_only };

/// Orthonormal basis (Frobenius) of Der(mu), optionally restricted to
/// operators of the block form [0 0; 0 D_p]. Returned operators act on g.
inline std::vector<Matrix> derivation_space(const LieBracket& mu,
                                            BlockConstraint constraint = BlockConstraint::none,
                                            double rel_tol = default_tolerances().nullspace_rel) {
  const int N = mu.dim(), q = mu.space().q, n = mu.space().n;
  const int m = (constraint == BlockConstraint::none) ? N : n;
  const int off = (constraint == BlockConstraint::none) ? 0 : q;
  const Eigen::Index rows = static_cast<Eigen::Index>(N) * N * N;
  Matrix L(rows, m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      Matrix E = Matrix::Zero(N, N);
      E(off + a, off + b) = 1.0;
      L.col(b * m + a) = delta(mu, E).as_vector();  // column-major flattening of the m x m block
    }
  // An all-zero system (abelian case) has no scale; its kernel is everything.
  Matrix K = (L.norm() == 0.0) ? Matrix(Matrix::Identity(m * m, m * m)) : linalg::nullspace(L, rel_tol);
  std::vector<Matrix> basis;
  basis.reserve(static_cast<size_t>(K.cols()));
  for (Eigen::Index c = 0; c < K.cols(); ++c) {
    Matrix D = Matrix::Zero(N, N);
    D.block(off, off, m, m) = linalg::unflatten(K.col(c), m, m);
    basis.push_back(std::move(D));
  }
  return basis;
}

inline bool is_derivation(const LieBracket& mu, const Matrix& D, double tol = 1e-9) {
  return norm(delta(mu, D)) <= tol * std::max(1.0, D.norm() * std::max(1.0, norm(mu)));
}

/// Lower-central-series test: C^0 = g, C^{j+1} = [g, C^j] must reach 0 within dim g steps.
inline bool is_nilpotent(const LieBracket& mu, double rel_tol = 1e-10) {
  const int N = mu.dim();
  Matrix C = Matrix::Identity(N, N);
  const double scale = std::max(1.0, norm(mu));
  for (int depth = 0; depth <= N; ++depth) {
    if (C.cols() == 0) return true;
    Matrix next(N, N * C.cols());
    for (int i = 0; i < N; ++i) {
      Vector ei = Vector::Unit(N, i);
      for (Eigen::Index c = 0; c < C.cols(); ++c) next.col(i * C.cols() + c) = mu.apply(ei, C.col(c));
    }
    if (next.norm() <= rel_tol * scale) return true;
    Eigen::JacobiSVD<Matrix> svd(next, Eigen::ComputeThinU);
    const Vector& s = svd.singularValues();
    int r = 0;
    for (Eigen::Index t = 0; t < s.size(); ++t)
      if (s(t) > rel_tol * scale) ++r;
    if (r == C.cols()) return false;  // series stabilized at a nonzero ideal
    C = svd.matrixU().leftCols(r);
  }
  return C.cols() == 0;
}

/// Matrix of ad_mu(e_l) restricted to p (columns are images of the p basis).
inline Matrix ad_restricted_p(const LieBracket& mu, int l) {
  const int q = mu.space().q, n = mu.space().n;
  Matrix A(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) A(b, a) = mu(l, q + a, q + b);
  return A;
}

inline std::string describe(const LieBracket& mu) {
  std::ostringstream os;
  os << "LieBracket(q=" << mu.space().q << ", n=" << mu.space().n << ", |mu|=" << norm(mu) << ")";
  return os.str();
}

}  // namespace hflow
