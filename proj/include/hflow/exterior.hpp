#pragma once

// Exterior algebra over p* with coefficients on strictly increasing
// multi-indices. Multi-indices are stored as bitmasks; the orientation is
// fixed as e^1 ^ ... ^ e^n (times an optional sign for the Hodge star).

#include "hflow/lie_core.hpp"
#include "hflow/linalg.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace hflow {

inline constexpr int kMaxFormDim = 12;

namespace detail {

struct FormLayout {
  std::vector<std::uint32_t> masks;  // lexicographic order of index lists
  std::vector<int> rank_of;          // mask -> position, -1 if popcount != k
};

inline void enumerate_lex(int n, int k, int start, std::uint32_t mask, std::vector<std::uint32_t>& out) {
  if (k == 0) {
    out.push_back(mask);
    return;
  }
  for (int i = start; i <= n - k; ++i) enumerate_lex(n, k - 1, i + 1, mask | (1u << i), out);
}

inline const FormLayout& layout(int n, int k) {
  static const auto table = [] {
    std::array<std::array<FormLayout, kMaxFormDim + 1>, kMaxFormDim + 1> t;
    for (int nn = 0; nn <= kMaxFormDim; ++nn)
      for (int kk = 0; kk <= nn; ++kk) {
        FormLayout& L = t[static_cast<size_t>(nn)][static_cast<size_t>(kk)];
        enumerate_lex(nn, kk, 0, 0u, L.masks);
        L.rank_of.assign(static_cast<size_t>(1u << nn), -1);
        for (size_t r = 0; r < L.masks.size(); ++r) L.rank_of[L.masks[r]] = static_cast<int>(r);
      }
    return t;
  }();
  if (n < 0 || n > kMaxFormDim || k < 0 || k > n) throw ConfigError("form layout: unsupported (n, k)");
  return table[static_cast<size_t>(n)][static_cast<size_t>(k)];
}

/// Number of elements of `mask` strictly greater than index i.
inline int count_above(std::uint32_t mask, int i) { return std::popcount(mask >> (i + 1)); }

/// Sign of e^I ^ e^J relative to e^{I u J} for disjoint I, J.
inline int merge_sign(std::uint32_t I, std::uint32_t J) {
  int inversions = 0;
  for (std::uint32_t rest = J; rest; rest &= rest - 1) inversions += count_above(I, std::countr_zero(rest));
  return (inversions & 1) ? -1 : 1;
}

inline std::vector<int> indices_of(std::uint32_t mask) {
  std::vector<int> out;
  for (std::uint32_t rest = mask; rest; rest &= rest - 1) out.push_back(std::countr_zero(rest));
  return out;
}

}  // namespace detail

/// A constant-coefficient k-form on an n-dimensional space.
class KForm {
 public:
  KForm() : KForm(1, 0) {}
  KForm(int n, int degree) : n_(n), k_(degree), c_(Vector::Zero(static_cast<Eigen::Index>(layout().masks.size()))) {}

  /// v * e^{i1} ^ ... ^ e^{ik} for arbitrary (0-based) indices; repeated indices give 0.
  static KForm monomial(int n, const std::vector<int>& idx, double v = 1.0) {
    KForm f(n, static_cast<int>(idx.size()));
    f.add_term(idx, v);
    return f;
  }

  void add_term(const std::vector<int>& idx, double v) {
    if (static_cast<int>(idx.size()) != k_) throw ConfigError("KForm: index count differs from degree");
    std::uint32_t mask = 0;
    int sign = 1;
    for (int i : idx) {
      if (i < 0 || i >= n_) throw ConfigError("KForm: index out of range");
      if (mask & (1u << i)) return;
      if (detail::count_above(mask, i) & 1) sign = -sign;
      mask |= 1u << i;
    }
    c_(layout().rank_of[mask]) += sign * v;
  }

  int dim() const { return n_; }
  int degree() const { return k_; }
  Eigen::Index size() const { return c_.size(); }

  const Vector& coeffs() const { return c_; }
  Vector& coeffs() { return c_; }

  std::uint32_t mask(Eigen::Index r) const { return layout().masks[static_cast<size_t>(r)]; }
  Eigen::Index rank(std::uint32_t mask) const { return layout().rank_of[mask]; }

  /// Coefficient on an arbitrary index tuple, with the permutation sign.
  double at(const std::vector<int>& idx) const {
    KForm probe = monomial(n_, idx);
    return probe.c_.dot(c_);
  }

  KForm& operator+=(const KForm& o) {
    check_same(o);
    c_ += o.c_;
    return *this;
  }
  KForm& operator-=(const KForm& o) {
    check_same(o);
    c_ -= o.c_;
    return *this;
  }
  KForm& operator*=(double s) {
    c_ *= s;
    return *this;
  }
  friend KForm operator+(KForm a, const KForm& b) { return a += b; }
  friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
  friend KForm operator*(double s, KForm a) { return a *= s; }

  double norm() const { return c_.norm(); }

  void check_same(const KForm& o) const {
    if (n_ != o.n_ || k_ != o.k_) throw ConfigError("KForm: dimension or degree mismatch");
  }

 private:
  const detail::FormLayout& layout() const { return detail::layout(n_, k_); }

  int n_;
  int k_;
  Vector c_;
};

inline KForm wedge(const KForm& a, const KForm& b) {
  if (a.dim() != b.dim()) throw ConfigError("wedge: dimension mismatch");
  if (a.degree() + b.degree() > a.dim()) throw ConfigError("wedge: degree overflow");
  KForm out(a.dim(), a.degree() + b.degree());
  for (Eigen::Index r = 0; r < a.size(); ++r) {
    const double x = a.coeffs()(r);
    if (x == 0.0) continue;
    const auto I = a.mask(r);
    for (Eigen::Index s = 0; s < b.size(); ++s) {
      const double y = b.coeffs()(s);
      if (y == 0.0) continue;
      const auto J = b.mask(s);
      if (I & J) continue;
      out.coeffs()(out.rank(I | J)) += detail::merge_sign(I, J) * x * y;
    }
  }
  return out;
}

/// Interior product with a vector X of length n.
inline KForm interior(const Vector& X, const KForm& a) {
  if (a.degree() < 1) throw ConfigError("interior: degree-0 input");
  if (X.size() != a.dim()) throw ConfigError("interior: dimension mismatch");
  KForm out(a.dim(), a.degree() - 1);
  for (Eigen::Index r = 0; r < a.size(); ++r) {
    const double x = a.coeffs()(r);
    if (x == 0.0) continue;
    const auto I = a.mask(r);
    int pos = 0;
    for (int i : detail::indices_of(I)) {
      const double xi = X(i);
      if (xi != 0.0) out.coeffs()(out.rank(I & ~(1u << i))) += ((pos & 1) ? -1.0 : 1.0) * xi * x;
      ++pos;
    }
  }
  return out;
}

/// k-th compound matrix: entry (I, J) = det M[I, J] over increasing multi-indices.
///
/// Column J is M e_{j_1} ^ ... ^ M e_{j_k}, built from the (k-1)-th compound.
inline Matrix compound(const Matrix& M, int k) {
  const int n = static_cast<int>(M.rows());
  const auto& L = detail::layout(n, k);
  const auto m = static_cast<Eigen::Index>(L.masks.size());
  Matrix C = Matrix::Zero(m, m);
  if (k == 0) {
    C(0, 0) = 1.0;
    return C;
  }
  if (k == 1) return M;
  const Matrix prev = compound(M, k - 1);
  const auto& Lp = detail::layout(n, k - 1);
  for (Eigen::Index s = 0; s < m; ++s) {
    const std::uint32_t J = L.masks[static_cast<size_t>(s)];
    const int top = 31 - std::countl_zero(J);
    const Eigen::Index sp = Lp.rank_of[J & ~(1u << top)];
    for (Eigen::Index r = 0; r < prev.rows(); ++r) {
      const double x = prev(r, sp);
      if (x == 0.0) continue;
      const std::uint32_t I = Lp.masks[static_cast<size_t>(r)];
      for (int i = 0; i < n; ++i) {
        const double y = M(i, top);
        if (y == 0.0 || (I & (1u << i))) continue;
        C(L.rank_of[I | (1u << i)], s) += detail::merge_sign(I, 1u << i) * x * y;
      }
    }
  }
  return C;
}

/// Pullback (M^* a)(X_1, ..., X_k) = a(M X_1, ..., M X_k).
inline KForm pullback(const Matrix& M, const KForm& a) {
  KForm out(a.dim(), a.degree());
  out.coeffs() = compound(M, a.degree()).transpose() * a.coeffs();
  return out;
}

/// Inner product of k-forms induced by the metric G (sum over increasing multi-indices).
inline double form_inner(const Matrix& G, const KForm& a, const KForm& b) {
  a.check_same(b);
  return a.coeffs().dot(compound(G.inverse(), a.degree()) * b.coeffs());
}

/// Hodge star of the metric G with orientation sign * e^1 ^ ... ^ e^n.
///
/// *a = sign sqrt(det G) sum_I a^I sgn(I, I^c) e^{I^c}, where a^I are the
/// components raised by G^{-1} (the compound of G^{-1} acting on a).
inline KForm hodge_star(const Matrix& G, const KForm& a, int orientation = 1) {
  const int n = a.dim(), k = a.degree();
  if (G.rows() != n || G.cols() != n) throw ConfigError("hodge_star: metric dimension mismatch");
  Eigen::LLT<Matrix> llt(0.5 * (G + G.transpose()));
  if (llt.info() != Eigen::Success) throw PreconditionError("hodge_star: metric is not positive definite");
  const double vol = std::sqrt(G.determinant());
  const bool identity = G.isIdentity(0.0);
  const Vector raised = identity ? a.coeffs() : Vector(compound(G.inverse(), k) * a.coeffs());
  const std::uint32_t full = (1u << n) - 1u;
  KForm out(n, n - k);
  for (Eigen::Index r = 0; r < a.size(); ++r) {
    const double x = raised(r);
    if (x == 0.0) continue;
    const auto I = a.mask(r);
    const auto Ic = full & ~I;
    out.coeffs()(out.rank(Ic)) += orientation * vol * detail::merge_sign(I, Ic) * x;
  }
  return out;
}

/// Chevalley-Eilenberg differential of left-invariant forms on the Lie group of mu (q = 0).
///
/// (d a)(X_0..X_k) = sum_{s<t} (-1)^{s+t} a(mu(X_s, X_t), X_0, ..^s..^t.., X_k).
inline KForm ce_differential(const LieBracket& mu, const KForm& a) {
  if (mu.space().q != 0) throw PreconditionError("ce_differential: requires q = 0");
  const int n = mu.dim();
  if (a.dim() != n) throw ConfigError("ce_differential: dimension mismatch");
  const int k = a.degree();
  KForm out(n, k + 1);
  if (k + 1 > n) return out;
  for (Eigen::Index r = 0; r < out.size(); ++r) {
    const auto I = out.mask(r);
    const auto idx = detail::indices_of(I);
    double total = 0.0;
    for (int s = 0; s <= k; ++s)
      for (int t = s + 1; t <= k; ++t) {
        const int xs = idx[static_cast<size_t>(s)], xt = idx[static_cast<size_t>(t)];
        const std::uint32_t rest = I & ~(1u << xs) & ~(1u << xt);
        const double outer = ((s + t) & 1) ? -1.0 : 1.0;
        for (int m = 0; m < n; ++m) {
          const double c = mu(xs, xt, m);
          if (c == 0.0 || (rest & (1u << m))) continue;
          // a(e_m, rest...) = (-1)^{#rest below m} a_{rest u m}
          const int below = std::popcount(rest & ((1u << m) - 1u));
          const double coeff = a.coeffs()(a.rank(rest | (1u << m)));
          total += outer * c * ((below & 1) ? -coeff : coeff);
        }
      }
    out.coeffs()(r) = total;
  }
  return out;
}

/// Codifferential on k-forms: d^* = (-1)^{n(k+1)+1} * d *.
///
/// For n = 7 this gives d^* = - * d * on 3-forms and + * d * on 4-forms, so the
/// Hodge Laplacian of a 3-form reads -d*d* + *d*d.
inline KForm codifferential(const LieBracket& mu, const Matrix& G, const KForm& a) {
  const int n = a.dim(), k = a.degree();
  if (k == 0) return KForm(n, 0);
  const int sign = ((n * (k + 1) + 1) & 1) ? -1 : 1;
  return static_cast<double>(sign) * hodge_star(G, ce_differential(mu, hodge_star(G, a)));
}

/// Hodge Laplacian d d^* + d^* d of a left-invariant form.
inline KForm hodge_laplacian(const LieBracket& mu, const Matrix& G, const KForm& a,
                             double jacobi_tol = default_tolerances().jacobi) {
  if (mu.space().q != 0) throw PreconditionError("hodge_laplacian: requires q = 0");
  if (jacobi_residual(mu) > jacobi_tol * std::max(1.0, norm(mu) * norm(mu)))
    throw PreconditionError("hodge_laplacian: bracket fails the Jacobi identity");
  KForm out(a.dim(), a.degree());
  if (a.degree() > 0) out += ce_differential(mu, codifferential(mu, G, a));
  if (a.degree() < a.dim()) out += codifferential(mu, G, ce_differential(mu, a));
  return out;
}

}  // namespace hflow
