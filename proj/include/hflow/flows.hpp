#pragma once

// Flow plugins: tensor type (r, s), scaling exponent alpha, and the velocity
// q(mu, gamma) whose unique q_gamma preimage is Q_mu. Exact Chern-Ricci
// solutions live here as well.

#include "hflow/structures.hpp"

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace hflow {

struct FlowSpec {
  std::string name;
  int r = 0;
  int s = 0;
  double alpha = 0.0;
  /// Velocity tensor q(gamma) evaluated on the space with bracket mu.
  std::function<Tensor(const LieBracket&, const GeometricStructure&)> velocity;
  /// Empty string when the flow applies, otherwise the reason it does not.
  std::function<std::string(const LieBracket&, const GeometricStructure&)> applicable;

  /// (r - s)(1 - alpha): Q_{c.mu} = c^e Q_mu.
  double scaling_exponent() const { return (r - s) * (1.0 - alpha); }

  /// Q_mu in q_gamma.
  Matrix Q(const LieBracket& mu, const GeometricStructure& gamma) const {
    return QSolver(gamma).solve(velocity(mu, gamma));
  }

  void require(const LieBracket& mu, const GeometricStructure& gamma) const {
    const std::string why = applicable(mu, gamma);
    if (!why.empty()) throw PreconditionError(name + ": " + why);
  }
};

// ---------------------------------------------------------------------------
// Laplacian flow of closed G2-structures

inline KForm g2_laplacian(const LieBracket& mu, const KForm& phi) {
  const G2Metric gm = g2_induced_metric(phi);
  if (!gm.positive) throw PreconditionError("laplacian_g2: 3-form is not positive");
  return hodge_laplacian(mu, gm.metric, phi);
}

inline Matrix laplacian_flow_Q(const LieBracket& mu, const GeometricStructure& phi) {
  if (phi.kind() != StructureKind::g2) throw PreconditionError("laplacian_g2: needs a G2-structure");
  return solve_Q(phi, g2_laplacian(mu, phi.form()));
}

// ---------------------------------------------------------------------------
// Chern-Ricci flow

/// ad_p(W) for W in p: Y -> mu(W, Y)_p on p.
inline Matrix ad_p(const LieBracket& mu, const Vector& W) {
  const int q = mu.space().q, n = mu.space().n, N = mu.dim();
  Vector Wg = Vector::Zero(N);
  Wg.tail(n) = W;
  Matrix A(n, n);
  for (int b = 0; b < n; ++b) A.col(b) = mu.apply(Wg, Vector::Unit(N, q + b)).tail(n);
  return A;
}

/// Chern-Ricci form p(X, Y) = -1/2 tr J ad_p mu_p(X,Y) + 1/2 tr ad_p J mu_p(X,Y),
/// as the skew matrix P with p(X, Y) = X^T P Y.
inline Matrix chern_ricci_form(const LieBracket& mu, const Matrix& J) {
  const int q = mu.space().q, n = mu.space().n;
  if (J.rows() != n) throw ConfigError("chern_ricci_form: J dimension mismatch");
  Matrix p(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Vector w(n);
      for (int k = 0; k < n; ++k) w(k) = mu(q + a, q + b, q + k);
      p(a, b) = -0.5 * (J * ad_p(mu, w)).trace() + 0.5 * ad_p(mu, J * w).trace();
    }
  return p;
}

/// Hermitian operator P with p = omega(P., .), omega(X, Y) = g(JX, Y).
inline Matrix chern_ricci_operator(const Matrix& p, const Matrix& J, const Matrix& g) {
  const Matrix omega = J.transpose() * g;
  Eigen::FullPivLU<Matrix> lu(omega);
  if (!lu.isInvertible()) throw PreconditionError("chern_ricci_operator: omega is degenerate");
  return (p * lu.inverse()).transpose();
}

/// g(t) = g0 - 2t p0(., J.).
inline Matrix crf_exact_metric(const Matrix& g0, const Matrix& J, const Matrix& p0, double t) {
  return g0 - 2.0 * t * p0 * J;
}

/// Maximal existence interval (T-, T+) from the eigenvalues of P0.
inline std::pair<double, double> crf_max_times(const Matrix& P0) {
  Eigen::EigenSolver<Matrix> es(P0);
  const Vector ev = es.eigenvalues().real();
  const double inf = std::numeric_limits<double>::infinity();
  const double pmax = ev.maxCoeff(), pmin = ev.minCoeff();
  const double tp = pmax > 1e-14 ? 1.0 / (2.0 * pmax) : inf;
  const double tm = pmin < -1e-14 ? 1.0 / (2.0 * pmin) : -inf;
  return {tm, tp};
}

/// Bracket at time t for a P0 that is diagonal in the basis of mu:
/// mu_p coefficients scale by ((1-2tp_k)/((1-2tp_i)(1-2tp_j)))^{1/2}, mu_k ones by
/// ((1-2tp_i)(1-2tp_j))^{-1/2}; k x g is unchanged.
inline LieBracket crf_exact_bracket(const LieBracket& mu0, const Vector& p_eigen, double t) {
  const int q = mu0.space().q, N = mu0.dim();
  auto f = [&](int i) {
    const double v = 1.0 - 2.0 * t * p_eigen(i - q);
    if (v <= 0.0) throw PreconditionError("crf_exact_bracket: t outside the existence interval");
    return v;
  };
  LieBracket mu = mu0;
  for (int i = q; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        const double c = mu0(i, j, k);
        if (c == 0.0) continue;
        const double w = (k < q) ? 1.0 / std::sqrt(f(i) * f(j)) : std::sqrt(f(k) / (f(i) * f(j)));
        mu.set(i, j, k, w * c);
      }
  return mu;
}

/// Same for a symmetric P0 (orthonormal g0): rotate to an eigenbasis, scale, rotate back.
inline LieBracket crf_exact_bracket(const LieBracket& mu0, const Matrix& P0, double t) {
  const int q = mu0.space().q;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (P0 + P0.transpose()));
  const Matrix V = es.eigenvectors();
  const LieBracket rotated = act(block_identity_p(Matrix(V.transpose()), q), mu0);
  return act(block_identity_p(V, q), crf_exact_bracket(rotated, Vector(es.eigenvalues()), t));
}

// ---------------------------------------------------------------------------
// Ricci flow on nilpotent Lie groups

/// Ricci operator of the metric G on the nilpotent Lie group of mu. With
/// G = U^T U, U is an isometry onto (U.mu, identity), whose Ricci operator is
/// the moment map.
inline Matrix nil_ricci_operator(const LieBracket& mu, const Matrix& G) {
  if (mu.space().q != 0) throw PreconditionError("ricci_nilpotent: requires q = 0");
  if (!is_nilpotent(mu)) throw PreconditionError("ricci_nilpotent: bracket is not nilpotent");
  if (G.isIdentity(0.0)) return moment_map(mu);
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success) throw PreconditionError("ricci_nilpotent: metric not positive definite");
  const Matrix U = llt.matrixU();
  return U.inverse() * moment_map(act(U, mu)) * U;
}

inline Matrix nil_ricci_Q(const LieBracket& mu) { return nil_ricci_operator(mu, Matrix::Identity(mu.dim(), mu.dim())); }

// ---------------------------------------------------------------------------
// Registry

inline FlowSpec laplacian_g2_flow() {
  FlowSpec f;
  f.name = "laplacian_g2";
  f.r = 3;
  f.s = 0;
  f.alpha = 1.0 / 3.0;
  f.velocity = [](const LieBracket& mu, const GeometricStructure& g) -> Tensor {
    return g2_laplacian(mu, g.form());
  };
  f.applicable = [](const LieBracket& mu, const GeometricStructure& g) -> std::string {
    if (g.kind() != StructureKind::g2) return "needs a G2-structure";
    if (mu.space().q != 0) return "requires q = 0";
    if (ce_differential(mu, g.form()).norm() > 1e-9 * std::max(1.0, norm(mu)))
      return "the G2-structure is not closed";
    return "";
  };
  return f;
}

inline FlowSpec chern_ricci_flow() {
  FlowSpec f;
  f.name = "chern_ricci";
  f.r = 2;
  f.s = 0;
  f.alpha = 0.0;
  f.velocity = [](const LieBracket& mu, const GeometricStructure& g) -> Tensor {
    const Matrix& J = g.complex_structure();
    return Matrix(-2.0 * chern_ricci_form(mu, J) * J);
  };
  f.applicable = [](const LieBracket& mu, const GeometricStructure& g) -> std::string {
    if (g.kind() != StructureKind::hermitian) return "needs a hermitian structure";
    if (!structure_conditions(mu, g).ok) return "J is not integrable";
    return "";
  };
  return f;
}

inline FlowSpec ricci_nilpotent_flow() {
  FlowSpec f;
  f.name = "ricci_nilpotent";
  f.r = 2;
  f.s = 0;
  f.alpha = 0.0;
  f.velocity = [](const LieBracket& mu, const GeometricStructure& g) -> Tensor {
    const Matrix G = g.induced_metric();
    return Matrix(-2.0 * G * nil_ricci_operator(mu, G));
  };
  f.applicable = [](const LieBracket& mu, const GeometricStructure& g) -> std::string {
    if (g.kind() != StructureKind::metric && g.kind() != StructureKind::hermitian) return "needs a metric";
    if (mu.space().q != 0) return "requires q = 0";
    if (!is_nilpotent(mu)) return "bracket is not nilpotent";
    return "";
  };
  return f;
}

inline std::vector<std::string> flow_names() { return {"laplacian_g2", "chern_ricci", "ricci_nilpotent"}; }

inline FlowSpec flow_by_name(const std::string& name) {
  if (name == "laplacian_g2") return laplacian_g2_flow();
  if (name == "chern_ricci") return chern_ricci_flow();
  if (name == "ricci_nilpotent") return ricci_nilpotent_flow();
  throw ConfigError("unknown flow '" + name + "'");
}

}  // namespace hflow
