#pragma once

// Bracket flow and geometric flow integration, the equivalence check between
// them, norm and blow-up diagnostics, and algebraic soliton certificates.

#include "hflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace hflow {

struct IntegratorControls {
  double dt = 1e-3;
  double rtol = 1e-8;
  double atol = 1e-10;
  double dt_min = 1e-12;
  double blowup_factor = 1e6;  // stop once |mu| > blowup_factor * |mu_0|
  int stride = 1;              // keep every stride-th grid point
  bool adaptive = true;        // step-doubling substeps; false gives plain RK4 on the grid

  void validate() const {
    if (!(dt > 0.0) || !(rtol > 0.0) || !(atol > 0.0) || !(dt_min > 0.0) || !(blowup_factor > 1.0) || stride < 1)
      throw ConfigError("integrator controls must be positive (blowup_factor > 1, stride >= 1)");
  }
};

enum class Termination { t_end, blowup, underflow, degenerate };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::t_end: return "t_end";
    case Termination::blowup: return "blowup";
    case Termination::underflow: return "step_underflow";
    case Termination::degenerate: return "degenerate";
  }
  return "?";
}

struct BracketSample {
  double t = 0.0;
  LieBracket mu;
  Matrix h;  // on p
  Matrix Q;
  double norm_p = 0.0;
  double norm_k = 0.0;
  double normQ = 0.0;
};

struct Trajectory {
  std::string flow;
  double dt = 0.0;  // grid spacing times stride
  std::vector<BracketSample> samples;
  Termination reason = Termination::t_end;
  std::string message;
};

struct GeometricSample {
  double t = 0.0;
  Tensor gamma;
  Matrix h;
  Matrix Q;
};

struct GeometricTrajectory {
  std::string flow;
  double dt = 0.0;
  std::vector<GeometricSample> samples;
  Termination reason = Termination::t_end;
  std::string message;
};

namespace detail {

template <class Rhs>
Vector rk4_step(const Rhs& f, const Vector& y, double h) {
  const Vector k1 = f(y);
  const Vector k2 = f(y + 0.5 * h * k1);
  const Vector k3 = f(y + 0.5 * h * k2);
  const Vector k4 = f(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Marches y' = f(y) over the grid t_j = j dt, j = 0..floor(t_end/dt).
/// on_grid(j, t, y) is called at every grid point; check(y) returns false to
/// stop with a blow-up. Returns the termination reason; on early stop,
/// last_t / last_y hold the final accepted state.
template <class Rhs, class OnGrid, class Check>
Termination march(Vector y, double t_end, const IntegratorControls& c, const Rhs& f, const OnGrid& on_grid,
                  const Check& check, double& last_t, Vector& last_y, std::string& message) {
  const long steps = static_cast<long>(std::floor(t_end / c.dt + 1e-9));
  double H = c.dt;
  last_t = 0.0;
  last_y = y;
  try {
    on_grid(0L, 0.0, y);
    for (long j = 0; j < steps; ++j) {
      const double t0 = static_cast<double>(j) * c.dt;
      if (!c.adaptive) {
        y = rk4_step(f, y, c.dt);
        if (!check(y)) {
          last_t = t0 + c.dt;
          last_y = y;
          return Termination::blowup;
        }
      } else {
        double done = 0.0;
        while (c.dt - done > 1e-12 * c.dt) {
          const double h = std::min(H, c.dt - done);
          const Vector full = rk4_step(f, y, h);
          const Vector half = rk4_step(f, rk4_step(f, y, 0.5 * h), 0.5 * h);
          double ratio = 0.0;
          for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double scale = c.atol + c.rtol * std::abs(half(i));
            ratio = std::max(ratio, std::abs(half(i) - full(i)) / (15.0 * scale));
          }
          if (!std::isfinite(ratio)) ratio = std::numeric_limits<double>::infinity();
          if (ratio <= 1.0) {
            y = half;
            done += h;
            if (!check(y)) {
              last_t = t0 + done;
              last_y = y;
              return Termination::blowup;
            }
            if (ratio < 1.0 / 64.0) H = std::min(2.0 * H, c.dt);
          } else {
            H = 0.5 * h;
            if (H < c.dt_min) {
              last_t = t0 + done;
              last_y = y;
              message = "step size fell below dt_min";
              return Termination::underflow;
            }
          }
        }
      }
      last_t = static_cast<double>(j + 1) * c.dt;
      last_y = y;
      on_grid(j + 1, last_t, y);
    }
  } catch (const PreconditionError& e) {
    message = e.what();
    return Termination::degenerate;
  }
  return Termination::t_end;
}

}  // namespace detail

/// Bracket flow mu' = delta_mu([0 0; 0 Q_mu]) with h' = -Q_mu h, h(0) = I.
/// Q_mu is the q_gamma operator of (mu, gamma_0) for the fixed structure.
inline Trajectory integrate_bracket_flow(const LieBracket& mu0, const GeometricStructure& gamma0,
                                         const FlowSpec& flow, double t_end,
                                         const IntegratorControls& controls = {}) {
  controls.validate();
  if (!(t_end >= 0.0)) throw ConfigError("t_end must be >= 0");
  flow.require(mu0, gamma0);
  const auto adm = check_admissible(mu0, gamma0);
  if (!adm.h1_ok || !adm.h3_ok || !adm.h4_ok) throw PreconditionError("bracket flow: (mu, gamma) is not admissible");

  const SplitSpace sp = mu0.space();
  const int q = sp.q, n = sp.n;
  const Eigen::Index nm = static_cast<Eigen::Index>(mu0.data().size());
  const QSolver solver(gamma0);
  auto Q_of = [&](const LieBracket& mu) { return solver.solve(flow.velocity(mu, gamma0)); };

  auto rhs = [&](const Vector& y) {
    const LieBracket mu = LieBracket::from_vector(sp, y.head(nm));
    const Matrix Q = Q_of(mu);
    const Matrix h = linalg::unflatten(y.tail(n * n), n, n);
    Vector dy(y.size());
    dy.head(nm) = delta(mu, block_p(Q, q)).as_vector();
    dy.tail(n * n) = linalg::flatten(-Q * h);
    return dy;
  };
  const double limit = controls.blowup_factor * norm(mu0);
  auto check = [&](const Vector& y) {
    // the dense coefficient vector holds both orderings, so its norm is |mu|
    return y.allFinite() && (limit == 0.0 || y.head(nm).norm() <= limit);
  };

  Trajectory traj;
  traj.flow = flow.name;
  traj.dt = controls.dt * controls.stride;
  auto record = [&](double t, const Vector& y) {
    BracketSample s;
    s.t = t;
    s.mu = LieBracket::from_vector(sp, y.head(nm));
    s.h = linalg::unflatten(y.tail(n * n), n, n);
    s.Q = Q_of(s.mu);
    s.norm_p = norm_p(s.mu);
    s.norm_k = norm_k(s.mu);
    s.normQ = s.Q.norm();
    traj.samples.push_back(std::move(s));
  };
  auto on_grid = [&](long j, double t, const Vector& y) {
    if (j % controls.stride == 0) record(t, y);
  };

  Vector y0(nm + n * n);
  y0.head(nm) = mu0.as_vector();
  y0.tail(n * n) = linalg::flatten(Matrix::Identity(n, n));
  double last_t = 0.0;
  Vector last_y;
  traj.reason = detail::march(y0, t_end, controls, rhs, on_grid, check, last_t, last_y, traj.message);
  if (traj.reason != Termination::t_end && (traj.samples.empty() || last_t > traj.samples.back().t)) {
    try {
      record(last_t, last_y);
    } catch (const PreconditionError&) {
    }
  }
  if (traj.reason == Termination::blowup && traj.message.empty())
    traj.message = "|mu| exceeded " + std::to_string(controls.blowup_factor) + " |mu_0| at t = " + std::to_string(last_t);
  return traj;
}

/// Geometric flow gamma' = q(gamma) on the fixed bracket mu0, with the frame
/// h' = -h Q(t), h(0) = I.
inline GeometricTrajectory integrate_geometric_flow(const LieBracket& mu0, const GeometricStructure& gamma0,
                                                    const FlowSpec& flow, double t_end,
                                                    const IntegratorControls& controls = {}) {
  controls.validate();
  if (!(t_end >= 0.0)) throw ConfigError("t_end must be >= 0");
  flow.require(mu0, gamma0);
  const int n = gamma0.dim();
  const Tensor like = gamma0.tensor();
  const Eigen::Index nt = flatten(like).size();

  auto eval = [&](const Vector& y, Tensor& qout) {
    const GeometricStructure g = gamma0.with_tensor(unflatten_like(like, y.head(nt)));
    qout = flow.velocity(mu0, g);
    return QSolver(g).solve(qout);
  };
  auto rhs = [&](const Vector& y) {
    Tensor qv;
    const Matrix Q = eval(y, qv);
    const Matrix h = linalg::unflatten(y.tail(n * n), n, n);
    Vector dy(y.size());
    dy.head(nt) = flatten(qv);
    dy.tail(n * n) = linalg::flatten(-h * Q);
    return dy;
  };
  const double limit = controls.blowup_factor * std::max(1.0, tensor_norm(like));
  auto check = [&](const Vector& y) { return y.allFinite() && y.head(nt).norm() <= limit; };

  GeometricTrajectory traj;
  traj.flow = flow.name;
  traj.dt = controls.dt * controls.stride;
  auto record = [&](double t, const Vector& y) {
    GeometricSample s;
    s.t = t;
    s.gamma = unflatten_like(like, y.head(nt));
    s.h = linalg::unflatten(y.tail(n * n), n, n);
    Tensor qv;
    s.Q = eval(y, qv);
    traj.samples.push_back(std::move(s));
  };
  auto on_grid = [&](long j, double t, const Vector& y) {
    if (j % controls.stride == 0) record(t, y);
  };
  Vector y0(nt + n * n);
  y0.head(nt) = flatten(like);
  y0.tail(n * n) = linalg::flatten(Matrix::Identity(n, n));
  double last_t = 0.0;
  Vector last_y;
  traj.reason = detail::march(y0, t_end, controls, rhs, on_grid, check, last_t, last_y, traj.message);
  return traj;
}

struct EquivalenceReport {
  double gamma_deviation = 0.0;  // max |gamma(t) - h(t)^* gamma_0|, h from the bracket flow
  double mu_deviation = 0.0;     // max |mu(t) - h~(t) . mu_0|, h from the geometric flow
  size_t samples = 0;
  bool pass = false;
};

/// Cross-check of the two flows sample by sample on a shared grid.
inline EquivalenceReport check_equivalence(const Trajectory& bracket, const GeometricTrajectory& geometric,
                                           const LieBracket& mu0, const GeometricStructure& gamma0,
                                           double tol = 1e-6) {
  const size_t m = std::min(bracket.samples.size(), geometric.samples.size());
  if (bracket.samples.size() != geometric.samples.size() && bracket.reason == Termination::t_end &&
      geometric.reason == Termination::t_end)
    throw ConfigError("check_equivalence: trajectories are on different grids");
  EquivalenceReport rep;
  const int q = mu0.space().q;
  for (size_t i = 0; i < m; ++i) {
    const auto& b = bracket.samples[i];
    const auto& g = geometric.samples[i];
    if (std::abs(b.t - g.t) > 1e-12 * std::max(1.0, b.t)) throw ConfigError("check_equivalence: grid mismatch");
    const Tensor pulled = act_tensor(Matrix(b.h.inverse()), gamma0.tensor(), gamma0.kind());
    rep.gamma_deviation = std::max(rep.gamma_deviation, tensor_norm(tensor_difference(g.gamma, pulled)));
    const LieBracket moved = act(block_identity_p(g.h, q), mu0);
    rep.mu_deviation = std::max(rep.mu_deviation, norm(b.mu - moved));
  }
  rep.samples = m;
  rep.pass = m > 0 && rep.gamma_deviation <= tol && rep.mu_deviation <= tol;
  return rep;
}

struct NormDiagnostics {
  double p_identity_error = 0.0;  // relative error of d|mu_p|^2/dt = -8 tr Q M
  double k_identity_error = 0.0;  // relative error of d|mu_k|^2/dt = -4 tr Q sum J(Z_i)^2
  size_t points = 0;
};

/// Five-point centered differences of |mu_p|^2 and |mu_k|^2 against their
/// evolution identities. Errors are relative to the largest right-hand side seen.
inline NormDiagnostics norm_diagnostics(const Trajectory& traj) {
  const auto& S = traj.samples;
  if (S.size() < 5) throw ConfigError("norm_diagnostics: needs at least 5 samples");
  NormDiagnostics out;
  std::vector<double> fd_p, rhs_p, fd_k, rhs_k;
  auto sq_p = [&](size_t i) { return S[i].norm_p * S[i].norm_p; };
  auto sq_k = [&](size_t i) { return S[i].norm_k * S[i].norm_k; };
  for (size_t i = 2; i + 2 < S.size(); ++i) {
    const double h = S[i + 1].t - S[i].t;
    bool uniform = true;
    for (size_t j = i - 2; j < i + 2; ++j)
      if (std::abs((S[j + 1].t - S[j].t) - h) > 1e-9 * h) uniform = false;
    if (!uniform) continue;  // skip a truncated final step
    auto d = [&](auto&& f) { return (-f(i + 2) + 8.0 * f(i + 1) - 8.0 * f(i - 1) + f(i - 2)) / (12.0 * h); };
    const auto& s = S[i];
    fd_p.push_back(d(sq_p));
    rhs_p.push_back(-8.0 * (s.Q * moment_map(s.mu)).trace());
    fd_k.push_back(d(sq_k));
    const int q = s.mu.space().q, n = s.mu.space().n;
    Matrix sumJ2 = Matrix::Zero(n, n);
    for (int l = 0; l < q; ++l) {
      const Matrix J = j_map(s.mu, l);
      sumJ2 += J * J;
    }
    rhs_k.push_back(-4.0 * (s.Q * sumJ2).trace());
  }
  auto rel = [](const std::vector<double>& fd, const std::vector<double>& rhs) {
    double scale = 0.0, err = 0.0;
    for (size_t i = 0; i < fd.size(); ++i) {
      scale = std::max(scale, std::abs(rhs[i]));
      err = std::max(err, std::abs(fd[i] - rhs[i]));
    }
    if (scale == 0.0) return err;
    return err / scale;
  };
  out.p_identity_error = rel(fd_p, rhs_p);
  out.k_identity_error = rel(fd_k, rhs_k);
  out.points = fd_p.size();
  return out;
}

struct BlowupReport {
  bool finite_time = false;
  std::string summary;
  double T_estimate = std::numeric_limits<double>::infinity();
  double fitted_rate = 0.0;   // beta in |mu| ~ C (T - t)^{-beta}
  double lower_rate = 0.0;    // 1 / ((r - s)(1 - alpha))
  double best_constant = 0.0; // min over the tail of |mu| (T - t)^{lower_rate}
  double q_integral = 0.0;    // trapezoid integral of |Q| over the samples
  bool q_integral_monotone = false;
  double q_times_gap = 0.0;   // min over the tail of |Q| (T - t)
};

/// Near-singularity diagnostics. u = 1 / (d log|mu| / dt) is fitted by a
/// line on the last twentieth of the trajectory: u = (T - t) / beta.
inline BlowupReport blowup_bounds(const Trajectory& traj, const FlowSpec& flow) {
  BlowupReport rep;
  rep.lower_rate = 1.0 / flow.scaling_exponent();
  const auto& S = traj.samples;
  for (size_t i = 1; i < S.size(); ++i) rep.q_integral += 0.5 * (S[i].t - S[i - 1].t) * (S[i].normQ + S[i - 1].normQ);
  rep.q_integral_monotone = true;
  for (size_t i = 1; i < S.size(); ++i)
    if (S[i].normQ < 0.0 || S[i].t <= S[i - 1].t) rep.q_integral_monotone = false;
  if (traj.reason != Termination::blowup) {
    rep.summary = "no finite-time singularity observed";
    return rep;
  }
  // grid samples only; the terminal sample sits at an irregular time
  std::vector<double> ts, us;
  const size_t m = S.size() - 1;
  const size_t start = std::max<size_t>(1, m - std::max<size_t>(m / 20, 6));
  for (size_t i = start; i + 1 < m; ++i) {
    const double d = (std::log(norm(S[i + 1].mu)) - std::log(norm(S[i - 1].mu))) / (S[i + 1].t - S[i - 1].t);
    if (d <= 0.0) continue;
    ts.push_back(S[i].t);
    us.push_back(1.0 / d);
  }
  if (ts.size() < 3) {
    rep.summary = "blow-up detected but too few samples to fit";
    rep.T_estimate = S.back().t;
    rep.finite_time = true;
    return rep;
  }
  Matrix A(static_cast<Eigen::Index>(ts.size()), 2);
  Vector b(static_cast<Eigen::Index>(ts.size()));
  for (size_t i = 0; i < ts.size(); ++i) {
    A(static_cast<Eigen::Index>(i), 0) = 1.0;
    A(static_cast<Eigen::Index>(i), 1) = ts[i];
    b(static_cast<Eigen::Index>(i)) = us[i];
  }
  const Vector coef = linalg::lstsq(A, b);
  rep.fitted_rate = -1.0 / coef(1);
  rep.T_estimate = -coef(0) / coef(1);
  rep.finite_time = true;
  rep.best_constant = std::numeric_limits<double>::infinity();
  rep.q_times_gap = std::numeric_limits<double>::infinity();
  for (size_t i = start; i < m; ++i) {
    const double gap = rep.T_estimate - S[i].t;
    if (gap <= 0.0) continue;
    rep.best_constant = std::min(rep.best_constant, norm(S[i].mu) * std::pow(gap, rep.lower_rate));
    rep.q_times_gap = std::min(rep.q_times_gap, S[i].normQ * gap);
  }
  rep.summary = "finite-time singularity";
  return rep;
}

// ---------------------------------------------------------------------------
// Algebraic solitons

enum class SolitonKind { expanding, steady, shrinking };

inline const char* to_string(SolitonKind k) {
  switch (k) {
    case SolitonKind::expanding: return "expanding";
    case SolitonKind::steady: return "steady";
    case SolitonKind::shrinking: return "shrinking";
  }
  return "?";
}

struct SolitonCertificate {
  double c = 0.0;
  Matrix D;  // block operator [0 0; 0 D_p] on g
  Matrix Q;
  double residual = 0.0;
  double derivation_residual = 0.0;
  bool is_soliton = false;
  SolitonKind kind = SolitonKind::steady;

  Matrix D_p() const { return D.bottomRightCorner(Q.rows(), Q.cols()); }
};

/// Least-squares fit Q(gamma) = c I + D_p over D in Der(mu) of block form,
/// with the minimal-norm coefficients when the fit is not unique. Only Q is
/// needed, so the flow's applicability is not checked here.
inline SolitonCertificate soliton_solve(const LieBracket& mu, const GeometricStructure& gamma, const FlowSpec& flow,
                                        double tol = 1e-9) {
  const int q = mu.space().q, n = mu.space().n;
  SolitonCertificate cert;
  cert.Q = flow.Q(mu, gamma);
  const auto ders = derivation_space(mu, BlockConstraint::p_only);
  Matrix A(n * n, 1 + static_cast<Eigen::Index>(ders.size()));
  A.col(0) = linalg::flatten(Matrix::Identity(n, n));
  for (size_t i = 0; i < ders.size(); ++i)
    A.col(1 + static_cast<Eigen::Index>(i)) = linalg::flatten(Matrix(ders[i].bottomRightCorner(n, n)));
  const Vector x = linalg::lstsq(A, linalg::flatten(cert.Q));
  cert.c = x(0);
  Matrix Dp = Matrix::Zero(n, n);
  for (size_t i = 0; i < ders.size(); ++i) Dp += x(1 + static_cast<Eigen::Index>(i)) * ders[i].bottomRightCorner(n, n);
  cert.D = block_p(Dp, q);
  cert.residual = (cert.Q - cert.c * Matrix::Identity(n, n) - Dp).norm();
  cert.derivation_residual = norm(delta(mu, cert.D));
  cert.is_soliton = cert.residual <= tol * std::max(1.0, cert.Q.norm());
  const double sign = (flow.s - flow.r) * cert.c;
  const double eps = 1e-12 * std::max(1.0, cert.Q.norm());
  cert.kind = sign > eps ? SolitonKind::expanding : (sign < -eps ? SolitonKind::shrinking : SolitonKind::steady);
  return cert;
}

/// L_{X_D} gamma = -theta(D_p) gamma for a derivation D of block form.
inline Tensor lie_derivative(const LieBracket& mu, const Matrix& D, const GeometricStructure& gamma,
                             double tol = 1e-9) {
  if (!is_derivation(mu, D, tol)) throw PreconditionError("lie_derivative: D is not a derivation");
  const int n = gamma.dim();
  const Tensor t = theta(Matrix(D.bottomRightCorner(n, n)), gamma);
  return unflatten_like(t, -flatten(t));
}

struct RayPoint {
  double c = 1.0;
  double distance = 0.0;
};

/// Nearest point to mu on the curve {c . mu0 : c > 0}.
inline RayPoint nearest_on_ray(const LieBracket& mu, const LieBracket& mu0) {
  mu.check_same(mu0);
  const int q = mu.space().q, N = mu.dim();
  double kk = 0.0, kt = 0.0, pp = 0.0, pt = 0.0, fixed = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        const double a = mu(i, j, k), b = mu0(i, j, k);
        if (i < q || j < q) {
          fixed += (a - b) * (a - b);
        } else if (k < q) {
          kk += b * b;
          kt += a * b;
        } else {
          pp += b * b;
          pt += a * b;
        }
      }
  auto dist2 = [&](double c) {
    double s = fixed;
    for (int i = q; i < N; ++i)
      for (int j = q; j < N; ++j)
        for (int k = 0; k < N; ++k) {
          const double d = mu(i, j, k) - (k < q ? c * c : c) * mu0(i, j, k);
          s += d * d;
        }
    return s;
  };
  // d/dc dist2 = 0: 4 kk c^3 + (2 pp - 4 kt) c - 2 pt = 0
  std::vector<double> cands{1.0};
  if (kk > 0.0) {
    Matrix comp = Matrix::Zero(3, 3);
    const double a2 = (2.0 * pp - 4.0 * kt) / (4.0 * kk), a3 = -2.0 * pt / (4.0 * kk);
    comp(0, 1) = -a2;
    comp(0, 2) = -a3;
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    Eigen::EigenSolver<Matrix> es(comp);
    for (int r = 0; r < 3; ++r)
      if (std::abs(es.eigenvalues()(r).imag()) < 1e-9 && es.eigenvalues()(r).real() > 0.0)
        cands.push_back(es.eigenvalues()(r).real());
  } else if (pp > 0.0 && pt > 0.0) {
    cands.push_back(pt / pp);
  }
  RayPoint best{1.0, std::numeric_limits<double>::infinity()};
  for (double c : cands) {
    const double d = dist2(c);
    if (d < best.distance) best = {c, d};
  }
  best.distance = std::sqrt(std::max(0.0, best.distance));
  return best;
}

struct SelfSimilarReport {
  double max_ray_deviation = 0.0;
  double scalar_ode_error = 0.0;     // observed c(t) vs independently integrated c' = c_sol c^{1+e}
  double inverse_exponent_error = 0.0;  // observed vs (1 + a c_sol t)^{1/a}
  double printed_exponent_error = 0.0;  // observed vs (1 + a c_sol t)^{a}
  double fitted_exponent = 0.0;      // slope of log c(t) against log(1 + a c_sol t)
  double a = 0.0;                    // (s - r)(1 - alpha)
  std::string matching_exponent;     // "1/a", "a", or "neither"
};

/// Distance of the trajectory to the ray through mu0, and the observed
/// scale factor c(t) against candidate closed forms.
inline SelfSimilarReport self_similar_check(const Trajectory& traj, const SolitonCertificate& cert,
                                            const FlowSpec& flow, double tol = 1e-6) {
  SelfSimilarReport rep;
  if (traj.samples.empty()) return rep;
  const LieBracket& mu0 = traj.samples.front().mu;
  const double e = flow.scaling_exponent();
  rep.a = -e;
  const double c0 = cert.c;

  // c' = c0 c^{1+e}, c(0) = 1, by RK4 on a grid 20x finer than the samples
  const int sub = 20;
  double c_ode = 1.0;
  auto f = [&](double c) { return c0 * std::pow(c, 1.0 + e); };
  std::vector<double> obs, tt;
  for (size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    if (i > 0) {
      const double H = (s.t - traj.samples[i - 1].t) / sub;
      for (int k = 0; k < sub; ++k) {
        const double k1 = f(c_ode), k2 = f(c_ode + 0.5 * H * k1), k3 = f(c_ode + 0.5 * H * k2), k4 = f(c_ode + H * k3);
        c_ode += H / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      }
    }
    const RayPoint rp = nearest_on_ray(s.mu, mu0);
    rep.max_ray_deviation = std::max(rep.max_ray_deviation, rp.distance);
    const double base = 1.0 + rep.a * c0 * s.t;
    rep.scalar_ode_error = std::max(rep.scalar_ode_error, std::abs(rp.c - c_ode));
    if (base > 0.0) {
      rep.inverse_exponent_error = std::max(rep.inverse_exponent_error, std::abs(rp.c - std::pow(base, 1.0 / rep.a)));
      rep.printed_exponent_error = std::max(rep.printed_exponent_error, std::abs(rp.c - std::pow(base, rep.a)));
      if (s.t > 0.0 && std::abs(std::log(base)) > 1e-12) {
        obs.push_back(std::log(rp.c));
        tt.push_back(std::log(base));
      }
    }
  }
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < obs.size(); ++i) {
    num += obs[i] * tt[i];
    den += tt[i] * tt[i];
  }
  rep.fitted_exponent = den > 0.0 ? num / den : 0.0;
  if (c0 == 0.0) {
    rep.matching_exponent = "both (steady)";
  } else if (rep.inverse_exponent_error <= tol) {
    rep.matching_exponent = "1/a";
  } else if (rep.printed_exponent_error <= tol) {
    rep.matching_exponent = "a";
  } else {
    rep.matching_exponent = "neither";
  }
  return rep;
}

struct SolitonProfile {
  double b = 1.0;
  double s = 0.0;
};

/// b(t), s(t) with gamma(t) = b(t) (e^{s(t) D_p} . gamma) solving gamma' = q(gamma)
/// when Q(gamma) = c I + D_p. With k = (s - r) c these solve b' = k b^alpha,
/// s' = b^{alpha - 1}: b = (1 + (1-alpha) k t)^{1/(1-alpha)},
/// s = log(1 + (1-alpha) k t) / ((1-alpha) k).
inline SolitonProfile soliton_profile(const SolitonCertificate& cert, const FlowSpec& flow, double t) {
  const double k = (flow.s - flow.r) * cert.c;
  const double m = 1.0 - flow.alpha;
  SolitonProfile p;
  if (std::abs(k) < 1e-14) {
    p.b = 1.0;
    p.s = t;
    return p;
  }
  const double base = 1.0 + m * k * t;
  if (base <= 0.0) throw PreconditionError("soliton_profile: t outside the existence interval");
  p.b = std::pow(base, 1.0 / m);
  p.s = std::log(base) / (m * k);
  return p;
}

}  // namespace hflow
