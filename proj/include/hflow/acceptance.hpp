#pragma once

// Acceptance suite: ten numbered checks, each producing one pass/fail line.
// Shared by the CLI `verify` command and the acceptance test binary.

#include "hflow/catalog.hpp"
#include "hflow/dynamics.hpp"
#include "hflow/testing.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace hflow::acceptance {

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds; <= 0 means unlimited
  std::function<bool(std::ostringstream&)> body;
};

namespace detail {

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

inline double crf_T_plus(const CatalogEntry& e) {
  const Matrix& J = e.gamma.complex_structure();
  return crf_max_times(chern_ricci_operator(chern_ricci_form(e.mu, J), J, e.gamma.matrix())).second;
}

}  // namespace detail

/// Coefficients of Delta phi on n(x,y) against the reference expression
/// (x+y) e^123 + y(x-y) e^267 + x(x-y) e^357.
inline bool laplacian_formula(std::ostringstream& os) {
  const std::vector<std::pair<double, double>> pts{{1, 1}, {1, 2}, {2, 1}, {3, 5}};
  const KForm phi = nil_g2_form();
  bool ok = true;
  double worst_recomputed = 0.0;
  for (auto [x, y] : pts) {
    const KForm lap = g2_laplacian(n_xy(x, y), phi);
    KForm ref(7, 3);
    ref.add_term({0, 1, 2}, x + y);
    ref.add_term({1, 5, 6}, y * (x - y));
    ref.add_term({2, 4, 6}, x * (x - y));
    KForm alt(7, 3);
    alt.add_term({0, 1, 2}, x * x + y * y);
    alt.add_term({1, 5, 6}, y * (y - x));
    alt.add_term({2, 4, 6}, x * (x - y));
    const double err = (lap - ref).coeffs().lpNorm<Eigen::Infinity>();
    worst_recomputed = std::max(worst_recomputed, (lap - alt).coeffs().lpNorm<Eigen::Infinity>());
    os << "(" << x << "," << y << ") err " << detail::sci(err) << "; ";
    if (err > 1e-10) ok = false;
  }
  os << "against (x^2+y^2)e123 + y(y-x)e267 + x(x-y)e357 max err " << detail::sci(worst_recomputed);
  return ok;
}

inline bool g2_soliton(std::ostringstream& os) {
  const auto e = catalog_entry("n_xy", {1.0, 1.0});
  const FlowSpec F = laplacian_g2_flow();
  const SolitonCertificate cert = soliton_solve(e.mu, e.gamma, F);
  Vector d(7);
  d << 1, 1, 1, 2, 2, 2, 2;
  const double d_err = (cert.D_p() - Matrix(d.asDiagonal())).norm();
  const double c_err = std::abs(cert.c + 5.0 / 3.0);
  // Delta phi = 5 phi + L_{X_{-D}} phi
  const KForm& phi = e.gamma.form();
  const KForm lap = g2_laplacian(e.mu, phi);
  const KForm lie = std::get<KForm>(lie_derivative(e.mu, Matrix(-cert.D), e.gamma));
  const double eq_err = (lap - (5.0 * phi + lie)).norm();
  const double k = (F.s - F.r) * cert.c;
  os << "c = " << cert.c << ", residual " << detail::sci(cert.residual) << ", |D_p - diag(1,1,1,2,2,2,2)| "
     << detail::sci(d_err) << ", soliton equation err " << detail::sci(eq_err) << ", k = " << k << ", "
     << to_string(cert.kind);
  return cert.residual <= 1e-10 && d_err <= 1e-10 && c_err <= 1e-10 && eq_err <= 1e-10 &&
         std::abs(k - 5.0) <= 1e-10 && cert.kind == SolitonKind::expanding;
}

inline bool flow_equivalence(std::ostringstream& os) {
  IntegratorControls c;
  c.dt = 1e-3;
  bool ok = true;
  for (auto [name, flow] : std::vector<std::pair<std::string, std::string>>{
           {"n_xy", "laplacian_g2"}, {"hopf_su2_R", "chern_ricci"}, {"complex_heisenberg", "chern_ricci"}}) {
    const auto e = catalog_entry(name);
    const FlowSpec F = flow_by_name(flow);
    const auto br = integrate_bracket_flow(e.mu, e.gamma, F, 1.0, c);
    const auto ge = integrate_geometric_flow(e.mu, e.gamma, F, 1.0, c);
    const auto rep = check_equivalence(br, ge, e.mu, e.gamma, 1e-6);
    os << name << "/" << flow << " gamma " << detail::sci(rep.gamma_deviation) << " mu "
       << detail::sci(rep.mu_deviation) << "; ";
    ok = ok && rep.pass && br.reason == Termination::t_end && ge.reason == Termination::t_end;
  }
  return ok;
}

inline bool crf_exact(std::ostringstream& os) {
  const FlowSpec F = chern_ricci_flow();
  bool ok = true;
  for (const std::string name : {"hopf_su2_R", "heisenberg3_x_R_rot"}) {
    const auto e = catalog_entry(name);
    const Matrix& J = e.gamma.complex_structure();
    const Matrix p0 = chern_ricci_form(e.mu, J);
    const Matrix P0 = chern_ricci_operator(p0, J, e.gamma.matrix());
    const double Tp = crf_max_times(P0).second;
    IntegratorControls c;
    const auto br = integrate_bracket_flow(e.mu, e.gamma, F, 0.5 * Tp, c);
    const auto ge = integrate_geometric_flow(e.mu, e.gamma, F, 0.5 * Tp, c);
    double mu_err = 0.0, g_err = 0.0;
    for (int i = 1; i <= 10; ++i) {
      const double target = 0.05 * i * Tp;
      size_t best = 0;
      for (size_t s = 0; s < br.samples.size(); ++s)
        if (std::abs(br.samples[s].t - target) < std::abs(br.samples[best].t - target)) best = s;
      const double t = br.samples[best].t;
      mu_err = std::max(mu_err, norm(br.samples[best].mu - crf_exact_bracket(e.mu, P0, t)));
      g_err = std::max(g_err, (std::get<Matrix>(ge.samples[best].gamma) - crf_exact_metric(e.gamma.matrix(), J, p0, t)).norm());
    }
    const auto blow = integrate_bracket_flow(e.mu, e.gamma, F, 1.5 * Tp, c);
    const double t_stop = blow.samples.back().t;
    const double rel = std::abs(t_stop - Tp) / Tp;
    os << name << ": bracket err " << detail::sci(mu_err) << ", metric err " << detail::sci(g_err) << ", T+ "
       << Tp << " detected " << t_stop << " (rel " << detail::sci(rel) << "); ";
    ok = ok && mu_err <= 1e-6 && g_err <= 1e-6 && blow.reason == Termination::blowup && rel <= 0.01;
  }
  return ok;
}

inline bool norm_identities(std::ostringstream& os) {
  IntegratorControls c;
  bool ok = true;
  for (const auto& entry : catalog()) {
    for (const auto& flow : entry.flows) {
      const FlowSpec F = flow_by_name(flow);
      double t_end = 1.0;
      if (flow == "chern_ricci") t_end = std::min(1.0, 0.5 * detail::crf_T_plus(entry));
      const auto br = integrate_bracket_flow(entry.mu, entry.gamma, F, t_end, c);
      const auto nd = norm_diagnostics(br);
      os << entry.name << "/" << flow << " " << detail::sci(nd.p_identity_error) << "," << detail::sci(nd.k_identity_error)
         << "; ";
      ok = ok && nd.p_identity_error <= 1e-4 && nd.k_identity_error <= 1e-4;
    }
  }
  return ok;
}

inline bool moment_map_suite(std::ostringstream& os) {
  testing::Generator gen(20240611);
  double e_delta = 0.0, e_adj = 0.0, e_trace = 0.0, e_der = 0.0;
  size_t n_der = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen.integer(2, 6);
    const LieBracket mu = gen.lie_bracket(n);
    const double s2 = std::max(1.0, norm(mu) * norm(mu));
    const Matrix M = moment_map(mu);
    e_delta = std::max(e_delta, norm(delta(mu, Matrix::Identity(n, n)) - mu) / std::max(1.0, norm(mu)));
    const Matrix E = gen.matrix(n, n);
    e_adj = std::max(e_adj, std::abs(bracket_inner(delta(mu, E), mu) + 4.0 * (M * E).trace()) / (s2 * std::max(1.0, E.norm())));
    e_trace = std::max(e_trace, std::abs(M.trace() + 0.25 * norm(mu) * norm(mu)) / s2);
    for (const auto& D : derivation_space(mu)) {
      e_der = std::max(e_der, std::abs((M * D).trace()) / s2);
      ++n_der;
    }
  }
  os << "delta(I)=mu " << detail::sci(e_delta) << ", adjoint " << detail::sci(e_adj) << ", trace "
     << detail::sci(e_trace) << ", tr(MD) over " << n_der << " derivations " << detail::sci(e_der);
  return e_delta <= 1e-9 && e_adj <= 1e-9 && e_trace <= 1e-9 && e_der <= 1e-9 && n_der > 0;
}

inline bool scaling_laws(std::ostringstream& os) {
  struct Case {
    LieBracket mu;
    GeometricStructure gamma;
    FlowSpec flow;
    std::string label;
  };
  const Matrix I3 = Matrix::Identity(3, 3), I7 = Matrix::Identity(7, 7), I6 = Matrix::Identity(6, 6);
  std::vector<Case> cases{
      {n_xy(1, 1), GeometricStructure::g2(nil_g2_form()), laplacian_g2_flow(), "laplacian_g2 n(1,1)"},
      {n_xy(2, 2), GeometricStructure::g2(nil_g2_form()), laplacian_g2_flow(), "laplacian_g2 n(2,2)"},
      {heisenberg3(), GeometricStructure::metric(I3), ricci_nilpotent_flow(), "ricci heisenberg3"},
      {n_xy(1, 2), GeometricStructure::metric(I7), ricci_nilpotent_flow(), "ricci n(1,2)"},
      {complex_heisenberg(), GeometricStructure::metric(I6), ricci_nilpotent_flow(), "ricci complex_heisenberg"}};
  double worst = 0.0;
  bool exps = true;
  for (const auto& cs : cases) {
    exps = exps && std::abs(cs.flow.scaling_exponent() - 2.0) < 1e-15;
    const Matrix Q = cs.flow.Q(cs.mu, cs.gamma);
    for (double c : {0.5, 2.0, 3.0}) {
      const Matrix Qc = cs.flow.Q(scale(c, cs.mu), cs.gamma);
      const Matrix expect = std::pow(c, cs.flow.scaling_exponent()) * Q;
      worst = std::max(worst, (Qc - expect).norm() / expect.norm());
    }
  }
  os << cases.size() << " cases x c in {1/2,2,3}, max relative err " << detail::sci(worst);
  return exps && worst <= 1e-10;
}

inline bool self_similarity(std::ostringstream& os) {
  const auto e = catalog_entry("n_xy", {1.0, 1.0});
  const FlowSpec F = laplacian_g2_flow();
  const auto cert = soliton_solve(e.mu, e.gamma, F);
  IntegratorControls c;
  const auto br = integrate_bracket_flow(e.mu, e.gamma, F, 3.0, c);
  const auto rep = self_similar_check(br, cert, F);
  os << "ray deviation " << detail::sci(rep.max_ray_deviation) << ", c(t) vs scalar ODE " << detail::sci(rep.scalar_ode_error)
     << ", a = " << rep.a << ": (1 + a c t)^(1/a) err " << detail::sci(rep.inverse_exponent_error)
     << ", (1 + a c t)^a err " << detail::sci(rep.printed_exponent_error) << ", fitted exponent "
     << rep.fitted_exponent << ", matching exponent " << rep.matching_exponent;
  return br.reason == Termination::t_end && rep.max_ray_deviation <= 1e-6 && rep.scalar_ode_error <= 1e-6 &&
         (rep.matching_exponent == "1/a" || rep.matching_exponent == "a");
}

inline bool isotropy_invariance(std::ostringstream& os) {
  const auto e = catalog_entry("heisenberg3_x_R_rot");
  const FlowSpec F = chern_ricci_flow();
  IntegratorControls c;
  const double t_end = 0.75 * detail::crf_T_plus(e);
  const auto br = integrate_bracket_flow(e.mu, e.gamma, F, t_end, c);
  const LieBracket fixed = k_by_g_part(e.mu);
  double drift = 0.0, jac = 0.0, moved = 0.0;
  for (const auto& s : br.samples) {
    drift = std::max(drift, norm(k_by_g_part(s.mu) - fixed));
    jac = std::max(jac, jacobi_residual(s.mu));
    moved = std::max(moved, norm(s.mu - e.mu));
  }
  os << "q = " << e.mu.space().q << ", t in [0," << t_end << "], k x g drift " << detail::sci(drift)
     << ", |mu(t) - mu_0| up to " << detail::sci(moved) << ", Jacobi residual " << detail::sci(jac);
  return br.reason == Termination::t_end && drift <= 1e-6 && moved > 1e-2 && jac <= 1e-6;
}

inline bool integrator_order(std::ostringstream& os) {
  const auto e = catalog_entry("hopf_su2_R");
  const FlowSpec F = chern_ricci_flow();
  auto deviation = [&](double dt) {
    IntegratorControls c;
    c.dt = dt;
    c.adaptive = false;
    const auto br = integrate_bracket_flow(e.mu, e.gamma, F, 1.5, c);
    const auto ge = integrate_geometric_flow(e.mu, e.gamma, F, 1.5, c);
    const auto rep = check_equivalence(br, ge, e.mu, e.gamma);
    return std::max(rep.gamma_deviation, rep.mu_deviation);
  };
  const double d1 = deviation(0.05), d2 = deviation(0.025);
  const double ratio = d1 / d2;
  os << "deviation " << detail::sci(d1) << " at dt 0.05, " << detail::sci(d2) << " at dt 0.025, ratio " << ratio;
  return ratio >= 8.0 && ratio <= 32.0;
}

inline std::vector<Criterion> criteria() {
  return {
      {1, "g2_laplacian_formula", 1.0, laplacian_formula},
      {2, "g2_soliton", 1.0, g2_soliton},
      {3, "flow_equivalence", 30.0, flow_equivalence},
      {4, "crf_exact", 30.0, crf_exact},
      {5, "norm_identities", 0.0, norm_identities},
      {6, "moment_map", 0.0, moment_map_suite},
      {7, "scaling_laws", 0.0, scaling_laws},
      {8, "self_similarity", 0.0, self_similarity},
      {9, "isotropy_invariance", 0.0, isotropy_invariance},
      {10, "integrator_order", 0.0, integrator_order},
  };
}

inline Result run(const Criterion& c) {
  Result r;
  r.id = c.id;
  r.name = c.name;
  std::ostringstream os;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.pass = c.body(os);
  } catch (const std::exception& e) {
    os << "exception: " << e.what();
    r.pass = false;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c.time_limit > 0.0 && r.seconds >= c.time_limit) {
    os << " [over the " << c.time_limit << " s budget]";
    r.pass = false;
  }
  r.detail = os.str();
  return r;
}

/// Criteria selected by number, or by name substring (all when empty).
inline std::vector<Criterion> select(const std::string& filter) {
  const bool numeric = !filter.empty() && filter.find_first_not_of("0123456789") == std::string::npos;
  std::vector<Criterion> out;
  for (auto& c : criteria()) {
    const bool hit = numeric ? std::to_string(c.id) == filter : c.name.find(filter) != std::string::npos;
    if (filter.empty() || hit) out.push_back(c);
  }
  return out;
}

inline std::string format(const Result& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] %2d %-22s (%.2f s) ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
  return head + r.detail;
}

}  // namespace hflow::acceptance
