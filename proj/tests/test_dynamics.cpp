#include "support.hpp"

using namespace hflow;
using hflow::test::diag;
using hflow::test::near;

namespace {

// Round 2-sphere SU(2)/U(1): mu(e1, e2) = Z, Z rotates p.
LieBracket sphere() {
  LieBracket mu(SplitSpace{1, 2});
  mu.set(1, 2, 0, 1.0);
  mu.set(0, 1, 2, 1.0);
  mu.set(0, 2, 1, -1.0);
  return mu;
}

// Metric flow with constant velocity -2g, i.e. Q = I.
FlowSpec homothety() {
  FlowSpec f;
  f.name = "homothety";
  f.r = 2;
  f.velocity = [](const LieBracket&, const GeometricStructure& g) -> Tensor { return Matrix(-2.0 * g.matrix()); };
  f.applicable = [](const LieBracket&, const GeometricStructure&) { return std::string(); };
  return f;
}

}  // namespace

TEST(BracketFlow, InitialDataAndGrid) {
  const auto e = catalog_entry("heisenberg3");
  IntegratorControls c;
  c.dt = 0.01;
  const auto traj = integrate_bracket_flow(e.mu, e.gamma, ricci_nilpotent_flow(), 0.5, c);
  ASSERT_EQ(traj.samples.size(), 51u);
  EXPECT_EQ(traj.reason, Termination::t_end);
  EXPECT_EQ(norm(traj.samples.front().mu - e.mu), 0.0);
  EXPECT_TRUE(near(traj.samples.front().h, Matrix::Identity(3, 3), 0.0));
  for (size_t i = 1; i < traj.samples.size(); ++i) EXPECT_GT(traj.samples[i].t, traj.samples[i - 1].t);
  EXPECT_NEAR(traj.samples.back().t, 0.5, 1e-12);
}

TEST(BracketFlow, StrideKeepsEveryKthPoint) {
  const auto e = catalog_entry("heisenberg3");
  IntegratorControls c;
  c.dt = 0.01;
  c.stride = 7;
  const auto traj = integrate_bracket_flow(e.mu, e.gamma, ricci_nilpotent_flow(), 1.0, c);
  EXPECT_EQ(traj.samples.size(), static_cast<size_t>(std::floor(1.0 / 0.01 / 7) + 1));
}

TEST(BracketFlow, ZeroBracketIsStationary) {
  const auto e = catalog_entry("abelian_n", {5});
  const auto traj = integrate_bracket_flow(e.mu, e.gamma, ricci_nilpotent_flow(), 1.0);
  for (const auto& s : traj.samples) {
    EXPECT_EQ(norm(s.mu), 0.0);
    EXPECT_TRUE(near(s.h, Matrix::Identity(5, 5), 0.0));
  }
}

TEST(BracketFlow, RejectsInadmissibleInput) {
  LieBracket mu(SplitSpace{0, 3});
  mu.set(0, 1, 2, 1.0);
  mu.set(0, 2, 0, 1.0);  // Jacobi fails
  EXPECT_THROW(integrate_bracket_flow(mu, GeometricStructure::metric(Matrix::Identity(3, 3)), homothety(), 1.0),
               PreconditionError);
  IntegratorControls bad;
  bad.dt = -1.0;
  EXPECT_THROW(integrate_bracket_flow(heisenberg3(), GeometricStructure::metric(Matrix::Identity(3, 3)),
                                      ricci_nilpotent_flow(), 1.0, bad),
               ConfigError);
}

TEST(BracketFlow, LaplacianSolitonStaysOnItsRay) {
  const auto e = catalog_entry("n_xy");
  const auto traj = integrate_bracket_flow(e.mu, e.gamma, laplacian_g2_flow(), 3.0);
  for (const auto& s : traj.samples) {
    const RayPoint r = nearest_on_ray(s.mu, e.mu);
    EXPECT_LE(r.distance, 1e-6);
    EXPECT_NEAR(r.c, std::pow(10.0 * s.t / 3.0 + 1.0, -0.5), 1e-8);
  }
}

TEST(BracketFlow, ChernRicciMatchesClosedFormAtHalfTime) {
  for (const std::string name : {"hopf_su2_R", "heisenberg3_x_R_rot", "complex_heisenberg"}) {
    const auto e = catalog_entry(name);
    const Matrix J = e.gamma.complex_structure();
    const Matrix P0 = chern_ricci_operator(chern_ricci_form(e.mu, J), J, e.gamma.matrix());
    const double T = std::min(1.0, crf_max_times(P0).second / 2);
    const auto traj = integrate_bracket_flow(e.mu, e.gamma, chern_ricci_flow(), T);
    ASSERT_EQ(traj.reason, Termination::t_end);
    const auto& last = traj.samples.back();
    EXPECT_LE(norm(last.mu - crf_exact_bracket(e.mu, P0, last.t)), 1e-6) << name;
  }
}

TEST(BracketFlow, IsotropyPartIsFrozen) {
  const auto e = catalog_entry("heisenberg3_x_R_rot");
  const auto traj = integrate_bracket_flow(e.mu, e.gamma, chern_ricci_flow(), 0.1);
  for (const auto& s : traj.samples) EXPECT_LE(norm(k_by_g_part(s.mu) - k_by_g_part(e.mu)), 1e-12);
}

TEST(BracketFlow, SphereUnderHomothety) {
  // Q = I: mu_k doubles its rate, mu_p(k, p) is fixed, so |mu_k|^2 = 2 e^{4t}
  const LieBracket mu = sphere();
  const auto gamma = GeometricStructure::metric(Matrix::Identity(2, 2));
  ASSERT_TRUE(check_admissible(mu, gamma).h3_ok);
  const auto traj = integrate_bracket_flow(mu, gamma, homothety(), 0.5);
  for (const auto& s : traj.samples) {
    EXPECT_NEAR(s.norm_k * s.norm_k, 2.0 * std::exp(4.0 * s.t), 1e-8 * std::exp(4.0 * s.t));
    EXPECT_LE(norm(k_by_g_part(s.mu) - k_by_g_part(mu)), 1e-14);
  }
  const auto nd = norm_diagnostics(traj);
  EXPECT_LE(nd.k_identity_error, 1e-8);
}

TEST(BracketFlow, BlowupThresholdStopsTheRun) {
  const auto e = catalog_entry("hopf_su2_R");
  IntegratorControls c;
  c.blowup_factor = 10.0;
  const auto traj = integrate_bracket_flow(e.mu, e.gamma, chern_ricci_flow(), 5.0, c);
  EXPECT_EQ(traj.reason, Termination::blowup);
  EXPECT_LT(traj.samples.back().t, 2.0);
  const std::string csv = io::trajectory_csv(traj);
  EXPECT_EQ(csv.substr(csv.size() - 2), "1\n");
}

TEST(BracketFlow, StepUnderflow) {
  const auto e = catalog_entry("hopf_su2_R");
  IntegratorControls c;
  c.rtol = 1e-30;
  c.atol = 1e-30;
  c.dt_min = 1e-4;
  const auto traj = integrate_bracket_flow(e.mu, e.gamma, chern_ricci_flow(), 1.0, c);
  EXPECT_EQ(traj.reason, Termination::underflow);
}

TEST(GeometricFlow, ChernRicciMetricIsLinearInTime) {
  const auto e = catalog_entry("hopf_su2_R");
  const Matrix J = e.gamma.complex_structure();
  const Matrix p0 = chern_ricci_form(e.mu, J);
  const auto traj = integrate_geometric_flow(e.mu, e.gamma, chern_ricci_flow(), 1.0);
  for (const auto& s : traj.samples)
    EXPECT_TRUE(near(std::get<Matrix>(s.gamma), crf_exact_metric(e.gamma.matrix(), J, p0, s.t), 1e-10));
}

TEST(GeometricFlow, LaplacianSolitonClosedForm) {
  const auto e = catalog_entry("n_xy");
  const auto F = laplacian_g2_flow();
  const auto cert = soliton_solve(e.mu, e.gamma, F);
  IntegratorControls c;
  c.stride = 100;
  const auto traj = integrate_geometric_flow(e.mu, e.gamma, F, 1.0, c);
  for (const auto& s : traj.samples) {
    // b = (10t/3 + 1)^{3/2}, s = (3/10) log(10t/3 + 1)
    const double b = std::pow(10.0 * s.t / 3.0 + 1.0, 1.5);
    const double sv = 0.3 * std::log(10.0 * s.t / 3.0 + 1.0);
    const auto prof = soliton_profile(cert, F, s.t);
    EXPECT_NEAR(prof.b, b, 1e-12 * b);
    EXPECT_NEAR(prof.s, sv, 1e-12);
    const KForm expect = b * std::get<KForm>(act_tensor(linalg::expm(sv * cert.D_p()), e.gamma.form(), StructureKind::g2));
    EXPECT_LE((std::get<KForm>(s.gamma) - expect).norm(), 1e-5 * expect.norm());
  }
}

TEST(Equivalence, ZeroLengthRun) {
  const auto e = catalog_entry("n_xy");
  const auto br = integrate_bracket_flow(e.mu, e.gamma, laplacian_g2_flow(), 0.0);
  const auto ge = integrate_geometric_flow(e.mu, e.gamma, laplacian_g2_flow(), 0.0);
  ASSERT_EQ(br.samples.size(), 1u);
  const auto rep = check_equivalence(br, ge, e.mu, e.gamma);
  EXPECT_EQ(rep.gamma_deviation, 0.0);
  EXPECT_EQ(rep.mu_deviation, 0.0);
}

TEST(Equivalence, RicciOnANonOrthonormalMetric) {
  const auto gamma = GeometricStructure::metric(diag({1, 2, 1}));
  IntegratorControls c;
  c.dt = 0.01;
  const auto br = integrate_bracket_flow(heisenberg3(), gamma, ricci_nilpotent_flow(), 2.0, c);
  const auto ge = integrate_geometric_flow(heisenberg3(), gamma, ricci_nilpotent_flow(), 2.0, c);
  EXPECT_TRUE(check_equivalence(br, ge, heisenberg3(), gamma).pass);
}

TEST(NormDiagnostics, LaplacianAndConstant) {
  const auto e = catalog_entry("n_xy");
  const auto traj = integrate_bracket_flow(e.mu, e.gamma, laplacian_g2_flow(), 1.0);
  const auto nd = norm_diagnostics(traj);
  EXPECT_LE(nd.p_identity_error, 1e-4);
  EXPECT_EQ(nd.k_identity_error, 0.0);
  const auto ab = catalog_entry("abelian_n");
  const auto flat = norm_diagnostics(integrate_bracket_flow(ab.mu, ab.gamma, ricci_nilpotent_flow(), 0.1));
  EXPECT_EQ(flat.p_identity_error, 0.0);
}

TEST(Blowup, ImmortalSoliton) {
  const auto e = catalog_entry("n_xy");
  IntegratorControls c;
  c.stride = 10;
  const auto rep = blowup_bounds(integrate_bracket_flow(e.mu, e.gamma, laplacian_g2_flow(), 1.0, c), laplacian_g2_flow());
  EXPECT_FALSE(rep.finite_time);
  EXPECT_EQ(rep.summary, "no finite-time singularity observed");
}

TEST(Blowup, HopfChernRicci) {
  // P0 = diag(0, 1/4, 1/4, 0): T+ = 2, and [e2, e3] = s e1 grows like (1 - t/2)^{-1}, so the rate is 1.
  const auto e = catalog_entry("hopf_su2_R");
  const auto F = chern_ricci_flow();
  const auto traj = integrate_bracket_flow(e.mu, e.gamma, F, 3.0);
  ASSERT_EQ(traj.reason, Termination::blowup);
  const auto rep = blowup_bounds(traj, F);
  EXPECT_NEAR(rep.T_estimate, 2.0, 0.02);
  EXPECT_NEAR(rep.fitted_rate, 1.0, 0.1);
  EXPECT_GE(rep.fitted_rate, rep.lower_rate);
  EXPECT_DOUBLE_EQ(rep.lower_rate, 0.5);
  EXPECT_TRUE(rep.q_integral_monotone);
  EXPECT_GT(rep.best_constant, 0.0);
}

TEST(Soliton, NilG2) {
  const auto e = catalog_entry("n_xy");
  const auto cert = soliton_solve(e.mu, e.gamma, laplacian_g2_flow());
  EXPECT_NEAR(cert.c, -5.0 / 3.0, 1e-12);
  EXPECT_TRUE(near(cert.D_p(), diag({1, 1, 1, 2, 2, 2, 2}), 1e-12));
  EXPECT_LE(cert.residual, 1e-10);
  EXPECT_TRUE(cert.is_soliton);
  EXPECT_EQ(cert.kind, SolitonKind::expanding);
}

TEST(Soliton, OffDiagonalParametersAreNotSolitons) {
  const auto F = laplacian_g2_flow();
  const auto gamma = GeometricStructure::g2(nil_g2_form());
  // phi is not closed here, so the flow itself does not apply; the algebraic fit still runs
  EXPECT_FALSE(F.applicable(n_xy(1, 2), gamma).empty());
  const auto cert = soliton_solve(n_xy(1, 2), gamma, F);
  EXPECT_GT(cert.residual, 1e-3);
  EXPECT_FALSE(cert.is_soliton);
}

TEST(Soliton, FlatIsSteady) {
  const auto e = catalog_entry("abelian_n");
  const auto cert = soliton_solve(e.mu, e.gamma, ricci_nilpotent_flow());
  EXPECT_EQ(cert.c, 0.0);
  EXPECT_TRUE(near(cert.D, Matrix::Zero(4, 4), 1e-15));
  EXPECT_EQ(cert.kind, SolitonKind::steady);
}

TEST(Soliton, NilsolitonHeisenberg) {
  // Q = diag(-1/2, -1/2, 1/2) = -3/2 I + diag(1, 1, 2)
  const auto e = catalog_entry("heisenberg3");
  const auto cert = soliton_solve(e.mu, e.gamma, ricci_nilpotent_flow());
  EXPECT_TRUE(cert.is_soliton);
  EXPECT_NEAR(cert.c, -1.5, 1e-12);
  EXPECT_TRUE(near(cert.D_p(), diag({1, 1, 2}), 1e-12));
}

TEST(LieDerivative, Values) {
  const auto e = catalog_entry("n_xy");
  const KForm& phi = e.gamma.form();
  EXPECT_EQ(std::get<KForm>(lie_derivative(e.mu, Matrix::Zero(7, 7), e.gamma)).norm(), 0.0);
  // I is a derivation only of the abelian algebra
  const LieBracket flat(SplitSpace{0, 7});
  EXPECT_TRUE(near(std::get<KForm>(lie_derivative(flat, Matrix::Identity(7, 7), e.gamma)), 3.0 * phi, 1e-15));
  EXPECT_THROW(lie_derivative(e.mu, Matrix::Identity(7, 7), e.gamma), PreconditionError);
  const KForm lie = std::get<KForm>(lie_derivative(e.mu, Matrix(-diag({1, 1, 1, 2, 2, 2, 2})), e.gamma));
  EXPECT_TRUE(near(5.0 * phi + lie, KForm::monomial(7, {0, 1, 2}, 2.0), 1e-14));
}

TEST(SelfSimilar, SteadyAndExpanding) {
  const auto ab = catalog_entry("abelian_n");
  const auto F0 = ricci_nilpotent_flow();
  const auto flat = self_similar_check(integrate_bracket_flow(ab.mu, ab.gamma, F0, 0.5), soliton_solve(ab.mu, ab.gamma, F0), F0);
  EXPECT_EQ(flat.max_ray_deviation, 0.0);
  EXPECT_EQ(flat.scalar_ode_error, 0.0);

  const auto e = catalog_entry("n_xy");
  const auto F = laplacian_g2_flow();
  IntegratorControls c;
  c.stride = 10;
  const auto rep = self_similar_check(integrate_bracket_flow(e.mu, e.gamma, F, 3.0, c), soliton_solve(e.mu, e.gamma, F), F);
  EXPECT_LE(rep.max_ray_deviation, 1e-6);
  EXPECT_LE(rep.scalar_ode_error, 1e-6);
  EXPECT_EQ(rep.matching_exponent, "1/a");
  EXPECT_NEAR(rep.fitted_exponent, -0.5, 1e-6);
}

TEST(SelfSimilar, NonSolitonDriftsOffTheRay) {
  // a generic point in the GL-orbit of a 2-step nilpotent bracket
  test::Gen gen(51);
  const LieBracket mu = gen.lie_bracket(5);
  const auto gamma = GeometricStructure::metric(Matrix::Identity(5, 5));
  const auto F = ricci_nilpotent_flow();
  const auto cert = soliton_solve(mu, gamma, F);
  IntegratorControls c;
  c.dt = 0.01;
  const auto rep = self_similar_check(integrate_bracket_flow(mu, gamma, F, 1.0, c), cert, F);
  EXPECT_FALSE(cert.is_soliton);
  EXPECT_GT(rep.max_ray_deviation, 1e-3);
}
