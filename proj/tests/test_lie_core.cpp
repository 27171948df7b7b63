#include "support.hpp"

using namespace hflow;
using hflow::test::diag;
using hflow::test::near;

namespace {

// Jacobiator norm by brute force through apply(), independent of the library's index loop.
double jacobi_oracle(const LieBracket& mu) {
  const int N = mu.dim();
  double total = 0.0;
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y)
      for (int z = 0; z < N; ++z) {
        const Vector X = Vector::Unit(N, x), Y = Vector::Unit(N, y), Z = Vector::Unit(N, z);
        const Vector j = mu.apply(X, mu.apply(Y, Z)) + mu.apply(Y, mu.apply(Z, X)) + mu.apply(Z, mu.apply(X, Y));
        total += j.squaredNorm();
      }
  return std::sqrt(total);
}

}  // namespace

TEST(LieBracket, AntisymmetryIsEnforced) {
  LieBracket mu(SplitSpace{0, 3});
  mu.set(0, 1, 2, 1.5);
  EXPECT_EQ(mu(1, 0, 2), -1.5);
  mu.add(1, 0, 2, 0.5);
  EXPECT_EQ(mu(0, 1, 2), 1.0);
}

TEST(LieBracket, VectorRoundTrip) {
  test::Gen gen(1);
  const LieBracket mu = gen.antisymmetric(4);
  const LieBracket back = LieBracket::from_vector(mu.space(), mu.as_vector());
  EXPECT_EQ(norm(mu - back), 0.0);
}

TEST(Jacobi, ZeroAndHeisenberg) {
  EXPECT_EQ(jacobi_residual(LieBracket(SplitSpace{0, 4})), 0.0);
  EXPECT_EQ(jacobi_residual(heisenberg3()), 0.0);
}

TEST(Jacobi, ActionOfOneVectorOnAnAbelianIdealIsLie) {
  // c_12^3 = 1, c_13^2 = 1: ad e1 acts on the abelian span(e2, e3), so the cyclic sum vanishes.
  LieBracket mu(SplitSpace{0, 3});
  mu.set(0, 1, 2, 1.0);
  mu.set(0, 2, 1, 1.0);
  EXPECT_NEAR(jacobi_oracle(mu), 0.0, 1e-15);
  EXPECT_NEAR(jacobi_residual(mu), 0.0, 1e-15);
}

TEST(Jacobi, NonLieBracketHasPositiveResidual) {
  // [e1,e2] = e3, [e1,e3] = e1: Jac(e1,e2,e3) = e3 up to sign on all 6 orderings.
  LieBracket mu(SplitSpace{0, 3});
  mu.set(0, 1, 2, 1.0);
  mu.set(0, 2, 0, 1.0);
  EXPECT_NEAR(jacobi_oracle(mu), std::sqrt(6.0), 1e-14);
  EXPECT_NEAR(jacobi_residual(mu), std::sqrt(6.0), 1e-14);
}

TEST(Jacobi, MatchesOracleOnRandomBrackets) {
  test::Gen gen(2);
  for (int t = 0; t < 20; ++t) {
    const LieBracket mu = gen.antisymmetric(gen.integer(2, 5));
    EXPECT_NEAR(jacobi_residual(mu), jacobi_oracle(mu), 1e-12 * std::max(1.0, jacobi_oracle(mu)));
  }
}

TEST(Admissible, LieGroupCaseIsAlwaysAdmissible) {
  test::Gen gen(3);
  const LieBracket mu = gen.lie_bracket(5);
  const auto rep = check_admissible(mu, GeometricStructure::metric(Matrix::Identity(5, 5)));
  EXPECT_TRUE(rep.h1_ok && rep.h3_ok && rep.h4_ok);
  EXPECT_EQ(rep.h2, "not checked");
}

TEST(Admissible, NilG2Example) {
  const auto rep = check_admissible(n_xy(1, 1), GeometricStructure::g2(nil_g2_form()));
  EXPECT_TRUE(rep.h1_ok && rep.h3_ok && rep.h4_ok);
}

TEST(Admissible, IsotropyActingTriviallyFailsH3) {
  // q = 1, mu(Z, p) = 0
  LieBracket mu(SplitSpace{1, 3});
  mu.set(1, 2, 3, 1.0);
  const auto rep = check_admissible(mu, GeometricStructure::metric(Matrix::Identity(3, 3)));
  EXPECT_FALSE(rep.h3_ok);
}

TEST(Act, IdentityAndScalar) {
  const LieBracket mu = n_xy(1, 2);
  EXPECT_EQ(norm(act(Matrix::Identity(7, 7), mu) - mu), 0.0);
  const LieBracket scaled = act(3.0 * Matrix::Identity(7, 7), mu);
  EXPECT_NEAR(norm(scaled - (1.0 / 3.0) * mu), 0.0, 1e-15);
}

TEST(Act, BlockScalingIsGeometricScaling) {
  const LieBracket mu = heisenberg3_x_R_rot(0.5);
  const double c = 2.5;
  const Matrix h = block_identity_p(Matrix((1.0 / c) * Matrix::Identity(4, 4)), 1);
  EXPECT_NEAR(norm(act(h, mu) - scale(c, mu)), 0.0, 1e-14);
}

TEST(Act, RejectsSingular) {
  Matrix h = Matrix::Identity(3, 3);
  h(2, 2) = 0.0;
  EXPECT_THROW(act(h, heisenberg3()), PreconditionError);
}

TEST(Act, IsAGroupAction) {
  test::Gen gen(4);
  const LieBracket mu = gen.lie_bracket(4);
  const Matrix a = gen.near_identity(4), b = gen.near_identity(4);
  EXPECT_NEAR(norm(act(a * b, mu) - act(a, act(b, mu))), 0.0, 1e-12);
}

TEST(Delta, IdentityGivesBracket) {
  const LieBracket mu = n_xy(1, 1);
  EXPECT_NEAR(norm(delta(mu, Matrix::Identity(7, 7)) - mu), 0.0, 1e-15);
}

TEST(Delta, KnownDerivationIsAnnihilated) {
  EXPECT_NEAR(norm(delta(n_xy(1, 1), diag({1, 1, 1, 2, 2, 2, 2}))), 0.0, 1e-15);
  EXPECT_TRUE(is_derivation(n_xy(1, 1), diag({1, 1, 1, 2, 2, 2, 2})));
}

TEST(Delta, ZeroBracket) {
  test::Gen gen(5);
  EXPECT_EQ(norm(delta(LieBracket(SplitSpace{0, 4}), gen.matrix(4, 4))), 0.0);
}

TEST(Delta, IsTheDerivativeOfTheAction) {
  test::Gen gen(6);
  const LieBracket mu = gen.lie_bracket(4);
  const Matrix A = gen.matrix(4, 4);
  const double eps = 1e-5;
  const LieBracket fd = (1.0 / (2 * eps)) * (act(linalg::expm(eps * A), mu) - act(linalg::expm(-eps * A), mu));
  EXPECT_NEAR(norm(fd + delta(mu, A)), 0.0, 1e-8);
}

TEST(Inner, Values) {
  EXPECT_EQ(bracket_inner(heisenberg3(), heisenberg3()), 2.0);
  EXPECT_EQ(bracket_inner(heisenberg3(), LieBracket(SplitSpace{0, 3})), 0.0);
  EXPECT_NEAR(norm(n_xy(1, 1)) * norm(n_xy(1, 1)), 4.0, 1e-15);
}

TEST(MomentMap, Values) {
  EXPECT_TRUE(near(moment_map(LieBracket(SplitSpace{0, 3})), Matrix::Zero(3, 3), 0.0));
  EXPECT_TRUE(near(moment_map(heisenberg3()), diag({-0.5, -0.5, 0.5}), 1e-15));
}

TEST(MomentMap, TraceIdentityOnRandomBrackets) {
  test::Gen gen(7);
  for (int t = 0; t < 50; ++t) {
    const LieBracket mu = gen.antisymmetric(gen.integer(2, 6));
    EXPECT_NEAR(moment_map(mu).trace(), -0.25 * std::pow(norm(mu), 2), 1e-12);
  }
}

TEST(MomentMap, IsSymmetricAndEquivariantUnderRotations) {
  test::Gen gen(8);
  const LieBracket mu = gen.lie_bracket(5);
  const Matrix M = moment_map(mu);
  EXPECT_TRUE(near(M, M.transpose(), 1e-15));
  const Matrix O = gen.orthogonal(5);
  EXPECT_TRUE(near(moment_map(act(O, mu)), O * M * O.transpose(), 1e-12));
}

TEST(JMap, RotationPlane) {
  LieBracket mu(SplitSpace{1, 2});
  mu.set(1, 2, 0, 1.0);
  Matrix expect(2, 2);
  expect << 0, -1, 1, 0;
  EXPECT_TRUE(near(j_map(mu, 0), expect, 0.0));
  EXPECT_THROW(j_map(heisenberg3(), 0), PreconditionError);
}

TEST(JMap, IsSkew) {
  test::Gen gen(9);
  LieBracket mu = gen.antisymmetric(5);
  mu = LieBracket::from_vector(SplitSpace{2, 3}, mu.as_vector());
  for (int l = 0; l < 2; ++l) EXPECT_TRUE(near(j_map(mu, l), -j_map(mu, l).transpose(), 0.0));
}

TEST(Derivations, Dimensions) {
  EXPECT_EQ(derivation_space(LieBracket(SplitSpace{0, 3})).size(), 9u);
  EXPECT_EQ(derivation_space(heisenberg3()).size(), 6u);
}

TEST(Derivations, SpanContainsTheG2Derivation) {
  const auto basis = derivation_space(n_xy(1, 1), BlockConstraint::p_only);
  Matrix B(49, static_cast<Eigen::Index>(basis.size()));
  for (size_t i = 0; i < basis.size(); ++i) B.col(static_cast<Eigen::Index>(i)) = linalg::flatten(basis[i]);
  const Vector d = linalg::flatten(diag({1, 1, 1, 2, 2, 2, 2}));
  const Vector x = linalg::lstsq(B, d);
  EXPECT_NEAR((B * x - d).norm(), 0.0, 1e-12);
  for (const auto& D : basis) EXPECT_TRUE(is_derivation(n_xy(1, 1), D));
}

TEST(Nilpotent, Detection) {
  EXPECT_TRUE(is_nilpotent(heisenberg3()));
  EXPECT_TRUE(is_nilpotent(n_xy(1, 2)));
  EXPECT_FALSE(is_nilpotent(hopf_su2_R(1.0)));
}

TEST(Scale, OnlyPTimesPChanges) {
  // su(2) as the round 2-sphere: mu(e1, e2) = Z, Z rotates p
  LieBracket mu(SplitSpace{1, 2});
  mu.set(1, 2, 0, 1.0);
  mu.set(0, 1, 2, 1.0);
  mu.set(0, 2, 1, -1.0);
  ASSERT_EQ(jacobi_residual(mu), 0.0);
  const LieBracket s = scale(3.0, mu);
  EXPECT_EQ(norm(k_by_g_part(s) - k_by_g_part(mu)), 0.0);
  EXPECT_NEAR(norm_k(s), 9.0 * norm_k(mu), 1e-14);
  EXPECT_NEAR(norm_p(s), 3.0 * norm_p(mu), 1e-14);
}
