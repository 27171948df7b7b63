#include "support.hpp"

using namespace hflow;
using hflow::test::near;

namespace {

KForm e(std::vector<int> idx, double v = 1.0) {
  for (int& i : idx) --i;  // tests read 1-based like the literature
  return KForm::monomial(7, idx, v);
}

KForm random_form(test::Gen& gen, int n, int k) {
  KForm a(n, k);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.coeffs()(i) = gen.uniform();
  return a;
}

}  // namespace

TEST(KForm, PermutationSigns) {
  const KForm a = e({1, 2, 3}, 2.0);
  EXPECT_EQ(a.at({1, 0, 2}), -2.0);
  EXPECT_EQ(a.at({2, 0, 1}), 2.0);
  EXPECT_EQ(a.at({0, 0, 1}), 0.0);
  EXPECT_EQ(e({2, 1, 3}).at({0, 1, 2}), -1.0);
}

TEST(Wedge, Basics) {
  EXPECT_TRUE(near(wedge(e({1}), e({2})), e({1, 2}), 0.0));
  EXPECT_EQ(wedge(e({1}), e({1})).norm(), 0.0);
  const KForm vol = wedge(e({1, 2}), e({3, 4, 5, 6, 7}));
  EXPECT_EQ(vol.at({0, 1, 2, 3, 4, 5, 6}), 1.0);
}

TEST(Wedge, GradedCommutativity) {
  test::Gen gen(11);
  const KForm a = random_form(gen, 6, 2), b = random_form(gen, 6, 3), c = random_form(gen, 6, 1);
  EXPECT_TRUE(near(wedge(a, b), wedge(b, a), 1e-14));
  EXPECT_TRUE(near(wedge(b, c), -1.0 * wedge(c, b), 1e-14));
  EXPECT_TRUE(near(wedge(wedge(a, b), c), wedge(a, wedge(b, c)), 1e-13));
}

TEST(Interior, Basics) {
  EXPECT_TRUE(near(interior(Vector::Unit(7, 0), e({1, 2})), e({2}), 0.0));
  EXPECT_EQ(interior(Vector::Unit(7, 2), e({1, 2})).norm(), 0.0);
  EXPECT_TRUE(near(interior(Vector::Unit(7, 0), nil_g2_form()), e({4, 7}) + e({2, 3}) + e({5, 6}), 0.0));
}

TEST(Interior, IsAnAntiderivation) {
  test::Gen gen(12);
  const KForm a = random_form(gen, 5, 2), b = random_form(gen, 5, 2);
  const Vector X = gen.matrix(5, 1);
  EXPECT_TRUE(near(interior(X, wedge(a, b)), wedge(interior(X, a), b) + wedge(a, interior(X, b)), 1e-13));
}

TEST(Hodge, IdentityMetric) {
  EXPECT_TRUE(near(hodge_star(Matrix::Identity(7, 7), e({1})), e({2, 3, 4, 5, 6, 7}), 0.0));
  const KForm phi = nil_g2_form();
  const KForm vol = wedge(phi, hodge_star(Matrix::Identity(7, 7), phi));
  EXPECT_NEAR(vol.at({0, 1, 2, 3, 4, 5, 6}), 7.0, 1e-14);
}

TEST(Hodge, StarStarOnOddDimension) {
  test::Gen gen(13);
  for (int t = 0; t < 10; ++t) {
    const Matrix A = gen.near_identity(7, 0.4);
    const Matrix G = A.transpose() * A;
    const KForm a = random_form(gen, 7, 3);
    EXPECT_TRUE(near(hodge_star(G, hodge_star(G, a)), a, 1e-11));
  }
}

TEST(Hodge, WedgeWithStarIsInnerProductTimesVolume) {
  test::Gen gen(14);
  const Matrix A = gen.near_identity(5, 0.3);
  const Matrix G = A.transpose() * A;
  const KForm a = random_form(gen, 5, 2), b = random_form(gen, 5, 2);
  const double vol = std::sqrt(G.determinant());
  EXPECT_NEAR(wedge(a, hodge_star(G, b)).at({0, 1, 2, 3, 4}), form_inner(G, a, b) * vol, 1e-12);
}

TEST(Differential, NilG2Values) {
  const LieBracket mu = n_xy(2.0, 3.0);
  EXPECT_TRUE(near(ce_differential(mu, e({5})), e({1, 2}, 2.0), 0.0));
  EXPECT_TRUE(near(ce_differential(mu, e({6})), e({1, 3}, 3.0), 0.0));
  EXPECT_TRUE(near(ce_differential(mu, nil_g2_form()), e({1, 2, 3, 7}, 1.0), 1e-15));
  EXPECT_EQ(ce_differential(n_xy(1, 1), nil_g2_form()).norm(), 0.0);
}

TEST(Differential, AbelianAndSquare) {
  test::Gen gen(15);
  EXPECT_EQ(ce_differential(LieBracket(SplitSpace{0, 5}), random_form(gen, 5, 2)).norm(), 0.0);
  for (int t = 0; t < 10; ++t) {
    const LieBracket mu = gen.lie_bracket(5);
    const KForm a = random_form(gen, 5, gen.integer(1, 3));
    EXPECT_NEAR(ce_differential(mu, ce_differential(mu, a)).norm(), 0.0, 1e-12);
  }
}

TEST(Differential, IsAnAntiderivation) {
  test::Gen gen(16);
  const LieBracket mu = gen.lie_bracket(5);
  const KForm a = random_form(gen, 5, 1), b = random_form(gen, 5, 2);
  EXPECT_TRUE(near(ce_differential(mu, wedge(a, b)),
                   wedge(ce_differential(mu, a), b) - wedge(a, ce_differential(mu, b)), 1e-13));
}

TEST(Laplacian, ExpressionOnNilG2) {
  // independent symbolic evaluation: (x^2 + y^2) e^123 + y(y - x) e^267 + x(x - y) e^357
  for (auto [x, y] : std::vector<std::pair<double, double>>{{1, 1}, {1, 2}, {2, 1}, {3, 5}, {0.5, -1.5}}) {
    const KForm expect = e({1, 2, 3}, x * x + y * y) + e({2, 6, 7}, y * (y - x)) + e({3, 5, 7}, x * (x - y));
    EXPECT_TRUE(near(hodge_laplacian(n_xy(x, y), Matrix::Identity(7, 7), nil_g2_form()), expect, 1e-12))
        << "x = " << x << ", y = " << y;
  }
}

TEST(Laplacian, DiagonalPoint) {
  EXPECT_TRUE(near(hodge_laplacian(n_xy(1, 1), Matrix::Identity(7, 7), nil_g2_form()), e({1, 2, 3}, 2.0), 1e-14));
  EXPECT_EQ(hodge_laplacian(LieBracket(SplitSpace{0, 7}), Matrix::Identity(7, 7), nil_g2_form()).norm(), 0.0);
}

TEST(Pullback, FunctorialAndMatchesCompound) {
  test::Gen gen(17);
  const Matrix A = gen.matrix(5, 5), B = gen.matrix(5, 5);
  const KForm a = random_form(gen, 5, 3);
  EXPECT_TRUE(near(pullback(A * B, a), pullback(B, pullback(A, a)), 1e-12));
  EXPECT_NEAR(compound(A, 5)(0, 0), A.determinant(), 1e-12);
  // second compound entry against a direct 2x2 minor: rows {1,3}, columns {0,4}
  const KForm rows = KForm::monomial(5, {1, 3}), cols = KForm::monomial(5, {0, 4});
  const double minor = A(1, 0) * A(3, 4) - A(1, 4) * A(3, 0);
  EXPECT_NEAR(rows.coeffs().dot(compound(A, 2) * cols.coeffs()), minor, 1e-14);
}
