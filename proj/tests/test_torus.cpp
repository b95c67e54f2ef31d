#include <gtest/gtest.h>

#include "support.hpp"

#include "equichern/random.hpp"
#include "equichern/torus.hpp"

using namespace equichern;

namespace {

constexpr unsigned dx1 = 1, dx2 = 2;

Form e(int k1, int k2, unsigned mask = 0, Scalar c = Scalar(1)) { return form_term(c, make_mode({k1, k2}), mask); }

AffineMap rotation() {
  AffineMap::Matrix A = AffineMap::identity_matrix();
  A[0][0] = 0;
  A[0][1] = -1;
  A[1][0] = 1;
  A[1][1] = 0;
  return AffineMap(2, A, {}, 1);
}

}  // namespace

TEST(Wedge, Antisymmetry) {
  EXPECT_EQ(wedge(e(0, 0, dx1), e(0, 0, dx2)), e(0, 0, dx1 | dx2));
  EXPECT_EQ(wedge(e(0, 0, dx2), e(0, 0, dx1)), -e(0, 0, dx1 | dx2));
}

TEST(Wedge, ModesMultiply) { EXPECT_EQ(wedge(e(1, 0), e(0, 1, dx1)), e(1, 1, dx1)); }

TEST(Wedge, OddSquareVanishes) { EXPECT_TRUE(wedge(e(1, 0, dx1), e(1, 0, dx1)).is_zero()); }

TEST(Wedge, GradedCommutativeRandomized) {
  Sampler s(1);
  for (int it = 0; it < 50; ++it) {
    int p = s.uniform(0, 3), q = s.uniform(0, 3);
    Form a = s.plain_form(3, p, 1, 2), b = s.plain_form(3, q, 1, 2);
    Form ab = wedge(a, b), ba = wedge(b, a);
    EXPECT_EQ(ab, ((p * q) & 1) ? -ba : ba);
  }
}

TEST(ExtD, ChainRuleOnModes) {
  // d e^{tau (k1 x1 + k2 x2)} = tau k1 e_k dx1 + tau k2 e_k dx2
  Scalar tau = Scalar::tau();
  EXPECT_EQ(ext_d(e(3, -2)), e(3, -2, dx1, Scalar(3) * tau) + e(3, -2, dx2, Scalar(-2) * tau));
  EXPECT_TRUE(ext_d(e(0, 0)).is_zero());
  EXPECT_TRUE(ext_d(ext_d(e(1, 2))).is_zero());
}

TEST(ExtD, SquareZeroAndLeibnizRandomized) {
  Sampler s(2);
  for (int it = 0; it < 50; ++it) {
    int p = s.uniform(0, 3);
    Form a = s.plain_form(4, p, 1, 2), b = s.plain_form(4, s.uniform(0, 3), 1, 2);
    EXPECT_TRUE(ext_d(ext_d(a)).is_zero());
    Form lhs = ext_d(wedge(a, b));
    Form rhs = wedge(ext_d(a), b) + ((p & 1) ? -wedge(a, ext_d(b)) : wedge(a, ext_d(b)));
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Contract, Examples) {
  TangentVector v{Rational(1, 2), Rational(3)};
  EXPECT_EQ(contract(v, e(0, 0, dx2)), e(0, 0, 0, Scalar(3)));
  EXPECT_TRUE(contract(v, e(1, 1)).is_zero());
  EXPECT_EQ(contract({Rational(1), Rational(0)}, e(2, 1, dx1 | dx2)), e(2, 1, dx2));
}

TEST(Contract, CartanCalculusRandomized) {
  Sampler s(3);
  for (int it = 0; it < 50; ++it) {
    TangentVector v{Rational(s.uniform(-2, 2)), Rational(s.uniform(-2, 2)), Rational(1, 2)};
    int p = s.uniform(0, 3);
    Form a = s.plain_form(3, p, 1, 2), b = s.plain_form(3, s.uniform(0, 3), 1, 2);
    EXPECT_TRUE(contract(v, contract(v, a)).is_zero());
    auto L = [&](const Form& w) { return ext_d(contract(v, w)) + contract(v, ext_d(w)); };
    // L_v commutes with d and is an even derivation
    EXPECT_EQ(L(ext_d(a)), ext_d(L(a)));
    EXPECT_EQ(L(wedge(a, b)), wedge(L(a), b) + wedge(a, L(b)));
    // iota_v is an odd derivation
    Form rhs = wedge(contract(v, a), b) + ((p & 1) ? -wedge(a, contract(v, b)) : wedge(a, contract(v, b)));
    EXPECT_EQ(contract(v, wedge(a, b)), rhs);
  }
}

TEST(Integrate, Examples) {
  EXPECT_EQ(integrate_top(e(0, 0, dx1 | dx2), 2), Scalar(1));
  EXPECT_TRUE(integrate_top(e(1, 0, dx1 | dx2), 2).is_zero());
  EXPECT_TRUE(integrate_top(ext_d(e(1, 1, dx1)), 2).is_zero());
}

TEST(Pullback, Identity) {
  Sampler s(4);
  Form a = s.plain_form(2, 1, 1, 2);
  EXPECT_EQ(pullback(AffineMap::identity(2), a), a);
}

TEST(Pullback, RotationTransposesModes) {
  // oracle: k.(A x) = sum_j (sum_i k_i A_ij) x_j
  AffineMap f = rotation();
  Mode k = make_mode({1, 0});
  Mode expect{};
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) expect[j] += k[i] * f.matrix()[i][j];
  EXPECT_EQ(pullback(f, e(1, 0)), form_term(Scalar(1), expect));
  EXPECT_EQ(pullback(f, e(1, 0)), e(0, -1));
}

TEST(Pullback, TranslationPhase) {
  AffineMap f(2, AffineMap::identity_matrix(), {1, 0}, 4);
  EXPECT_EQ(pullback(f, e(1, 0)), form_term(Scalar::zeta(4), make_mode({1, 0})));
}

TEST(Pullback, FunctorialAndNatural) {
  Sampler s(5);
  AffineMap::Matrix B = AffineMap::identity_matrix();
  B[0][1] = 1;  // shear
  AffineMap f = rotation(), g(2, B, {1, 3}, 4);
  for (int it = 0; it < 30; ++it) {
    int p = s.uniform(0, 2);
    Form a = s.plain_form(2, p, 1, 2, 3, 4), b = s.plain_form(2, s.uniform(0, 2), 1, 2, 3, 4);
    // (f o g)^* = g^* f^*
    EXPECT_EQ(pullback(f.compose(g), a), pullback(g, pullback(f, a)));
    EXPECT_EQ(pullback(g, ext_d(a)), ext_d(pullback(g, a)));
    EXPECT_EQ(pullback(g, wedge(a, b)), wedge(pullback(g, a), pullback(g, b)));
    EXPECT_EQ(integrate_top(pullback(g, a), 2), integrate_top(a, 2));
    EXPECT_EQ(integrate_top(pullback(f, a), 2), integrate_top(a, 2));
  }
}

TEST(Pullback, IntertwinesContraction) {
  // iota_v f^* w = f^* iota_{A v} w for a linear map f
  Sampler s(6);
  AffineMap f = rotation();
  for (int it = 0; it < 30; ++it) {
    TangentVector v{Rational(s.uniform(-2, 2)), Rational(s.uniform(-2, 2))};
    TangentVector Av(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) Av[i] += Rational(f.matrix()[i][j]) * v[j];
    Form a = s.plain_form(2, s.uniform(1, 2), 1, 2);
    EXPECT_EQ(contract(v, pullback(f, a)), pullback(f, contract(Av, a)));
  }
}

TEST(AffineMap, RejectsOrientationReversing) {
  AffineMap::Matrix A = AffineMap::identity_matrix();
  A[0][0] = -1;
  EXPECT_THROW(AffineMap(2, A, {}, 1), std::invalid_argument);
  A[0][0] = 2;
  EXPECT_THROW(AffineMap(2, A, {}, 1), std::invalid_argument);
}

TEST(Text, CanonicalLines) {
  Form a = e(0, 0, dx1 | dx2) + e(1, -1, dx2, Scalar(Rational(1, 2)));
  EXPECT_EQ(to_text(a, 2),
            "((1/2)*z1^0*tau^0) * e[1,-1] * dx{2}\n"
            "((1)*z1^0*tau^0) * e[0,0] * dx{1,2}\n");
}
