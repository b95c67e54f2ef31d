#include <gtest/gtest.h>

#include "support.hpp"

#include <random>

#include "equichern/scalar.hpp"

using namespace equichern;

TEST(Cyclotomic, ZetaFourSquaredIsMinusOne) {
  Cyclotomic z = Cyclotomic::zeta(4);
  EXPECT_EQ(z * z, Cyclotomic(Rational(-1), 4));
}

TEST(Cyclotomic, OnePlusMinusZetaFour) {
  Cyclotomic one(Rational(1), 4), z = Cyclotomic::zeta(4);
  EXPECT_EQ((one + z) * (one - z), Cyclotomic(Rational(2), 4));
}

TEST(Cyclotomic, ZetaEightDividedBySelf) {
  Cyclotomic z = Cyclotomic::zeta(8);
  EXPECT_EQ(z / z, Cyclotomic(Rational(1)));
}

TEST(Cyclotomic, ZetaToTheConductorIsOne) {
  for (int N : {1, 2, 3, 4, 5, 6, 8, 12}) {
    Cyclotomic p(Rational(1), N);
    for (int i = 0; i < N; ++i) p = p * Cyclotomic::zeta(N);
    EXPECT_EQ(p, Cyclotomic(Rational(1))) << N;
  }
}

TEST(Cyclotomic, DivisionByZeroThrows) {
  EXPECT_THROW(Cyclotomic(Rational(1), 4) / Cyclotomic(Rational(0), 4), std::domain_error);
}

TEST(Cyclotomic, CanonicalAcrossConductors) {
  // zeta_8^2 = zeta_4 and zeta_6^3 = -1
  EXPECT_EQ(Cyclotomic::zeta(8, 2), Cyclotomic::zeta(4));
  EXPECT_EQ(Cyclotomic::zeta(6, 3), Cyclotomic(Rational(-1)));
}

namespace {

Cyclotomic random_cyclo(std::mt19937_64& rng, int N) {
  std::uniform_int_distribution<int> c(-3, 3), d(1, 3);
  Cyclotomic r(Rational(0), N);
  for (int j = 0; j < N; ++j) r = r + Cyclotomic::zeta(N, j) * Rational(c(rng), d(rng));
  return r;
}

}  // namespace

TEST(Cyclotomic, FieldAxiomsRandomized) {
  std::mt19937_64 rng(17);
  for (int N : {3, 4, 5, 8, 12}) {
    for (int it = 0; it < 20; ++it) {
      Cyclotomic a = random_cyclo(rng, N), b = random_cyclo(rng, N), c = random_cyclo(rng, N);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * b, b * a);
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ(a + b, b + a);
      if (!b.is_zero()) EXPECT_EQ((a / b) * b, a);
    }
  }
}

TEST(Cyclotomic, EmbeddingCommutesWithArithmetic) {
  std::mt19937_64 rng(23);
  for (auto [N, k] : {std::pair{3, 2}, {4, 2}, {4, 3}, {2, 6}}) {
    for (int it = 0; it < 20; ++it) {
      Cyclotomic a = random_cyclo(rng, N), b = random_cyclo(rng, N);
      EXPECT_EQ((a * b).embed(k * N), a.embed(k * N) * b.embed(k * N));
      EXPECT_EQ((a + b).embed(k * N), a.embed(k * N) + b.embed(k * N));
    }
  }
}

TEST(Scalar, TauSquared) { EXPECT_EQ(Scalar::tau() * Scalar::tau(), Scalar::tau(2)); }

TEST(Scalar, Annihilator) {
  Scalar x = Scalar(2) * Scalar::tau() + Scalar::zeta(4);
  EXPECT_TRUE((x * Scalar()).is_zero());
  EXPECT_EQ((x * Scalar()).str(), "0");
}

TEST(Scalar, OnePlusTauTimesOneMinusTau) {
  Scalar one(1), t = Scalar::tau();
  EXPECT_EQ((one + t) * (one - t), one - Scalar::tau(2));
}

TEST(Scalar, CanonicalText) {
  Scalar x = Scalar(Rational(3, 2)) * Scalar::zeta(4) * Scalar::tau(2);
  EXPECT_EQ(x.str(), "(3/2)*z4^1*tau^2");
  EXPECT_EQ((Scalar(1) + Scalar::tau()).str(), "(1)*z1^0*tau^0 + (1)*z1^0*tau^1");
}

TEST(Scalar, RingAxiomsRandomized) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> p(0, 2);
  auto rnd = [&] {
    Scalar s;
    for (int i = 0; i < 3; ++i) s += Scalar(random_cyclo(rng, 4), p(rng));
    return s;
  };
  for (int it = 0; it < 50; ++it) {
    Scalar a = rnd(), b = rnd(), c = rnd();
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    if (!a.is_zero() && !b.is_zero()) EXPECT_EQ((a * b).max_tau(), a.max_tau() + b.max_tau());
  }
}

TEST(Rational, OverflowIsReported) {
  Rational big(std::int64_t{1} << 62);
  EXPECT_THROW(big * big, std::overflow_error);
}

TEST(PolyU, DerivativeAtZero) {
  PolyU p = PolyU(Scalar(3), 2) + PolyU(Scalar(1), 0);
  EXPECT_EQ(p.derivative_at_zero(2), Scalar(6));
  EXPECT_EQ(p.derivative_at_zero(1), Scalar());
  EXPECT_EQ((p * p).coeff(2), Scalar(6));
}
