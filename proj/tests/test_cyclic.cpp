#include <gtest/gtest.h>

#include "cyclic_support.hpp"
#include "equichern/scenario.hpp"
#include "support.hpp"

using namespace equichern;
using equichern::testing_support::cyl_key;
using equichern::testing_support::random_bar;
using equichern::testing_support::random_cyl;

namespace {

Mode m2(int a, int b) {
  Mode m{};
  m[0] = static_cast<std::int16_t>(a);
  m[1] = static_cast<std::int16_t>(b);
  return m;
}

CylChain power(const std::function<CylChain(const CylChain&)>& f, CylChain x, int n) {
  for (int i = 0; i < n; ++i) x = f(x);
  return x;
}

class CyclicModule : public ::testing::TestWithParam<const char*> {
 protected:
  Scenario sc = load_scenario(GetParam());
  const Group& G() const { return sc.group; }
};

}  // namespace

TEST_P(CyclicModule, SimplicialIdentitiesHorizontal) {
  Sampler s(11);
  for (int p = 1; p <= 3; ++p) {
    for (int q = 0; q <= 2; ++q) {
      CylChain x = random_cyl(s, G(), p, q, false);
      for (int j = 0; j <= p && p >= 2; ++j)
        for (int i = 0; i < j; ++i)
          EXPECT_EQ(face_h(G(), face_h(G(), x, j), i), face_h(G(), face_h(G(), x, i), j - 1)) << p << q << i << j;
      for (int i = 0; i <= p; ++i) {
        EXPECT_EQ(face_h(G(), degen_h(x, i), i), x);
        EXPECT_EQ(face_h(G(), degen_h(x, i), i + 1), x);
      }
      // d_i t = t d_{i-1}, d_0 t = d_p
      CylChain t = cyc_h(G(), x);
      for (int i = 1; i <= p; ++i) EXPECT_EQ(face_h(G(), t, i), cyc_h(G(), face_h(G(), x, i - 1)));
      EXPECT_EQ(face_h(G(), t, 0), face_h(G(), x, p));
    }
  }
}

TEST_P(CyclicModule, SimplicialIdentitiesVertical) {
  Sampler s(12);
  for (int p = 0; p <= 2; ++p) {
    for (int q = 1; q <= 3; ++q) {
      CylChain x = random_cyl(s, G(), p, q, false);
      for (int j = 0; j <= q && q >= 2; ++j)
        for (int i = 0; i < j; ++i)
          EXPECT_EQ(face_v(G(), face_v(G(), x, j), i), face_v(G(), face_v(G(), x, i), j - 1));
      for (int i = 0; i <= q; ++i) {
        EXPECT_EQ(face_v(G(), degen_v(x, i), i), x);
        EXPECT_EQ(face_v(G(), degen_v(x, i), i + 1), x);
      }
      CylChain t = cyc_v(G(), x);
      for (int i = 1; i <= q; ++i) EXPECT_EQ(face_v(G(), t, i), cyc_v(G(), face_v(G(), x, i - 1)));
      EXPECT_EQ(face_v(G(), t, 0), face_v(G(), x, q));
    }
  }
}

TEST_P(CyclicModule, HorizontalAndVerticalCommute) {
  Sampler s(13);
  for (int p = 1; p <= 2; ++p) {
    for (int q = 1; q <= 2; ++q) {
      CylChain x = random_cyl(s, G(), p, q, false);
      auto H = [&](const CylChain& y) { return cyc_h(G(), y); };
      auto V = [&](const CylChain& y) { return cyc_v(G(), y); };
      EXPECT_EQ(H(V(x)), V(H(x)));
      for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= q; ++j) EXPECT_EQ(face_h(G(), face_v(G(), x, j), i), face_v(G(), face_h(G(), x, i), j));
      for (int i = 0; i <= p; ++i) EXPECT_EQ(face_h(G(), V(x), i), V(face_h(G(), x, i)));
      for (int j = 0; j <= q; ++j) EXPECT_EQ(face_v(G(), H(x), j), H(face_v(G(), x, j)));
    }
  }
}

TEST_P(CyclicModule, CylindricalCondition) {
  Sampler s(14);
  for (int p = 0; p <= 3; ++p) {
    for (int q = 0; q <= 3; ++q) {
      CylChain x = random_cyl(s, G(), p, q, false);
      auto H = [&](const CylChain& y) { return cyc_h(G(), y); };
      auto V = [&](const CylChain& y) { return cyc_v(G(), y); };
      EXPECT_EQ(power(H, power(V, x, q + 1), p + 1), x);
      // t^v composed with its inverse (t^v)^q (t^h)^{p+1}
      EXPECT_EQ(V(power(V, power(H, x, p + 1), q)), x);
    }
  }
}

TEST_P(CyclicModule, DegeneracyThenFaceIsIdentity) {
  Sampler s(15);
  CylChain x = random_cyl(s, G(), 2, 1);
  EXPECT_EQ(face_h(G(), degen_h(x, 0), 0), x);
  EXPECT_EQ(face_v(G(), degen_v(x, 0), 0), x);
}

TEST_P(CyclicModule, DifferentialsSquareAndAnticommute) {
  Sampler s(16);
  const Group& g = G();
  for (int p = 0; p <= 3; ++p) {
    for (int q = 0; q <= 3; ++q) {
      CylChain x = random_cyl(s, g, p, q);
      auto bh = [&](const CylChain& y) { return y.p > 0 ? b_h(g, y) : CylChain{}; };
      auto bv = [&](const CylChain& y) { return y.q > 0 ? b_v(g, y) : CylChain{}; };
      auto Bh = [&](const CylChain& y) { return y.is_zero() ? y : B_h(g, y); };
      auto Bv = [&](const CylChain& y) { return y.is_zero() ? y : B_v(g, y); };
      EXPECT_TRUE(bh(bh(x)).is_zero()) << p << q;
      EXPECT_TRUE(bv(bv(x)).is_zero()) << p << q;
      EXPECT_TRUE(Bh(Bh(x)).is_zero()) << p << q;
      EXPECT_TRUE(Bv(Bv(x)).is_zero()) << p << q;
      EXPECT_TRUE((bh(bv(x)) + bv(bh(x))).is_zero()) << "bh bv " << p << q;
      CylChain Tx = power([&](const CylChain& y) { return cyc_h(g, y); }, x, p + 1);
      EXPECT_EQ(bh(Bh(x)) + Bh(bh(x)), x - Tx) << "bh Bh " << p << q;
      EXPECT_EQ(bv(Bv(x)) + Bv(bv(x)), Tx - x) << "bv Bv " << p << q;
      EXPECT_TRUE((Bh(Bv(x)) + Bv(Bh(x))).is_zero()) << "Bh Bv " << p << q;
      EXPECT_TRUE((bh(Bv(x)) + Bv(bh(x))).is_zero()) << "bh Bv " << p << q;
      EXPECT_TRUE((bv(Bh(x)) + Bh(bv(x))).is_zero()) << "bv Bh " << p << q;
    }
  }
}

TEST_P(CyclicModule, DiagonalIsMixedComplex) {
  Sampler s(17);
  const Group& g = G();
  for (int n = 0; n <= 3; ++n) {
    CylChain x = random_cyl(s, g, n, n);
    if (n >= 2) EXPECT_TRUE(b_diag(g, b_diag(g, x)).is_zero());
    EXPECT_TRUE(B_diag(g, B_diag(g, x)).is_zero());
    if (n >= 1) EXPECT_TRUE((b_diag(g, B_diag(g, x)) + B_diag(g, b_diag(g, x))).is_zero()) << n;
    else EXPECT_TRUE(b_diag(g, B_diag(g, x)).is_zero());
  }
}

TEST_P(CyclicModule, CrossedProductChainsAreMixedComplex) {
  Sampler s(18);
  const Group& g = G();
  for (int k = 0; k <= 3; ++k) {
    BarChain x = random_bar(s, g, k);
    if (k >= 2) EXPECT_TRUE(chain_b(g, chain_b(g, x)).is_zero());
    EXPECT_TRUE(chain_B(chain_B(x)).is_zero());
    if (k >= 1) EXPECT_TRUE((chain_b(g, chain_B(x)) + chain_B(chain_b(g, x))).is_zero()) << k;
  }
}

TEST_P(CyclicModule, Psi1IsMapOfMixedComplexes) {
  Sampler s(19);
  const Group& g = G();
  for (int k = 0; k <= 3; ++k) {
    BarChain x = random_bar(s, g, k);
    if (k >= 1) EXPECT_EQ(psi1(g, chain_b(g, x)), b_diag(g, psi1(g, x))) << k;
    EXPECT_EQ(psi1(g, chain_B(x)), B_diag(g, psi1(g, x))) << k;
  }
}

TEST_P(CyclicModule, EilenbergZilberRetract) {
  Sampler s(20);
  const Group& g = G();
  for (int p = 0; p <= 2; ++p) {
    for (int q = 0; q <= 2; ++q) {
      CylChain x = random_cyl(s, g, p, q);
      CylChain d = shuffle_nabla(x);
      EXPECT_EQ(ez(g, d, p, q), x) << p << q;
      for (int p2 = 0; p2 <= p + q; ++p2)
        if (p2 != p) EXPECT_TRUE(ez(g, d, p2, p + q - p2).is_zero()) << p << q << p2;
    }
  }
}

TEST_P(CyclicModule, EilenbergZilberChainMaps) {
  Sampler s(21);
  const Group& g = G();
  for (int n = 1; n <= 3; ++n) {
    CylChain x = random_cyl(s, g, n, n);
    TotChain lhs = tot_differential(g, ez_total(g, x), false);
    TotChain rhs = ez_total(g, b_diag(g, x));
    EXPECT_EQ(lhs, rhs) << n;
  }
  for (int p = 0; p <= 2; ++p) {
    for (int q = 0; q <= 2; ++q) {
      if (p + q == 0) continue;
      CylChain x = random_cyl(s, g, p, q);
      CylChain lhs = b_diag(g, shuffle_nabla(x));
      CylChain rhs = zero_chain(p + q - 1, p + q - 1);
      if (p > 0) rhs = rhs + shuffle_nabla(b_h(g, x));
      if (q > 0) rhs = rhs + shuffle_nabla(b_v(g, x));
      EXPECT_EQ(lhs, rhs) << p << q;
    }
  }
}

TEST_P(CyclicModule, HomotopyAndSideConditions) {
  Sampler s(22);
  const Group& g = G();
  for (int n = 0; n <= 3; ++n) {
    CylChain x = random_cyl(s, g, n, n);
    CylChain h = ez_homotopy(g, x);
    CylChain nez = zero_chain(n, n);
    for (int p = 0; p <= n; ++p) nez = nez + shuffle_nabla(ez(g, x, p, n - p));
    CylChain rhs = b_diag(g, h);
    if (n > 0) rhs = rhs + ez_homotopy(g, b_diag(g, x));
    EXPECT_EQ(nez - x, rhs) << n;
    EXPECT_TRUE(ez_homotopy(g, h).is_zero()) << n;
    for (int p = 0; p <= n + 1; ++p) EXPECT_TRUE(ez(g, h, p, n + 1 - p).is_zero()) << n << p;
  }
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; q <= 2; ++q) EXPECT_TRUE(ez_homotopy(g, shuffle_nabla(random_cyl(s, g, p, q))).is_zero());
}

TEST_P(CyclicModule, PerturbedEilenbergZilberIsChainMap) {
  Sampler s(23);
  const Group& g = G();
  const int top = 4;
  for (int n = 0; n <= 3; ++n) {
    CylChain x = random_cyl(s, g, n, n);
    TotChain lhs = truncate_total(tot_differential(g, ez_pert(g, x, top + 1)), top);
    TotChain in = {};
    CylChain bx = n > 0 ? b_diag(g, x) : CylChain{};
    CylChain Bx = B_diag(g, x);
    TotChain rhs;
    for (const CylChain& y : {bx, Bx})
      if (!y.is_zero())
        for (const auto& [bd, c] : ez_pert(g, y, top + 1)) tot_add(rhs, c);
    EXPECT_EQ(lhs, truncate_total(rhs, top)) << n;
  }
}

TEST_P(CyclicModule, TotalComplexIsMixed) {
  Sampler s(24);
  const Group& g = G();
  for (int p = 0; p <= 3; ++p) {
    for (int q = 0; q <= 3; ++q) {
      TotChain t;
      tot_add(t, random_cyl(s, g, p, q));
      EXPECT_TRUE(tot_differential(g, tot_differential(g, t)).empty()) << p << q;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Presets, CyclicModule,
                         ::testing::Values("z2-torus2", "z4-torus2", "z2-flip-torus2", "z4-point", "trivial-torus2"));

namespace {

// g^* e_m through the form-level action.
std::pair<Mode, Scalar> moved(const Group& G, int g, const Mode& m) {
  Key k;
  k.k = m;
  Form f = act(G, g, Form(k, Scalar(1)));
  EXPECT_EQ(f.size(), 1u);
  return {f.terms().front().first.k, f.terms().front().second};
}

BarChain bar_of(const std::vector<AlgebraElem>& v) { return bar_basis(v); }

AlgebraElem el(int g, int a, int b) { return AlgebraElem::basis(g, m2(a, b)); }

}  // namespace

TEST(BarChains, DegreeOneBoundaryIsCommutator) {
  Scenario sc = load_scenario("z4-torus2");
  const Group& G = sc.group;
  AlgebraElem a0 = el(1, 1, 0), a1 = el(2, 0, 1);
  BarChain expect = bar_of({convolve(G, a0, a1)}) - bar_of({convolve(G, a1, a0)});
  EXPECT_FALSE(expect.is_zero());
  EXPECT_EQ(chain_b(G, bar_of({a0, a1})), expect);
}

TEST(BarChains, DegreeZeroConnesOperator) {
  Scenario sc = load_scenario("z4-torus2");
  AlgebraElem a0 = el(3, 1, -1);
  EXPECT_EQ(chain_B(bar_of({a0})), bar_of({AlgebraElem::one(), a0}));
  EXPECT_TRUE(chain_B(bar_of({AlgebraElem::one()})).is_zero());
}

TEST(BarChains, BoundarySquaresToZeroInDegreeTwo) {
  Scenario sc = load_scenario("z4-torus2");
  const Group& G = sc.group;
  BarChain x = bar_of({el(1, 1, 0), el(3, 0, 1), el(2, -1, 1)});
  EXPECT_FALSE(chain_b(G, x).is_zero());
  EXPECT_TRUE(chain_b(G, chain_b(G, x)).is_zero());
}

TEST(Cylindrical, VerticalFacesMatchHaarSums) {
  Scenario sc = load_scenario("z4-torus2");
  const Group& G = sc.group;
  const int n = G.order();
  // F = delta_{h0} (x) delta_{h1} (x) delta_{h2} with payload (a0, a1)
  const std::array<int, 3> h{1, 3, 2};
  const Mode a0 = m2(1, 0), a1 = m2(0, -1);
  CylChain x{1, 2, CylComb(cyl_key({h[0], h[1], h[2]}, {a0, a1}), Scalar(1))};
  auto F = [&](int x0, int x1, int x2) { return x0 == h[0] && x1 == h[1] && x2 == h[2]; };

  // d_0 F(g0, g1) = sum_gamma F(gamma, gamma^{-1} g0, g1)
  Accum<CylKey> d0;
  for (int g0 = 0; g0 < n; ++g0)
    for (int g1 = 0; g1 < n; ++g1)
      for (int gamma = 0; gamma < n; ++gamma)
        if (F(gamma, G.mul(G.inv(gamma), g0), g1)) d0.add(cyl_key({g0, g1}, {a0, a1}), Scalar(1));
  EXPECT_EQ(face_v(G, x, 0), (CylChain{1, 1, d0.finish()}));

  // d_2 F(g0, g1) = sum_gamma gamma . F(gamma^{-1} g0, g1, gamma)
  Accum<CylKey> d2;
  for (int g0 = 0; g0 < n; ++g0)
    for (int g1 = 0; g1 < n; ++g1)
      for (int gamma = 0; gamma < n; ++gamma)
        if (F(G.mul(G.inv(gamma), g0), g1, gamma)) {
          auto [b0, c0] = moved(G, gamma, a0);
          auto [b1, c1] = moved(G, gamma, a1);
          d2.add(cyl_key({g0, g1}, {b0, b1}), c0 * c1);
        }
  CylChain expect{1, 1, d2.finish()};
  EXPECT_EQ(expect.c.size(), 1u);
  EXPECT_EQ(face_v(G, x, 2), expect);
}

TEST(Cylindrical, HorizontalBoundaryExpandsTwoFaces) {
  Scenario sc = load_scenario("z4-torus2");
  const Group& G = sc.group;
  const int g0 = 1, g1 = 2;
  const Mode a0 = m2(1, 1), a1 = m2(-1, 0);
  CylChain x{1, 1, CylComb(cyl_key({g0, g1}, {a0, a1}), Scalar(1))};
  // a0 a1 - (g0 g1)^{-1}(a1) a0
  auto [b1, c1] = moved(G, G.inv(G.mul(g0, g1)), a1);
  CylChain expect{0, 1, CylComb(cyl_key({g0, g1}, {a0 + a1}), Scalar(1))};
  expect = expect - CylChain{0, 1, CylComb(cyl_key({g0, g1}, {b1 + a0}), c1)};
  EXPECT_EQ(b_h(G, x), expect);
}

TEST(Cylindrical, VerticalConnesOperatorSquaresToZero) {
  Scenario sc = load_scenario("z2-torus2");
  Sampler s(31);
  CylChain x = random_cyl(s, sc.group, 1, 2);
  EXPECT_FALSE(B_v(sc.group, x).is_zero());
  EXPECT_TRUE(B_v(sc.group, B_v(sc.group, x)).is_zero());
}

TEST(Cylindrical, TrivialGroupVerticalBoundaryByParity) {
  Scenario sc = load_scenario("trivial-torus2");
  const Group& G = sc.group;
  Sampler s(32);
  for (int p = 0; p <= 2; ++p) {
    for (int q = 1; q <= 4; ++q) {
      CylChain x = random_cyl(s, G, p, q);
      // all group slots at the identity element
      Accum<CylKey> acc;
      for (const auto& [k, c] : x.c.terms()) {
        CylKey nk = k;
        for (int i = 0; i <= q; ++i) nk.g[i] = 0;
        acc.add(nk, c);
      }
      x.c = acc.finish();
      CylChain expect = q % 2 == 0 ? Scalar(p % 2 ? -1 : 1) * face_v(G, x, 0) : CylChain{};
      EXPECT_EQ(b_v(G, x), expect) << p << q;
    }
  }
}

TEST(Psi1, DegreeZeroTrivialGroupIsIdentity) {
  Scenario sc = load_scenario("trivial-torus2");
  BarChain x = bar_of({el(0, 1, 2)}) + bar_of({AlgebraElem::one()});
  CylChain y = psi1(sc.group, x);
  EXPECT_EQ(y, (CylChain{0, 0, x.c}));
}

TEST(Psi1, DegreeOneShiftsPayloads) {
  Scenario sc = load_scenario("z2-flip-torus2");
  const Group& G = sc.group;
  const Mode a0 = m2(1, 0), a1 = m2(0, 1);
  CylChain y = psi1(G, bar_of({el(1, 1, 0), el(1, 0, 1)}));
  // ((g0 g1)^{-1} (x) g1^{-1}) with g0 = g1 = 1
  auto [b0, c0] = moved(G, G.inv(G.mul(1, 1)), a0);
  auto [b1, c1] = moved(G, G.inv(1), a1);
  EXPECT_EQ(y, (CylChain{1, 1, CylComb(cyl_key({1, 1}, {b0, b1}), c0 * c1)}));
  EXPECT_NE(b1, a1);
}

TEST(Psi1, UnitSlotStaysNormalized) {
  Scenario sc = load_scenario("z4-torus2");
  CylChain y = psi1(sc.group, bar_of({AlgebraElem::one(), el(2, 1, 1)}));
  ASSERT_EQ(y.c.size(), 1u);
  const CylKey& k = y.c.terms().front().first;
  EXPECT_TRUE(k.unit_at(0));
  EXPECT_EQ(k.g[0], kGroupUnit);
  EXPECT_TRUE(psi1(sc.group, bar_of({el(2, 1, 1), AlgebraElem::one()})).is_zero());
}

TEST(EilenbergZilber, ShuffleOfOneOneHasTwoTerms) {
  Scenario sc = load_scenario("z2-torus2");
  CylChain x{1, 1, CylComb(cyl_key({1, 1}, {m2(1, 0), m2(0, 1)}), Scalar(1))};
  CylChain d = shuffle_nabla(x);
  EXPECT_EQ(d.p, 2);
  EXPECT_EQ(d.c.size(), 2u);
  EXPECT_EQ(ez(sc.group, d, 1, 1), x);
}

TEST(EilenbergZilber, KillsDegenerateChains) {
  Scenario sc = load_scenario("z4-torus2");
  Sampler s(33);
  CylChain x = degen_d(random_cyl(s, sc.group, 1, 1), 0);
  for (int p = 0; p <= 2; ++p) EXPECT_TRUE(ez(sc.group, x, p, 2 - p).is_zero());
}

TEST(EilenbergZilber, HomotopyVanishesInDegreeZero) {
  Scenario sc = load_scenario("z4-torus2");
  Sampler s(34);
  EXPECT_TRUE(ez_homotopy(sc.group, random_cyl(s, sc.group, 0, 0)).is_zero());
}

TEST(EilenbergZilber, PerturbedMapUnrolled) {
  Scenario sc = load_scenario("z2-torus2");
  const Group& G = sc.group;
  CylChain x{1, 1, CylComb(cyl_key({1, 1}, {m2(1, 0), m2(0, 1)}), Scalar(1))};
  x = x + CylChain{1, 1, CylComb(cyl_key({kGroupUnit, 1}, {m2(0, 0), m2(1, 1)}, 1), Scalar(2))};
  CylChain step = B_diag(G, ez_homotopy(G, x));
  EXPECT_FALSE(step.is_zero());
  TotChain expect = ez_total(G, x);
  for (const auto& [bd, c] : ez_total(G, step)) tot_add(expect, c);
  EXPECT_EQ(ez_pert(G, x, 3), expect);
  EXPECT_EQ(ez_pert(G, x, 1), ez_total(G, x));
}

TEST(EilenbergZilber, DegreeZeroHasOnlyPlainTerm) {
  Scenario sc = load_scenario("z2-torus2");
  Sampler s(35);
  CylChain x = random_cyl(s, sc.group, 0, 0);
  EXPECT_EQ(ez_pert(sc.group, x, 6), ez_total(sc.group, x));
}
