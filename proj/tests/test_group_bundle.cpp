#include <gtest/gtest.h>

#include "support.hpp"

#include "equichern/bundle.hpp"
#include "equichern/random.hpp"
#include "equichern/scenario.hpp"

using namespace equichern;

namespace {

Form e(int k1, int k2, unsigned mask = 0, Scalar c = Scalar(1)) { return form_term(c, make_mode({k1, k2}), mask); }

Form at_g(const Form& f, int g) {
  std::vector<Form::Term> t;
  for (auto [k, c] : f.terms()) {
    k.g = g;
    t.emplace_back(k, c);
  }
  return Form::from_terms(std::move(t));
}

Form signed_by_degree(int p, const Form& w) { return (p & 1) ? -w : w; }

}  // namespace

TEST(Group, HaarIntegration) {
  Scenario z2 = load_scenario("z2-torus2");
  Form c = e(0, 0, 0, Scalar(5));
  EXPECT_EQ(haar_integrate(z2.group, at_g(c, 0) + at_g(c, 1)), Scalar(2) * c);
  Group S = Group::circle(2, make_mode({1, 0}));
  EXPECT_TRUE(haar_integrate(S, at_g(c, 3)).is_zero());
  EXPECT_EQ(haar_integrate(S, c + at_g(c, 1)), c);
}

TEST(Group, UnimodularSubstitution) {
  Sampler s(1);
  for (const char* name : {"z4-torus2", "circle-torus2"}) {
    Scenario sc = load_scenario(name);
    for (int it = 0; it < 20; ++it) {
      Form f = s.element(sc.group, s.uniform(0, 2), {});
      EXPECT_EQ(haar_integrate(sc.group, invert_argument(sc.group, f)), haar_integrate(sc.group, f));
    }
  }
}

TEST(Group, ActionExamples) {
  Scenario z4 = load_scenario("z4-torus2");
  Form x = e(1, 0);
  EXPECT_EQ(act(z4.group, 0, x), x);
  EXPECT_EQ(act(z4.group, 1, x), e(0, -1));
  Group S = Group::circle(2, make_mode({1, 0}));
  EXPECT_EQ(act_circle(S, x), at_g(x, 1));
}

TEST(Group, ActionIsHomomorphism) {
  Sampler s(2);
  for (const char* name : {"z4-torus2", "z2-torus2", "z2-flip-torus2"}) {
    Scenario sc = load_scenario(name);
    const Group& G = sc.group;
    for (int it = 0; it < 10; ++it) {
      Form w = s.plain_form(2, s.uniform(0, 2), 1, 2, 3, G.conductor());
      for (int g = 0; g < G.order(); ++g)
        for (int h = 0; h < G.order(); ++h) EXPECT_EQ(act(G, G.mul(g, h), w), act(G, h, act(G, g, w)));
    }
  }
}

TEST(Group, IntegrationIsInvariant) {
  Sampler s(3);
  Scenario sc = load_scenario("z4-torus2");
  for (int it = 0; it < 20; ++it) {
    Form w = s.plain_form(2, 2, 1, 2, 3, 4);
    for (int g = 0; g < 4; ++g) EXPECT_EQ(integrate_top(act(sc.group, g, w), 2), integrate_top(w, 2));
  }
}

TEST(Group, LoadRejectsNonAssociativeTable) {
  const char* text = R"({"dim": 0, "group": {"type": "table", "elements": ["a", "b", "c"],
    "table": [[0, 1, 2], [1, 0, 0], [2, 2, 0]], "actions": [{"matrix": []}, {"matrix": []}, {"matrix": []}]}})";
  try {
    scenario_from_text(text);
    FAIL() << "expected a validation error";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "not associative");
  }
}

TEST(Convolution, UnitAndZ2Example) {
  Scenario sc = load_scenario("z2-flip-torus2");
  const Group& G = sc.group;
  AlgebraElem a = AlgebraElem::basis(1, make_mode({1, 0})), b = AlgebraElem::basis(1, make_mode({0, 1}));
  EXPECT_EQ(convolve(G, a, AlgebraElem::one()), a);
  EXPECT_EQ(convolve(G, AlgebraElem::one(), a), a);
  // two-term Haar sum: only h = s contributes, value f(x) h(x s) at e
  AlgebraElem ab = convolve(G, a, b);
  Form expect = at_g(wedge(e(1, 0), pullback(G.action(1), e(0, 1))), 0);
  EXPECT_EQ(ab.f, expect);
  EXPECT_EQ(ab.f, at_g(e(1, -1), 0));
}

TEST(Convolution, CircleModeBookkeeping) {
  // brute force: (f1*f2)(g) = int_h f1(h) f2(x + h v, g - h) dh with e^{tau m g} modes
  Group S = Group::circle(2, make_mode({1, 2}));
  for (int m1 = -2; m1 <= 2; ++m1)
    for (int m2 = -2; m2 <= 2; ++m2)
      for (int k1 = -1; k1 <= 1; ++k1)
        for (int k2 = -1; k2 <= 1; ++k2) {
          AlgebraElem a = AlgebraElem::basis(m1, make_mode({k1, 0})),
                      b = AlgebraElem::basis(m2, make_mode({k2, k1}));
          // integrand in h: e^{tau h (m1 + k.v - m2)}, survives iff that mode vanishes
          int h_mode = m1 + (k2 * 1 + k1 * 2) - m2;
          Form r = convolve(S, a, b).f;
          if (h_mode != 0) {
            EXPECT_TRUE(r.is_zero());
          } else {
            Key k;
            k.g = m2;
            k.k = make_mode({k1 + k2, k1});
            EXPECT_EQ(r, Form(k, Scalar(1)));
          }
        }
}

TEST(Convolution, AssociativeRandomized) {
  Sampler s(4);
  for (const char* name : {"z4-torus2", "z2-torus2", "circle-torus2"}) {
    Scenario sc = load_scenario(name);
    for (int it = 0; it < 20; ++it) {
      auto rnd = [&] {
        AlgebraElem x{Scalar(s.uniform(0, 1)), s.element(sc.group, 0, {.conductor = sc.conductor})};
        return x;
      };
      AlgebraElem a = rnd(), b = rnd(), c = rnd();
      EXPECT_EQ(convolve(sc.group, convolve(sc.group, a, b), c), convolve(sc.group, a, convolve(sc.group, b, c)));
    }
  }
}

// ---- bundle data ----

TEST(Bundle, CurvatureExamples) {
  EXPECT_TRUE(curvature({}).is_zero());
  EXPECT_TRUE(curvature({e(0, 0, 1, Scalar(Rational(3, 2)))}).is_zero());
  EXPECT_EQ(curvature({e(0, 1, 1)}), e(0, 1, 3, -Scalar::tau()));
}

TEST(Bundle, CocycleValidation) {
  Scenario sc = load_scenario("z4-torus2-twist");
  const Bundle& E = sc.bundle;
  // U(g^2) = e_{(1,0)} g^*e_{(1,0)} = e_{(1,-1)}
  EXPECT_EQ(E.U(2), e(1, -1));
  std::vector<Form> bad(4, e(0, 0));
  bad[1] = e(1, 0);
  EXPECT_THROW(Bundle::finite(sc.group, bad, 1), std::invalid_argument);
}

TEST(Bundle, DeltaExamples) {
  Scenario sc = load_scenario("z4-torus2");
  for (int g = 0; g < 4; ++g) {
    // constant character cocycle: delta(g) = A - g^*A
    Form expect = sc.connection.A - act(sc.group, g, sc.connection.A);
    EXPECT_EQ(delta_of_g(sc.bundle, sc.connection, g), expect);
  }
  EXPECT_TRUE(delta_of_g(sc.bundle, sc.connection, 0).is_zero());
  Connection avg = average_connection(sc.bundle, sc.connection);
  for (int g = 0; g < 4; ++g) EXPECT_TRUE(delta_of_g(sc.bundle, avg, g).is_zero());
  Connection again = average_connection(sc.bundle, avg);
  EXPECT_EQ(again.A, avg.A);
  EXPECT_TRUE(average_connection(sc.bundle, {}).A.is_zero());
  Connection a{e(1, 0, 1)};
  Connection b = average_connection(sc.bundle, a);
  for (int g = 0; g < 4; ++g) EXPECT_TRUE(delta_of_g(sc.bundle, b, g).is_zero());
}

TEST(Bundle, MomentExamples) {
  Scenario z4 = load_scenario("z4-torus2");
  EXPECT_TRUE(moment(z4.bundle, z4.connection).is_zero());
  Scenario c = load_scenario("circle-torus2");
  EXPECT_TRUE(moment(c.bundle, {}).is_zero());
  Form mu = moment(c.bundle, {e(0, 1, 1)});
  Key k;
  k.u = 1;
  k.k = make_mode({0, 1});
  EXPECT_EQ(mu, Form(k, Scalar(1)));
}

TEST(Bundle, CircleAveragingIsInvariant) {
  for (const char* name : {"circle-torus2", "circle-torus2-rank2"}) {
    Scenario sc = load_scenario(name);
    Connection avg = average_connection(sc.bundle, sc.connection);
    EXPECT_TRUE(delta_circle(sc.bundle, avg).is_zero()) << name;
  }
}

// ---- bundle claims on finite groups ----

class FiniteClaims : public ::testing::TestWithParam<const char*> {};

TEST_P(FiniteClaims, Claims) {
  Scenario sc = load_scenario(GetParam());
  const Bundle& E = sc.bundle;
  const Connection& c = sc.connection;
  const Group& G = sc.group;
  const int r = E.rank();
  Sampler s(sc.seed);
  Form F = curvature(c);
  for (int it = 0; it < 20; ++it) {
    int p = s.uniform(0, 2);
    Form w = s.plain_form(2, p, r, 1, 3, sc.conductor);
    Form eta = s.plain_form(2, s.uniform(0, 2), r, 1, 3, sc.conductor);
    int g = s.uniform(0, G.order() - 1), h = s.uniform(0, G.order() - 1);
    Form dg = delta_of_g(E, c, g), dh = delta_of_g(E, c, h);
    Form gw = E.act(g, w);
    // C1: the fundamental vector field vanishes for finite groups
    EXPECT_TRUE(E.contract_X(gw).is_zero());
    // C2
    EXPECT_EQ(delta_of_g(E, c, G.mul(h, g)), dh + E.act(h, dg));
    // C3
    EXPECT_EQ(d_nabla_end(c, gw),
              E.act(g, d_nabla_end(c, w)) + wedge(dg, gw) - signed_by_degree(p, wedge(gw, dg)));
    // C4
    EXPECT_EQ(d_nabla_end(c, d_nabla_end(c, w)), wedge(F, w) - wedge(w, F));
    // C5
    EXPECT_EQ(E.act(g, F), F - d_nabla_end(c, dg) + wedge(dg, dg));
    // C10
    EXPECT_EQ(d_nabla_end(c, wedge(w, eta)),
              wedge(d_nabla_end(c, w), eta) + signed_by_degree(p, wedge(w, d_nabla_end(c, eta))));
    // C6, C7, C11: every g-dependent Lie algebra term is zero
    EXPECT_TRUE(moment(E, c).is_zero());
    EXPECT_TRUE(E.lie_derivative(w).is_zero());
    // group action is an algebra automorphism
    EXPECT_EQ(E.act(g, wedge(w, eta)), wedge(gw, E.act(g, eta)));
    EXPECT_EQ(E.act(G.mul(h, g), w), E.act(h, E.act(g, w)));
  }
}

INSTANTIATE_TEST_SUITE_P(Presets, FiniteClaims,
                         ::testing::Values("z4-torus2", "z4-torus2-twist", "z4-torus2-rank2", "z2-torus2",
                                           "z2-flip-torus2", "trivial-torus2"));

// ---- bundle claims on the circle (g symbolic) ----

class CircleClaims : public ::testing::TestWithParam<const char*> {};

TEST_P(CircleClaims, Claims) {
  Scenario sc = load_scenario(GetParam());
  const Bundle& E = sc.bundle;
  const Connection& c = sc.connection;
  const int r = E.rank();
  Sampler s(sc.seed);
  Form F = curvature(c), mu = moment(E, c), delta = delta_circle(E, c);
  // derivative of delta(tX) at t = 0: each g-mode m contributes tau m u
  Form ddelta;
  for (const auto& [k, v] : delta.terms()) {
    Key nk = k;
    nk.g = 0;
    nk.u = static_cast<std::int16_t>(k.u + 1);
    ddelta += Form(nk, Scalar::tau() * Scalar(k.g) * v);
  }
  // C11
  EXPECT_EQ(ddelta, -d_nabla_end(c, mu) - E.contract_X(F));
  // C7 (Ad trivial)
  EXPECT_EQ(E.act_circle(mu), mu - E.contract_X(delta));
  for (int it = 0; it < 20; ++it) {
    int p = s.uniform(0, 2);
    Form w = s.plain_form(2, p, r, 1, 3);
    // C1
    EXPECT_EQ(E.contract_X(E.act_circle(w)), E.act_circle(E.contract_X(w)));
    // C6
    Form anti = d_nabla_end(c, E.contract_X(w)) + E.contract_X(d_nabla_end(c, w));
    EXPECT_EQ(anti - E.lie_derivative(w), wedge(mu, w) - wedge(w, mu));
    // C4 and C10 hold verbatim as for finite groups
    EXPECT_EQ(d_nabla_end(c, d_nabla_end(c, w)), wedge(F, w) - wedge(w, F));
  }
}

INSTANTIATE_TEST_SUITE_P(Presets, CircleClaims, ::testing::Values("circle-torus2", "circle-torus2-rank2"));
