#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "equichern/bundle.hpp"
#include "equichern/cyclic.hpp"
#include "equichern/jlo.hpp"

namespace equichern {

using GroupTuple = std::array<std::int16_t, kMaxSlots>;

/// Basis element of the Getzler models: group slots g_1..g_q (delta functions
/// for a finite group, Fourier modes on the circle) times u^u e_k dx_mask.
struct GetzKey {
  GroupTuple g{};
  std::int16_t u = 0;
  std::uint8_t mask = 0;
  Mode k{};

  auto operator<=>(const GetzKey&) const = default;
};

using GetzComb = LinComb<GetzKey>;

/// Element of bidegree (p, q): p is the form degree, q the number of group slots.
template <class Tag>
struct GetzElem {
  int p = 0;
  int q = 0;
  GetzComb c;

  bool is_zero() const { return c.is_zero(); }
  friend GetzElem operator+(const GetzElem& x, const GetzElem& y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    if (x.p != y.p || x.q != y.q) throw std::invalid_argument("bidegree mismatch");
    return {x.p, x.q, x.c + y.c};
  }
  friend GetzElem operator-(const GetzElem& x, const GetzElem& y) { return x + (-1) * y; }
  friend GetzElem operator*(const Scalar& s, const GetzElem& x) { return {x.p, x.q, s * x.c}; }
  friend bool operator==(const GetzElem& x, const GetzElem& y) {
    if (x.is_zero() && y.is_zero()) return true;
    return x.p == y.p && x.q == y.q && x.c == y.c;
  }

  /// Value at one group tuple as a scalar form.
  Form at(const std::vector<int>& g) const {
    std::vector<Form::Term> out;
    for (const auto& [k, v] : c.terms()) {
      bool hit = true;
      for (int i = 0; i < q && hit; ++i) hit = k.g[i] == g[i];
      if (!hit) continue;
      Key f;
      f.u = k.u;
      f.mask = k.mask;
      f.k = k.k;
      out.emplace_back(f, v);
    }
    return Form::from_terms(std::move(out));
  }
};

struct ChainTag {};
struct CochainTag {};
using GetzChain = GetzElem<ChainTag>;
using GetzCochain = GetzElem<CochainTag>;

namespace detail {

inline Form getz_form(const GetzKey& k, const Scalar& c) {
  Key f;
  f.u = k.u;
  f.mask = k.mask;
  f.k = k.k;
  return Form(f, c);
}

inline void emit(std::vector<GetzComb::Term>& out, const GroupTuple& g, const Form& w, const Scalar& s = Scalar(1)) {
  for (const auto& [fk, c] : w.terms()) {
    if (fk.row != 0 || fk.col != 0) throw std::invalid_argument("Getzler values must be scalar forms");
    GetzKey k;
    k.g = g;
    k.u = fk.u;
    k.mask = fk.mask;
    k.k = fk.k;
    out.emplace_back(k, s * c);
  }
}

/// Applies fn(tuple, form, out) to every basis term.
template <class E, class Fn>
E map_terms(const E& x, int p2, int q2, Fn fn) {
  std::vector<GetzComb::Term> out;
  for (const auto& [k, c] : x.c.terms()) fn(k.g, getz_form(k, c), out);
  return {p2, q2, GetzComb::from_terms(std::move(out))};
}

inline GroupTuple erase_slot(GroupTuple g, int i, int q) {
  for (int j = i; j + 1 < q; ++j) g[j] = g[j + 1];
  if (q > 0) g[q - 1] = 0;
  return g;
}

inline GroupTuple insert_slot(GroupTuple g, int i, int q, int value) {
  if (q + 1 > kMaxSlots) throw std::length_error("too many group slots");
  for (int j = q; j > i; --j) g[j] = g[j - 1];
  g[i] = static_cast<std::int16_t>(value);
  return g;
}

inline Form raise_u(const Form& w, const Scalar& s) {
  std::vector<Form::Term> out;
  for (const auto& [k, c] : w.terms()) {
    Key nk = k;
    nk.u = static_cast<std::int16_t>(k.u + 1);
    out.emplace_back(nk, s * c);
  }
  return Form::from_terms(std::move(out));
}

/// int over 0 <= t_1 <= .. <= t_m <= 1 of t_1^{e_1} .. t_m^{e_m}.
inline Rational ordered_simplex_integral(const std::vector<int>& e) {
  Rational r(1);
  int acc = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    acc += e[i] + 1;
    r = r / Rational(acc);
  }
  return r;
}

/// Taylor coefficients of e^{-tau c u} up to u^J.
inline std::vector<Scalar> exp_jet(int c, int J) {
  std::vector<Scalar> r;
  Scalar term(1);
  for (int j = 0; j <= J; ++j) {
    r.push_back(term);
    term = term * Scalar::tau() * Scalar(Rational(-c, j + 1));
  }
  return r;
}

}  // namespace detail

template <class E>
E truncate_u(const E& x, int J) {
  return {x.p, x.q, x.c.filtered([J](const GetzKey& k) { return k.u <= J; })};
}

/// Getzler chains are taken modulo chains supported where some g_i = e.
inline GetzChain getz_normalize(const Group& G, const GetzChain& x) {
  if (!G.is_finite()) return x;
  return {x.p, x.q, x.c.filtered([&](const GetzKey& k) {
            for (int i = 0; i < x.q; ++i)
              if (k.g[i] == 0) return false;
            return true;
          })};
}

/// Reduced cochains vanish whenever some g_i = e.
inline bool is_reduced(const Group& G, const GetzCochain& a) {
  if (!G.is_finite()) return false;
  for (const auto& [k, c] : a.c.terms())
    for (int i = 0; i < a.q; ++i)
      if (k.g[i] == 0) return false;
  return true;
}

// ---- chain differentials ----

/// b^h = iota_X; zero for finite groups.
inline GetzChain chain_b_h(const Group& G, const GetzChain& x, int J = 0) {
  if (G.is_finite()) return {x.p - 1, x.q, {}};
  const TangentVector v = G.velocity();
  return truncate_u(detail::map_terms(x, x.p - 1, x.q,
                                      [&](const GroupTuple& g, const Form& w, auto& out) {
                                        detail::emit(out, g, detail::raise_u(contract(v, w), Scalar(1)));
                                      }),
                    J);
}

/// B^h = int_0^1 e^{-tX} . d dt; plain d for finite groups.
inline GetzChain chain_B_h(const Group& G, const GetzChain& x, int J = 0) {
  if (G.is_finite())
    return detail::map_terms(x, x.p + 1, x.q,
                             [](const GroupTuple& g, const Form& w, auto& out) { detail::emit(out, g, ext_d(w)); });
  const Mode& v = G.direction();
  std::vector<GetzComb::Term> out;
  for (const auto& [k, c] : x.c.terms()) {
    Form dw = ext_d(detail::getz_form(k, c));
    for (const auto& [fk, fc] : dw.terms()) {
      std::vector<Scalar> jet = detail::exp_jet(dot(fk.k, v), J);
      for (int j = 0; fk.u + j <= J; ++j) {
        Key nk = fk;
        nk.u = static_cast<std::int16_t>(fk.u + j);
        detail::emit(out, k.g, Form(nk, fc), jet[j] * Scalar(Rational(1, j + 1)));
      }
    }
  }
  return {x.p + 1, x.q, GetzComb::from_terms(std::move(out))};
}

/// b^v F(g_1..g_{q-1}) from the three kinds of faces, pushed forward from the
/// basis: drop h_1, merge h_i h_{i+1}, drop h_q acting on the payload.
inline GetzChain chain_b_v(const Group& G, const GetzChain& x) {
  detail::check_finite(G);
  const int p = x.p, q = x.q;
  if (q == 0) return {p, -1, {}};
  GetzChain r = detail::map_terms(x, p, q - 1, [&](const GroupTuple& h, const Form& w, auto& out) {
    detail::emit(out, detail::erase_slot(h, 0, q), w, Scalar(p & 1 ? -1 : 1));
    for (int i = 1; i < q; ++i) {
      GroupTuple m = h;
      m[i - 1] = static_cast<std::int16_t>(G.mul(h[i - 1], h[i]));
      detail::emit(out, detail::erase_slot(m, i, q), w, Scalar((i + p) & 1 ? -1 : 1));
    }
    detail::emit(out, detail::erase_slot(h, q - 1, q), act(G, h[q - 1], w), Scalar((p + q) & 1 ? -1 : 1));
  });
  return getz_normalize(G, r);
}

/// B^v F(g_1..g_{q+1}) = sum_i (-1)^{iq+p} [g_1..g_{q+1} = e]
/// (g_{i+1}..g_{q+1})^{-1} . F(g_{i+2}..g_{q+1}, g_1..g_i).
inline GetzChain chain_B_v(const Group& G, const GetzChain& x) {
  if (!G.is_finite()) throw std::invalid_argument("B^v on the circle has delta-singular output");
  const int p = x.p, q = x.q;
  GetzChain r = detail::map_terms(x, p, q + 1, [&](const GroupTuple& h, const Form& w, auto& out) {
    int all = 0;
    for (int j = 0; j < q; ++j) all = G.mul(all, h[j]);
    const int g_mid = G.inv(all);
    for (int i = 0; i <= q; ++i) {
      GroupTuple g{};
      for (int j = 0; j < i; ++j) g[j] = h[q - i + j];
      g[i] = static_cast<std::int16_t>(g_mid);
      for (int j = 0; j < q - i; ++j) g[i + 1 + j] = h[j];
      int tail = g_mid;
      for (int j = 0; j < q - i; ++j) tail = G.mul(tail, h[j]);
      detail::emit(out, g, act(G, G.inv(tail), w), Scalar((i * q + p) & 1 ? -1 : 1));
    }
  });
  return getz_normalize(G, r);
}

// ---- HKR and Psi_3 ----

/// HKR_X(a_0 .. a_p) = int_{0 <= t_1 <= .. <= t_p <= 1} a_0 d(e^{-t_1 X} a_1) .. d(e^{-t_p X} a_p),
/// expanded to u-order J (X = u X_0 on the circle, X = 0 for finite groups).
inline Form hkr(const Group& G, const CylKey& a, int p, int J = 0) {
  for (int i = 1; i <= p; ++i)
    if (a.unit_at(i)) return {};
  Form w = form_term(Scalar(1), a.unit_at(0) ? Mode{} : a.a[0]);
  for (int i = 1; i <= p; ++i) w = wedge(w, ext_d(form_term(Scalar(1), a.a[i])));
  if (w.is_zero()) return {};
  if (G.is_finite() || J == 0) return Scalar(Rational(1) / factorial(p)) * w;
  const Mode& v = G.direction();
  std::vector<std::vector<Scalar>> jets;
  for (int i = 1; i <= p; ++i) jets.push_back(detail::exp_jet(dot(a.a[i], v), J));
  Form r;
  std::vector<int> e(p, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == p) {
      Scalar c(detail::ordered_simplex_integral(e));
      int total = 0;
      for (int j = 0; j < p; ++j) {
        c = c * jets[j][e[j]];
        total += e[j];
      }
      std::vector<Form::Term> shifted;
      for (const auto& [k, v2] : w.terms()) {
        Key nk = k;
        nk.u = static_cast<std::int16_t>(total);
        shifted.emplace_back(nk, c * v2);
      }
      r += Form::from_terms(std::move(shifted));
      return;
    }
    for (int j = 0; j <= left; ++j) {
      e[i] = j;
      rec(i + 1, left - j);
    }
    e[i] = 0;
  };
  rec(0, J);
  return r;
}

/// Psi_3 at X = 0: the slot g_0 must equal (g_1..g_q)^{-1}; the payload goes through HKR.
inline GetzChain psi3(const Group& G, const CylChain& x) {
  detail::check_finite(G);
  std::vector<GetzComb::Term> out;
  for (const auto& [k, c] : x.c.terms()) {
    if (detail::gval(detail::group_product(G, k, x.q)) != 0) continue;
    GroupTuple g{};
    for (int i = 1; i <= x.q; ++i) g[i - 1] = static_cast<std::int16_t>(detail::gval(k.g[i]));
    detail::emit(out, g, hkr(G, k, x.p), c);
  }
  return getz_normalize(G, {x.p, x.q, GetzComb::from_terms(std::move(out))});
}

// ---- twisted Hochschild chains of C(T^n) in circle jet mode ----

struct JetKey {
  CylKey a;
  std::int16_t u = 0;

  auto operator<=>(const JetKey&) const = default;
};

/// Chain a_0 (x) .. (x) a_p of the torus functions with coefficients in u-jets.
struct JetChain {
  int p = 0;
  LinComb<JetKey> c;

  bool is_zero() const { return c.is_zero(); }
  friend JetChain operator+(const JetChain& x, const JetChain& y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    if (x.p != y.p) throw std::invalid_argument("degree mismatch");
    return {x.p, x.c + y.c};
  }
  friend JetChain operator*(const Scalar& s, const JetChain& x) { return {x.p, s * x.c}; }
};

namespace detail {

inline JetChain jet_normalize(const JetChain& x) {
  return {x.p, x.c.filtered([](const JetKey& k) { return (k.a.units >> 1) == 0; })};
}

/// Moves a_p to the front as e^{-X} . a_p.
inline JetChain jet_cyclic(const Group& G, const JetChain& x, int J) {
  const int p = x.p;
  std::vector<LinComb<JetKey>::Term> out;
  for (const auto& [k, c] : x.c.terms()) {
    JetKey nk = k;
    const bool unit = k.a.unit_at(p);
    const Mode last = k.a.a[p];
    for (int j = p; j > 0; --j) nk.a.a[j] = nk.a.a[j - 1];
    nk.a.a[0] = last;
    std::uint16_t mask = static_cast<std::uint16_t>((1u << (p + 1)) - 1);
    nk.a.units = static_cast<std::uint16_t>(((k.a.units << 1) & mask) | (unit ? 1u : 0u));
    std::vector<Scalar> jet = exp_jet(unit ? 0 : dot(last, G.direction()), J);
    for (int j = 0; k.u + j <= J; ++j) {
      JetKey t = nk;
      t.u = static_cast<std::int16_t>(k.u + j);
      out.emplace_back(t, jet[j] * c);
    }
  }
  return {p, LinComb<JetKey>::from_terms(std::move(out))};
}

}  // namespace detail

/// b_X: the last face is (e^{-X} . a_p) a_0.
inline JetChain jet_b(const Group& G, const JetChain& x, int J) {
  const int p = x.p;
  if (p == 0) return {-1, {}};
  JetChain rot = detail::jet_cyclic(G, x, J);
  std::vector<LinComb<JetKey>::Term> out;
  auto face = [&](const LinComb<JetKey>& src, int i, const Scalar& s) {
    for (const auto& [k, c] : src.terms()) {
      JetKey nk = k;
      detail::merge_payload(nk.a, i, i + 1);
      detail::erase_payload(nk.a, i + 1, p);
      out.emplace_back(nk, s * c);
    }
  };
  for (int i = 0; i < p; ++i) face(x.c, i, Scalar(i & 1 ? -1 : 1));
  // commutativity: d_p is the merge of the first two slots of t_X
  for (const auto& [k, c] : rot.c.terms()) {
    JetKey nk = k;
    detail::merge_payload(nk.a, 0, 1);
    detail::erase_payload(nk.a, 1, p);
    out.emplace_back(nk, Scalar(p & 1 ? -1 : 1) * c);
  }
  return detail::jet_normalize({p - 1, LinComb<JetKey>::from_terms(std::move(out))});
}

/// B_X = c sum_i (-1)^{ip} t_X^i on the normalized chains.
inline JetChain jet_B(const Group& G, const JetChain& x, int J) {
  JetChain t = detail::jet_normalize(x);
  JetChain r{x.p + 1, {}};
  for (int i = 0; i <= x.p; ++i) {
    std::vector<LinComb<JetKey>::Term> out;
    for (const auto& [k, c] : t.c.terms()) {
      JetKey nk = k;
      detail::insert_payload_unit(nk.a, 0, x.p);
      out.emplace_back(nk, c);
    }
    r = r + Scalar((i * x.p) & 1 ? -1 : 1) * JetChain{x.p + 1, LinComb<JetKey>::from_terms(std::move(out))};
    t = detail::jet_cyclic(G, t, J);
  }
  return detail::jet_normalize(r);
}

/// HKR_X on jet chains: a (p, 0) Getzler chain.
inline GetzChain hkr_jet(const Group& G, const JetChain& x, int J) {
  std::vector<GetzComb::Term> out;
  for (const auto& [k, c] : x.c.terms()) {
    const Form w = hkr(G, k.a, x.p, J - k.u);
    for (const auto& [fk, fc] : w.terms()) {
      GetzKey gk;
      gk.u = static_cast<std::int16_t>(fk.u + k.u);
      gk.mask = fk.mask;
      gk.k = fk.k;
      out.emplace_back(gk, c * fc);
    }
  }
  return {x.p, 0, GetzComb::from_terms(std::move(out))};
}

// ---- cochain differentials ----

/// d = (-1)^q d_dR.
inline GetzCochain cochain_d(const GetzCochain& a) {
  const Scalar s(a.q & 1 ? -1 : 1);
  return detail::map_terms(a, a.p + 1, a.q,
                           [&](const GroupTuple& g, const Form& w, auto& out) { detail::emit(out, g, ext_d(w), s); });
}

/// iota = (-1)^{q+1} iota_X, contracting with the generator of e^{-tX}; zero for finite groups.
inline GetzCochain cochain_iota(const Group& G, const GetzCochain& a, int J = 0) {
  if (G.is_finite()) return {a.p - 1, a.q, {}};
  const TangentVector v = G.velocity();
  const Scalar s(a.q & 1 ? 1 : -1);
  return truncate_u(detail::map_terms(a, a.p - 1, a.q,
                                      [&](const GroupTuple& g, const Form& w, auto& out) {
                                        detail::emit(out, g, detail::raise_u(contract(v, w), s));
                                      }),
                    J);
}

/// iota-bar F(g_1..g_{q-1}) = sum_i (-1)^i d/dt F(.., g_i, e^{tX}, g_{i+1}, ..) at t = 0;
/// zero for finite groups. On the circle slot i carries the mode m and contributes tau m u.
inline GetzCochain cochain_iota_bar(const Group& G, const GetzCochain& a, int J = 0) {
  if (G.is_finite() || a.q == 0) return {a.p, a.q - 1, {}};
  const int q = a.q;
  return truncate_u(detail::map_terms(a, a.p, q - 1,
                                      [&](const GroupTuple& g, const Form& w, auto& out) {
                                        for (int i = 0; i < q; ++i) {
                                          if (g[i] == 0) continue;
                                          Scalar s = Scalar::tau() * Scalar(i & 1 ? -g[i] : g[i]);
                                          detail::emit(out, detail::erase_slot(g, i, q), detail::raise_u(w, s));
                                        }
                                      }),
                    J);
}

/// d-bar F(g_1..g_{q+1}) = F(g_2..) + sum_i (-1)^i F(.., g_i g_{i+1}, ..)
/// + (-1)^{q+1} g_{q+1}^{-1} . F(Ad X, g_1..g_q).
inline GetzCochain cochain_dbar(const Group& G, const GetzCochain& a) {
  const int p = a.p, q = a.q;
  if (q + 1 > kMaxSlots) throw std::length_error("too many group slots");
  const Scalar last_sign(q & 1 ? 1 : -1);
  if (G.is_finite()) {
    return detail::map_terms(a, p, q + 1, [&](const GroupTuple& h, const Form& w, auto& out) {
      for (int x = 0; x < G.order(); ++x) {
        detail::emit(out, detail::insert_slot(h, 0, q, x), w);
        for (int i = 1; i <= q; ++i) {
          GroupTuple m = detail::insert_slot(h, i - 1, q, x);
          m[i] = static_cast<std::int16_t>(G.mul(G.inv(x), h[i - 1]));
          detail::emit(out, m, w, Scalar(i & 1 ? -1 : 1));
        }
        detail::emit(out, detail::insert_slot(h, q, q, x), act(G, G.inv(x), w), last_sign);
      }
    });
  }
  const Mode& v = G.direction();
  return detail::map_terms(a, p, q + 1, [&](const GroupTuple& h, const Form& w, auto& out) {
    detail::emit(out, detail::insert_slot(h, 0, q, 0), w);
    for (int i = 1; i <= q; ++i)
      detail::emit(out, detail::insert_slot(h, i, q, h[i - 1]), w, Scalar(i & 1 ? -1 : 1));
    for (const auto& [k, c] : w.terms())
      detail::emit(out, detail::insert_slot(h, q, q, -dot(k.k, v)), Form(k, c), last_sign);
  });
}

// ---- pairing ----

inline int pairing_sign(int n, int p, int q) { return ((p * (n + q) + p * (p + 1) / 2) & 1) ? -1 : 1; }

/// <alpha_{n-p,q}, beta_{p,q}> = sign sum_{g in G^q} int alpha(0, g) ^ beta(0, g).
/// On the circle the group integral pairs opposite modes.
inline Scalar pair(const Group& G, const GetzCochain& alpha, const GetzChain& beta, int n) {
  if (alpha.p + beta.p != n || alpha.q != beta.q) throw std::invalid_argument("pairing bidegree mismatch");
  const int q = beta.q;
  std::map<GroupTuple, Form> av;
  for (const auto& [k, c] : alpha.c.terms())
    if (k.u == 0) av[k.g] += detail::getz_form(k, c);
  Scalar total;
  for (const auto& [k, c] : beta.c.terms()) {
    if (k.u != 0) continue;
    GroupTuple g = k.g;
    if (!G.is_finite())
      for (int i = 0; i < q; ++i) g[i] = static_cast<std::int16_t>(-g[i]);
    auto it = av.find(g);
    if (it == av.end()) continue;
    total += integrate_top(wedge(it->second, detail::getz_form(k, c)), n);
  }
  return Scalar(pairing_sign(n, beta.p, q)) * total;
}

/// A family {alpha_{p,q}} in CP^k: p + q = n + k mod 2.
struct CPFamily {
  int n = 0;
  int k = 0;
  std::map<std::pair<int, int>, GetzCochain> parts;

  void add(const GetzCochain& a) {
    if (((a.p + a.q - n - k) & 1) != 0) throw std::invalid_argument("component violates the CP parity");
    auto key = std::make_pair(a.p, a.q);
    auto it = parts.find(key);
    if (it == parts.end()) {
      parts.emplace(key, a);
    } else {
      it->second = it->second + a;
    }
  }
  int max_q() const {
    int m = 0;
    for (const auto& [bd, a] : parts) m = std::max(m, bd.second);
    return m;
  }
};

/// Phi(alpha)(beta) = sum over components of <alpha_{n-p,q}, beta_{p,q}>.
inline Scalar phi(const Group& G, const CPFamily& alpha, const std::map<std::pair<int, int>, GetzChain>& beta) {
  Scalar total;
  for (const auto& [bd, b] : beta) {
    auto it = alpha.parts.find({alpha.n - bd.first, bd.second});
    if (it != alpha.parts.end()) total += pair(G, it->second, b, alpha.n);
  }
  return total;
}

/// c(alpha)(a_0 .. a_k): Phi(alpha) of Psi_3 EZ^pert Psi_1 of the tuple.
inline Scalar c_map(const Group& G, const CPFamily& alpha, const std::vector<AlgebraElem>& tuple) {
  detail::check_finite(G);
  CylChain x = psi1(G, bar_basis(tuple));
  std::map<std::pair<int, int>, GetzChain> beta;
  for (const auto& [bd, comp] : ez_pert(G, x, alpha.n + alpha.max_q())) {
    if (bd.first > alpha.n) continue;
    GetzChain b = psi3(G, comp);
    if (!b.is_zero()) beta.emplace(bd, std::move(b));
  }
  return phi(G, alpha, beta);
}

inline Cochain c_map_cochain(const Group& G, const CPFamily& alpha, int k) {
  return Cochain(
      k + 1,
      [G, alpha](const std::vector<Key>& s) {
        std::vector<AlgebraElem> a;
        for (const auto& x : s) a.push_back(slot_elem(x));
        return c_map(G, alpha, a);
      },
      true);
}

// ---- cyclic normalization ----

struct NormalizationCheck {
  bool ok = true;
  std::vector<int> witness;
};

/// alpha(0, g_1..g_q) = 0 whenever g_1..g_q = e, checked over all tuples for
/// q >= 1. Degree (p, 0) cochains never meet B^v images and pass vacuously.
inline NormalizationCheck is_cyclically_normalized(const Group& G, const GetzCochain& a) {
  detail::check_finite(G);
  NormalizationCheck r;
  if (a.q == 0) return r;
  std::map<GroupTuple, bool> nonzero;
  for (const auto& [k, c] : a.c.terms())
    if (k.u == 0) nonzero[k.g] = true;
  for (const auto& [g, nz] : nonzero) {
    int prod = 0;
    for (int i = 0; i < a.q; ++i) prod = G.mul(prod, g[i]);
    if (prod != 0) continue;
    if (!a.at(std::vector<int>(g.begin(), g.begin() + a.q)).filtered([](const Key& k) { return k.u == 0; }).is_zero()) {
      r.ok = false;
      r.witness.assign(g.begin(), g.begin() + a.q);
      return r;
    }
  }
  return r;
}

// ---- Chern-Simons forms and Getzler's Chern character ----

namespace detail {

/// dt_I t^e (x) w on Delta^q x M, with the dt's on the left.
struct SimplexKey {
  unsigned dt = 0;
  std::array<std::int8_t, kMaxSlots> t{};
  auto operator<=>(const SimplexKey&) const = default;
};
using SimplexForm = std::map<SimplexKey, Form>;

inline void sf_add(SimplexForm& a, const SimplexKey& k, const Form& w) {
  if (w.is_zero()) return;
  Form& slot = a[k];
  slot += w;
  if (slot.is_zero()) a.erase(k);
}

inline SimplexForm sf_mul(const SimplexForm& a, const SimplexForm& b) {
  SimplexForm r;
  for (const auto& [ka, wa] : a) {
    for (const auto& [kb, wb] : b) {
      int s = wedge_sign(ka.dt, kb.dt);
      if (s == 0) continue;
      SimplexKey k;
      k.dt = ka.dt | kb.dt;
      for (int i = 0; i < kMaxSlots; ++i) k.t[i] = static_cast<std::int8_t>(ka.t[i] + kb.t[i]);
      Form left = (std::popcount(kb.dt) & 1) ? parity(wa) : wa;
      Form w = wedge(left, wb);
      sf_add(r, k, s > 0 ? w : -1 * w);
    }
  }
  return r;
}

}  // namespace detail

/// cs(nabla_0..nabla_q) = int_{Delta^q} Tr exp(sum_i dt_i (nabla_{i-1} - nabla_i) + F(t))
/// along nabla(t) = nabla_q + sum_i t_i (nabla_{i-1} - nabla_i), 0 <= t_1 <= .. <= t_q <= 1.
inline Form chern_simons(const Bundle& E, const std::vector<Connection>& nablas) {
  if (nablas.empty()) throw std::invalid_argument("Chern-Simons form needs at least one connection");
  const int q = static_cast<int>(nablas.size()) - 1;
  const int r = E.rank();
  for (const auto& c : nablas)
    for (const auto& [k, v] : c.A.terms())
      if (k.row >= r || k.col >= r) throw std::invalid_argument("connection does not live on the bundle");
  if (q >= kMaxSlots) throw std::length_error("too many connections");
  using detail::SimplexForm;
  using detail::SimplexKey;
  SimplexForm At, theta;
  detail::sf_add(At, SimplexKey{}, nablas[q].A);
  for (int i = 1; i <= q; ++i) {
    Form D = nablas[i - 1].A - nablas[i].A;
    SimplexKey kt;
    kt.t[i - 1] = 1;
    detail::sf_add(At, kt, D);
    SimplexKey kd;
    kd.dt = 1u << (i - 1);
    detail::sf_add(theta, kd, D);
  }
  SimplexForm omega = detail::sf_mul(At, At);
  for (const auto& [k, w] : At) detail::sf_add(omega, k, ext_d(w));
  for (const auto& [k, w] : theta) detail::sf_add(omega, k, w);

  SimplexForm total, term;
  detail::sf_add(term, SimplexKey{}, identity_matrix(r));
  total = term;
  for (int m = 1; !term.empty(); ++m) {
    term = detail::sf_mul(term, omega);
    for (auto& [k, w] : term) w = Scalar(Rational(1, m)) * w;
    for (const auto& [k, w] : term) detail::sf_add(total, k, w);
  }
  const unsigned full = (1u << q) - 1;
  Form out;
  for (const auto& [k, w] : total) {
    if (k.dt != full) continue;
    std::vector<int> e(k.t.begin(), k.t.begin() + q);
    out += Scalar(detail::ordered_simplex_integral(e)) * trace_end(w);
  }
  return out;
}

/// Ch_G(E, nabla)^0_{p,q}(g) = (-1)^{p+q} cs(gamma_1 nabla, .., gamma_q nabla, nabla)
/// in form degree p, gamma_i = g_i .. g_q acting on the left: gamma nabla = (gamma^{-1})^* nabla.
inline GetzCochain getzler_chern(const Bundle& E, const Connection& nabla, int p, int q) {
  const Group& G = E.group();
  detail::check_finite(G);
  std::vector<GetzComb::Term> out;
  const Scalar s((p + q) & 1 ? -1 : 1);
  detail::for_each_tuple(G.order(), q, [&](const std::vector<int>& g) {
    std::vector<Connection> nablas;
    for (int i = 0; i < q; ++i) {
      int gamma = 0;
      for (int j = i; j < q; ++j) gamma = G.mul(gamma, g[j]);
      nablas.push_back({pulled_connection(E, nabla, G.inv(gamma))});
    }
    nablas.push_back(nabla);
    GroupTuple t{};
    for (int i = 0; i < q; ++i) t[i] = static_cast<std::int16_t>(g[i]);
    detail::emit(out, t, degree_part(chern_simons(E, nablas), p), s);
  });
  return {p, q, GetzComb::from_terms(std::move(out))};
}

/// All components of Ch_G(E, nabla)^0 as an element of CP^0.
inline CPFamily getzler_chern_family(const Bundle& E, const Connection& nabla) {
  const int n = E.group().dim();
  CPFamily f;
  f.n = n;
  for (int q = 0; q <= n; ++q)
    for (int p = q; p <= n; ++p)
      if (((p + q - n) & 1) == 0) {
        GetzCochain a = getzler_chern(E, nabla, p, q);
        if (!a.is_zero()) f.add(a);
      }
  return f;
}

}  // namespace equichern
