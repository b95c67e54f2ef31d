#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "equichern/cyclic.hpp"
#include "equichern/getzler.hpp"
#include "equichern/random.hpp"

namespace equichern {

/// Random chain of L^+ or of its normalized quotient.
inline CylChain random_cyl(Sampler& s, const Group& G, int p, int q, bool normalized = true, int terms = 3) {
  Accum<CylKey> acc;
  const int n = G.dim();
  for (int t = 0; t < terms; ++t) {
    CylKey k;
    for (int i = 0; i <= q; ++i) {
      bool unit = (i == 0 || !normalized) && s.uniform(0, 4) == 0;
      k.g[i] = static_cast<std::int8_t>(unit ? kGroupUnit : s.uniform(0, G.order() - 1));
    }
    for (int i = 0; i <= p; ++i) {
      bool unit = (i == 0 || !normalized) && s.uniform(0, 4) == 0;
      if (unit) {
        k.units = static_cast<std::uint16_t>(k.units | (1u << i));
      } else {
        k.a[i] = s.mode(n, 1);
      }
    }
    acc.add(k, s.coefficient(G.conductor()));
  }
  return {p, q, acc.finish()};
}

inline BarChain random_bar(Sampler& s, const Group& G, int k, int terms = 2) {
  BarChain r{k, {}};
  for (int t = 0; t < terms; ++t) {
    std::vector<AlgebraElem> slots;
    for (int i = 0; i <= k; ++i) {
      if (i == 0 && s.uniform(0, 3) == 0) {
        slots.push_back(AlgebraElem::one());
      } else {
        slots.push_back(AlgebraElem::basis(s.uniform(0, G.order() - 1), s.mode(G.dim(), 1)));
      }
    }
    r = r + s.coefficient(G.conductor()) * bar_basis(slots);
  }
  return r;
}

/// Random Getzler chain or cochain of bidegree (p, q). Finite group slots avoid
/// the unit when `reduced`; circle slots are g-modes in [-2, 2].
template <class E>
E random_getz(Sampler& s, const Group& G, int p, int q, bool reduced = true, int terms = 3, int max_u = 0) {
  Accum<GetzKey> acc;
  const int n = G.dim();
  if (p < 0 || p > n) return {p, q, {}};
  for (int t = 0; t < terms; ++t) {
    GetzKey k;
    bool skip = false;
    for (int i = 0; i < q; ++i) {
      if (G.is_finite()) {
        int lo = reduced ? 1 : 0;
        if (lo > G.order() - 1) skip = true;
        else k.g[i] = static_cast<std::int16_t>(s.uniform(lo, G.order() - 1));
      } else {
        k.g[i] = static_cast<std::int16_t>(s.uniform(-2, 2));
      }
    }
    if (skip) continue;
    k.mask = static_cast<std::uint8_t>(s.mask_of_degree(n, p));
    k.k = s.mode(n, 1);
    k.u = static_cast<std::int16_t>(s.uniform(0, max_u));
    acc.add(k, s.coefficient(G.conductor()));
  }
  return {p, q, acc.finish()};
}

/// Random jet chain of degree p with u-degrees up to J.
inline JetChain random_jet(Sampler& s, const Group& G, int p, int J, int terms = 3) {
  Accum<JetKey> acc;
  for (int t = 0; t < terms; ++t) {
    JetKey k;
    for (int i = 0; i <= p; ++i) k.a.a[i] = s.mode(G.dim(), 1);
    if (s.uniform(0, 3) == 0) k.a.units = 1;
    k.u = static_cast<std::int16_t>(s.uniform(0, J));
    acc.add(k, s.coefficient());
  }
  return {p, acc.finish()};
}

/// Forces g_0 = (g_1 .. g_q)^{-1} on every term so that Psi_3 sees the whole chain.
inline CylChain on_diagonal(const Group& G, const CylChain& x) {
  std::vector<CylComb::Term> out;
  for (const auto& [k, c] : x.c.terms()) {
    CylKey nk = k;
    int prod = 0;
    for (int i = 1; i <= x.q; ++i) prod = G.mul(prod, detail::gval(k.g[i]));
    nk.g[0] = static_cast<std::int8_t>(G.inv(prod));
    out.emplace_back(nk, c);
  }
  return {x.p, x.q, CylComb::from_terms(std::move(out))};
}

/// Kills the values on group tuples with product e.
inline GetzCochain cyclically_normalize(const Group& G, const GetzCochain& a) {
  return {a.p, a.q, a.c.filtered([&](const GetzKey& k) {
            int prod = 0;
            for (int i = 0; i < a.q; ++i) prod = G.mul(prod, k.g[i]);
            return prod != 0;
          })};
}

// ---- canonical text ----

inline std::string slot_text(const Key& k, int n) {
  if (k.mask == kUnitSlot) return "1";
  return "[" + std::to_string(k.g) + "]e" + mode_str(k.k, n);
}

inline std::string tuple_text(const std::vector<Key>& t, int n) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + slot_text(t[i], n);
  return s + ")";
}

inline std::string elem_text(const AlgebraElem& a, int n) {
  std::string s;
  if (!a.unit.is_zero()) s = a.unit.str() + "*1";
  for (const auto& [k, c] : a.f.terms()) s += (s.empty() ? "" : " + ") + c.str() + "*" + slot_text(k, n);
  return s.empty() ? "0" : s;
}

inline std::string elems_text(const std::vector<AlgebraElem>& a, int n) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? ", " : "") + elem_text(a[i], n);
  return s + ")";
}

inline std::string form_text(const Form& f, int n) { return f.is_zero() ? "0" : to_text(f, n); }

inline std::string chain_text(const CylChain& x, int n) {
  std::ostringstream os;
  os << "(" << x.p << "," << x.q << ")";
  for (const auto& [k, c] : x.c.terms()) {
    os << " " << c.str() << "*g[";
    for (int i = 0; i <= x.q; ++i) os << (i ? "," : "") << int(k.g[i]);
    os << "]a[";
    for (int i = 0; i <= x.p; ++i) os << (i ? "," : "") << (k.unit_at(i) ? "1" : mode_str(k.a[i], n));
    os << "]";
  }
  return os.str();
}

inline std::string chain_text(const TotChain& t, int n) {
  std::string s;
  for (const auto& [bd, x] : t) s += (s.empty() ? "" : " | ") + chain_text(x, n);
  return s.empty() ? "0" : s;
}

template <class Tag>
std::string chain_text(const GetzElem<Tag>& x, int n) {
  std::ostringstream os;
  os << "(" << x.p << "," << x.q << ")";
  for (const auto& [k, c] : x.c.terms()) {
    os << " " << c.str() << "*g[";
    for (int i = 0; i < x.q; ++i) os << (i ? "," : "") << k.g[i];
    os << "]u^" << k.u << "e" << mode_str(k.k, n) << mask_str(k.mask);
  }
  return os.str();
}

inline std::string chain_text(const JetChain& x, int n) {
  std::ostringstream os;
  os << "jet(" << x.p << ")";
  for (const auto& [k, c] : x.c.terms()) {
    os << " " << c.str() << "*u^" << k.u << "a[";
    for (int i = 0; i <= x.p; ++i) os << (i ? "," : "") << (k.a.unit_at(i) ? "1" : mode_str(k.a.a[i], n));
    os << "]";
  }
  return os.str();
}

}  // namespace equichern
