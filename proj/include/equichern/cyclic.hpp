#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "equichern/group.hpp"
#include "equichern/lincomb.hpp"
#include "equichern/torus.hpp"

namespace equichern {

inline constexpr int kMaxSlots = 10;
/// Group slot holding the adjoined unit of C(G)^+.
inline constexpr std::int8_t kGroupUnit = -1;

/// Basis element of L^+(A, G): delta functions in the group slots g_0..g_q
/// (or the adjoined unit) tensored with Fourier modes a_0..a_p (or the
/// adjoined unit of A^+, flagged in `units`).
struct CylKey {
  std::array<std::int8_t, kMaxSlots> g{};
  std::array<Mode, kMaxSlots> a{};
  std::uint16_t units = 0;

  bool unit_at(int i) const { return (units >> i) & 1u; }
  auto operator<=>(const CylKey&) const = default;
};

using CylComb = LinComb<CylKey>;

/// Element of bidegree (p, q): p is the algebra degree, q the group degree.
struct CylChain {
  int p = 0;
  int q = 0;
  CylComb c;

  bool is_zero() const { return c.is_zero(); }
  friend CylChain operator+(const CylChain& x, const CylChain& y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    if (x.p != y.p || x.q != y.q) throw std::invalid_argument("bidegree mismatch");
    return {x.p, x.q, x.c + y.c};
  }
  friend CylChain operator-(const CylChain& x, const CylChain& y) { return x + (-1) * y; }
  friend CylChain operator*(const Scalar& s, const CylChain& x) { return {x.p, x.q, s * x.c}; }
  friend bool operator==(const CylChain& x, const CylChain& y) {
    if (x.is_zero() && y.is_zero()) return true;
    return x.p == y.p && x.q == y.q && x.c == y.c;
  }
};

/// Hochschild chain of the unitized crossed product, degree k. Slot i is
/// delta_{g_i} e_{a_i}, or the adjoined unit when bit i of `units` is set
/// (then g_i = kGroupUnit).
struct BarChain {
  int k = 0;
  CylComb c;

  bool is_zero() const { return c.is_zero(); }
  friend BarChain operator+(const BarChain& x, const BarChain& y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    if (x.k != y.k) throw std::invalid_argument("degree mismatch");
    return {x.k, x.c + y.c};
  }
  friend BarChain operator-(const BarChain& x, const BarChain& y) { return x + (-1) * y; }
  friend BarChain operator*(const Scalar& s, const BarChain& x) { return {x.k, s * x.c}; }
  friend bool operator==(const BarChain& x, const BarChain& y) {
    if (x.is_zero() && y.is_zero()) return true;
    return x.k == y.k && x.c == y.c;
  }
};

namespace detail {

inline void check_finite(const Group& G) {
  if (!G.is_finite()) throw std::invalid_argument("cyclic chains require a finite group");
}

inline int gmul(const Group& G, int a, int b) {
  if (a == kGroupUnit) return b;
  if (b == kGroupUnit) return a;
  return G.mul(a, b);
}

inline int gval(int a) { return a == kGroupUnit ? 0 : a; }

/// g . (payload slots 0..p) = g^* on every non-unit slot; returns the phase.
inline Scalar act_payload(const Group& G, int g, CylKey& k, int p) {
  g = gval(g);
  if (g == 0) return Scalar(1);
  const AffineMap& f = G.action(g);
  int ph = 0;
  for (int i = 0; i <= p; ++i) {
    if (k.unit_at(i)) continue;
    auto [m, e] = f.pull_mode(k.a[i]);
    k.a[i] = m;
    ph += e;
  }
  ph %= f.conductor();
  return ph == 0 ? Scalar(1) : Scalar::zeta(f.conductor(), ph);
}

/// Product a_i a_j of two payload slots written into slot i.
inline void merge_payload(CylKey& k, int i, int j) {
  if (k.unit_at(j)) return;
  if (k.unit_at(i)) {
    k.a[i] = k.a[j];
    k.units = static_cast<std::uint16_t>(k.units & ~(1u << i));
    return;
  }
  k.a[i] = k.a[i] + k.a[j];
}

/// Removes payload slot i, shifting later slots down.
inline void erase_payload(CylKey& k, int i, int p) {
  for (int j = i; j < p; ++j) k.a[j] = k.a[j + 1];
  k.a[p] = Mode{};
  std::uint16_t low = k.units & static_cast<std::uint16_t>((1u << i) - 1);
  std::uint16_t high = static_cast<std::uint16_t>((k.units >> (i + 1)) << i);
  k.units = static_cast<std::uint16_t>(low | high);
}

/// Inserts the adjoined unit as payload slot i.
inline void insert_payload_unit(CylKey& k, int i, int p) {
  if (p + 2 > kMaxSlots) throw std::length_error("too many slots");
  for (int j = p + 1; j > i; --j) k.a[j] = k.a[j - 1];
  k.a[i] = Mode{};
  std::uint16_t low = k.units & static_cast<std::uint16_t>((1u << i) - 1);
  std::uint16_t high = static_cast<std::uint16_t>((k.units >> i) << (i + 1));
  k.units = static_cast<std::uint16_t>(low | high | (1u << i));
}

inline void erase_group(CylKey& k, int i, int q) {
  for (int j = i; j < q; ++j) k.g[j] = k.g[j + 1];
  k.g[q] = 0;
}

inline void insert_group_unit(CylKey& k, int i, int q) {
  if (q + 2 > kMaxSlots) throw std::length_error("too many slots");
  for (int j = q + 1; j > i; --j) k.g[j] = k.g[j - 1];
  k.g[i] = kGroupUnit;
}

inline int group_product(const Group& G, const CylKey& k, int q) {
  int r = kGroupUnit;
  for (int i = 0; i <= q; ++i) r = gmul(G, r, k.g[i]);
  return r;
}

template <class Fn>
CylChain transform(const CylChain& x, int p2, int q2, Fn fn) {
  std::vector<CylComb::Term> out;
  out.reserve(x.c.size());
  for (const auto& [k, c] : x.c.terms()) {
    CylKey nk = k;
    Scalar s = fn(nk);
    if (!s.is_zero()) out.emplace_back(nk, s * c);
  }
  return {p2, q2, CylComb::from_terms(std::move(out))};
}

}  // namespace detail

/// Projection onto the normalized quotient: adjoined units in payload slots
/// >= 1 or group slots >= 1 are killed.
inline CylChain normalize(const CylChain& x) {
  return {x.p, x.q, x.c.filtered([&](const CylKey& k) {
            if (k.units >> 1) return false;
            for (int i = 1; i <= x.q; ++i)
              if (k.g[i] == kGroupUnit) return false;
            return true;
          })};
}

/// Projection onto the quotient of the diagonal by its own degeneracies:
/// a term dies when payload slot i and group slot i (i >= 1) are both units.
inline CylChain normalize_diag(const CylChain& x) {
  return {x.p, x.q, x.c.filtered([&](const CylKey& k) {
            for (int i = 1; i <= x.q; ++i)
              if (k.g[i] == kGroupUnit && k.unit_at(i)) return false;
            return true;
          })};
}

// ---- the eight structure maps of L^+ ----

inline CylChain face_h(const Group& G, const CylChain& x, int i) {
  if (i < 0 || i > x.p || x.p == 0) throw std::out_of_range("horizontal face index");
  const int p = x.p, q = x.q;
  return detail::transform(x, p - 1, q, [&](CylKey& k) {
    if (i < p) {
      detail::merge_payload(k, i, i + 1);
      detail::erase_payload(k, i + 1, p);
      return Scalar(1);
    }
    // (g_0..g_q)^{-1}(a_p) a_0
    int prod = detail::group_product(G, k, q);
    if (!k.unit_at(p)) {
      CylKey last;
      last.a[0] = k.a[p];
      Scalar s = detail::act_payload(G, prod == kGroupUnit ? 0 : G.inv(prod), last, 0);
      if (k.unit_at(0)) {
        k.a[0] = last.a[0];
        k.units = static_cast<std::uint16_t>(k.units & ~1u);
      } else {
        k.a[0] = k.a[0] + last.a[0];
      }
      detail::erase_payload(k, p, p);
      return s;
    }
    detail::erase_payload(k, p, p);
    return Scalar(1);
  });
}

inline CylChain degen_h(const CylChain& x, int i) {
  if (i < 0 || i > x.p) throw std::out_of_range("horizontal degeneracy index");
  return detail::transform(x, x.p + 1, x.q, [&](CylKey& k) {
    detail::insert_payload_unit(k, i + 1, x.p);
    return Scalar(1);
  });
}

inline CylChain cyc_h(const Group& G, const CylChain& x) {
  const int p = x.p, q = x.q;
  return detail::transform(x, p, q, [&](CylKey& k) {
    int prod = detail::group_product(G, k, q);
    CylKey last;
    last.a[0] = k.a[p];
    last.units = k.unit_at(p) ? 1 : 0;
    Scalar s = detail::act_payload(G, prod == kGroupUnit ? 0 : G.inv(prod), last, 0);
    for (int j = p; j > 0; --j) k.a[j] = k.a[j - 1];
    k.a[0] = last.a[0];
    std::uint16_t mask = static_cast<std::uint16_t>((1u << (p + 1)) - 1);
    k.units = static_cast<std::uint16_t>(((k.units << 1) & mask) | last.units);
    return s;
  });
}

inline CylChain face_v(const Group& G, const CylChain& x, int i) {
  if (i < 0 || i > x.q || x.q == 0) throw std::out_of_range("vertical face index");
  const int p = x.p, q = x.q;
  return detail::transform(x, p, q - 1, [&](CylKey& k) {
    if (i < q) {
      int m = detail::gmul(G, k.g[i], k.g[i + 1]);
      k.g[i] = static_cast<std::int8_t>(m);
      detail::erase_group(k, i + 1, q);
      return Scalar(1);
    }
    // gamma = g_q acts on the payload and moves in front of g_0
    int gamma = k.g[q];
    Scalar s = detail::act_payload(G, gamma, k, p);
    k.g[0] = static_cast<std::int8_t>(detail::gmul(G, gamma, k.g[0]));
    k.g[q] = 0;
    return s;
  });
}

inline CylChain degen_v(const CylChain& x, int i) {
  if (i < 0 || i > x.q) throw std::out_of_range("vertical degeneracy index");
  return detail::transform(x, x.p, x.q + 1, [&](CylKey& k) {
    detail::insert_group_unit(k, i + 1, x.q);
    return Scalar(1);
  });
}

inline CylChain cyc_v(const Group& G, const CylChain& x) {
  const int p = x.p, q = x.q;
  return detail::transform(x, p, q, [&](CylKey& k) {
    int last = k.g[q];
    for (int j = q; j > 0; --j) k.g[j] = k.g[j - 1];
    k.g[0] = static_cast<std::int8_t>(last);
    return detail::act_payload(G, last, k, p);
  });
}

/// Extra degeneracies: the adjoined unit in front.
inline CylChain extra_h(const CylChain& x) {
  return detail::transform(x, x.p + 1, x.q, [&](CylKey& k) {
    detail::insert_payload_unit(k, 0, x.p);
    return Scalar(1);
  });
}

inline CylChain extra_v(const CylChain& x) {
  return detail::transform(x, x.p, x.q + 1, [&](CylKey& k) {
    detail::insert_group_unit(k, 0, x.q);
    return Scalar(1);
  });
}

// ---- bicomplex differentials on the normalized quotient ----

inline CylChain zero_chain(int p, int q) { return {p, q, {}}; }

inline CylChain b_h(const Group& G, const CylChain& x) {
  if (x.p == 0) return zero_chain(-1, x.q);
  CylChain r = zero_chain(x.p - 1, x.q);
  for (int i = 0; i <= x.p; ++i) r = r + Scalar(i & 1 ? -1 : 1) * face_h(G, x, i);
  return normalize(r);
}

inline CylChain b_v(const Group& G, const CylChain& x) {
  if (x.q == 0) return zero_chain(x.p, -1);
  CylChain r = zero_chain(x.p, x.q - 1);
  for (int i = 0; i <= x.q; ++i) r = r + Scalar((i + x.p) & 1 ? -1 : 1) * face_v(G, x, i);
  return normalize(r);
}

/// B^h = c^h sum_i (-1)^{ip} (t^h)^i.
inline CylChain B_h(const Group& G, const CylChain& x) {
  CylChain r = zero_chain(x.p + 1, x.q);
  CylChain t = normalize(x);
  for (int i = 0; i <= x.p; ++i) {
    r = r + Scalar((i * x.p) & 1 ? -1 : 1) * extra_h(t);
    t = cyc_h(G, t);
  }
  return normalize(r);
}

/// B^v = (-1)^p (t^h)^{p+1} c^v sum_i (-1)^{iq} (t^v)^i.
inline CylChain B_v(const Group& G, const CylChain& x) {
  CylChain r = zero_chain(x.p, x.q + 1);
  CylChain t = normalize(x);
  for (int i = 0; i <= x.q; ++i) {
    r = r + Scalar((i * x.q) & 1 ? -1 : 1) * extra_v(t);
    t = cyc_v(G, t);
  }
  for (int i = 0; i <= x.p; ++i) r = cyc_h(G, r);
  if (x.p & 1) r = (-1) * r;
  return normalize(r);
}

// ---- the diagonal ----

inline CylChain face_d(const Group& G, const CylChain& x, int i) { return face_v(G, face_h(G, x, i), i); }
inline CylChain degen_d(const CylChain& x, int i) { return degen_v(degen_h(x, i), i); }
inline CylChain cyc_d(const Group& G, const CylChain& x) { return cyc_v(G, cyc_h(G, x)); }

inline CylChain b_diag(const Group& G, const CylChain& x) {
  if (x.p != x.q) throw std::invalid_argument("not a diagonal chain");
  if (x.p == 0) return zero_chain(-1, -1);
  CylChain r = zero_chain(x.p - 1, x.q - 1);
  for (int i = 0; i <= x.p; ++i) r = r + Scalar(i & 1 ? -1 : 1) * face_d(G, x, i);
  return normalize_diag(r);
}

inline CylChain B_diag(const Group& G, const CylChain& x) {
  if (x.p != x.q) throw std::invalid_argument("not a diagonal chain");
  CylChain r = zero_chain(x.p + 1, x.q + 1);
  CylChain t = normalize_diag(x);
  for (int i = 0; i <= x.p; ++i) {
    r = r + Scalar((i * x.p) & 1 ? -1 : 1) * extra_v(extra_h(t));
    t = cyc_d(G, t);
  }
  return normalize_diag(r);
}

// ---- Hochschild chains of the crossed product ----

namespace detail {

inline BarChain bar_normalize(const BarChain& x) {
  return {x.k, x.c.filtered([](const CylKey& k) { return (k.units >> 1) == 0; })};
}

struct BarSlot {
  int g = 0;
  Mode a{};
  bool unit = false;
};

inline BarSlot bar_slot(const CylKey& k, int i) { return {k.g[i], k.a[i], k.unit_at(i)}; }

inline void set_bar_slot(CylKey& k, int i, const BarSlot& s) {
  k.g[i] = static_cast<std::int8_t>(s.unit ? kGroupUnit : s.g);
  k.a[i] = s.unit ? Mode{} : s.a;
  k.units = static_cast<std::uint16_t>(s.unit ? (k.units | (1u << i)) : (k.units & ~(1u << i)));
}

/// (delta_g e_a)(delta_h e_b) = delta_{gh} e_a g^*(e_b).
inline Scalar bar_mul(const Group& G, const BarSlot& x, const BarSlot& y, BarSlot& out) {
  if (x.unit) {
    out = y;
    return Scalar(1);
  }
  if (y.unit) {
    out = x;
    return Scalar(1);
  }
  CylKey tmp;
  tmp.a[0] = y.a;
  Scalar s = act_payload(G, x.g, tmp, 0);
  out = {G.mul(x.g, y.g), x.a + tmp.a[0], false};
  return s;
}

inline void bar_erase(CylKey& k, int i, int n) {
  erase_payload(k, i, n);
  erase_group(k, i, n);
}

}  // namespace detail

inline BarChain bar_basis(const std::vector<AlgebraElem>& slots) {
  BarChain r{static_cast<int>(slots.size()) - 1, {}};
  std::vector<CylComb::Term> cur{{CylKey{}, Scalar(1)}};
  for (std::size_t i = 0; i < slots.size(); ++i) {
    std::vector<CylComb::Term> next;
    for (const auto& [k, c] : cur) {
      if (!slots[i].unit.is_zero()) {
        CylKey nk = k;
        nk.g[i] = kGroupUnit;
        nk.units = static_cast<std::uint16_t>(nk.units | (1u << i));
        next.emplace_back(nk, c * slots[i].unit);
      }
      for (const auto& [fk, fc] : slots[i].f.terms()) {
        CylKey nk = k;
        nk.g[i] = static_cast<std::int8_t>(fk.g);
        nk.a[i] = fk.k;
        next.emplace_back(nk, c * fc);
      }
    }
    cur = std::move(next);
  }
  r.c = CylComb::from_terms(std::move(cur));
  return r;
}

inline BarChain chain_b(const Group& G, const BarChain& x) {
  detail::check_finite(G);
  const int k = x.k;
  if (k == 0) return {-1, {}};
  std::vector<CylComb::Term> out;
  for (const auto& [key, c] : x.c.terms()) {
    for (int i = 0; i < k; ++i) {
      CylKey nk = key;
      detail::BarSlot prod;
      Scalar s = detail::bar_mul(G, detail::bar_slot(key, i), detail::bar_slot(key, i + 1), prod);
      detail::set_bar_slot(nk, i, prod);
      detail::bar_erase(nk, i + 1, k);
      out.emplace_back(nk, (i & 1 ? -s : s) * c);
    }
    // (-1)^k a_k a_0 (x) a_1 .. a_{k-1}
    CylKey nk = key;
    detail::BarSlot prod;
    Scalar s = detail::bar_mul(G, detail::bar_slot(key, k), detail::bar_slot(key, 0), prod);
    detail::set_bar_slot(nk, 0, prod);
    detail::bar_erase(nk, k, k);
    out.emplace_back(nk, (k & 1 ? -s : s) * c);
  }
  return detail::bar_normalize({k - 1, CylComb::from_terms(std::move(out))});
}

/// B(a_0 .. a_k) = sum_i (-1)^{ik} (1, a_i, .., a_k, a_0, .., a_{i-1}).
inline BarChain chain_B(const BarChain& x) {
  const int k = x.k;
  std::vector<CylComb::Term> out;
  const BarChain nx = detail::bar_normalize(x);
  for (const auto& [key, c] : nx.c.terms()) {
    for (int i = 0; i <= k; ++i) {
      CylKey nk;
      nk.g[0] = kGroupUnit;
      nk.units = 1;
      for (int j = 0; j <= k; ++j) {
        int src = (i + j) % (k + 1);
        nk.g[j + 1] = key.g[src];
        nk.a[j + 1] = key.a[src];
        if (key.unit_at(src)) nk.units = static_cast<std::uint16_t>(nk.units | (1u << (j + 1)));
      }
      out.emplace_back(nk, ((i * k) & 1) ? -c : c);
    }
  }
  return detail::bar_normalize({k + 1, CylComb::from_terms(std::move(out))});
}

/// Psi_1: slot i of the payload is moved by (g_i .. g_k)^{-1}.
inline CylChain psi1(const Group& G, const BarChain& x) {
  detail::check_finite(G);
  const int k = x.k;
  std::vector<CylComb::Term> out;
  for (const auto& [key, c] : x.c.terms()) {
    CylKey nk = key;
    Scalar s(1);
    int suffix = kGroupUnit;
    for (int i = k; i >= 0; --i) {
      suffix = detail::gmul(G, key.g[i], suffix);
      if (key.unit_at(i) || suffix == kGroupUnit) continue;
      CylKey one;
      one.a[0] = key.a[i];
      s = s * detail::act_payload(G, G.inv(suffix), one, 0);
      nk.a[i] = one.a[0];
    }
    out.emplace_back(nk, s * c);
  }
  return normalize_diag({k, k, CylComb::from_terms(std::move(out))});
}

// ---- Eilenberg-Zilber ----

/// EZ_{p,q} = d^h_{p+1} .. d^h_{p+q} (d^v_0)^p on a diagonal chain of degree p + q.
inline CylChain ez(const Group& G, const CylChain& x, int p, int q) {
  if (x.p != x.q || x.p != p + q) throw std::invalid_argument("EZ bidegree mismatch");
  CylChain r = x;
  for (int i = 0; i < p; ++i) r = face_v(G, r, 0);
  for (int j = p + q; j > p; --j) r = face_h(G, r, j);
  return normalize(r);
}

namespace detail {

/// All (a, b)-shuffles of {0, .., a + b - 1}: the sorted first block and its sign.
inline std::vector<std::pair<std::vector<int>, int>> shuffles(int a, int b) {
  std::vector<std::pair<std::vector<int>, int>> out;
  const int n = a + b;
  for (unsigned m = 0; m < (1u << n); ++m) {
    if (std::popcount(m) != a) continue;
    std::vector<int> first;
    int inv = 0, seen_second = 0;
    for (int i = 0; i < n; ++i) {
      if ((m >> i) & 1u) {
        first.push_back(i);
        inv += seen_second;
      } else {
        ++seen_second;
      }
    }
    out.emplace_back(first, inv & 1 ? -1 : 1);
  }
  return out;
}

inline std::vector<int> complement(const std::vector<int>& s, int n) {
  std::vector<int> r;
  for (int i = 0; i < n; ++i)
    if (!std::binary_search(s.begin(), s.end(), i)) r.push_back(i);
  return r;
}

}  // namespace detail

/// Shuffle map: sum over (p, q)-shuffles sigma of sign(sigma)
/// s^h_{sigma(p+q)} .. s^h_{sigma(p+1)} s^v_{sigma(p)} .. s^v_{sigma(1)}.
inline CylChain shuffle_nabla(const CylChain& x) {
  const int p = x.p, q = x.q, n = p + q;
  CylChain r = zero_chain(n, n);
  for (const auto& [vert, sign] : detail::shuffles(p, q)) {
    std::vector<int> hor = detail::complement(vert, n);
    CylChain y = x;
    for (int i : vert) y = degen_v(y, i);
    for (int i : hor) y = degen_h(y, i);
    r = r + Scalar(sign) * y;
  }
  return normalize_diag(r);
}

/// Eilenberg-MacLane homotopy on the diagonal, degree m -> m + 1, with
/// horizontal operators on the first factor and vertical ones on the second:
/// nabla EZ - id = b h + h b.
inline CylChain ez_homotopy(const Group& G, const CylChain& x) {
  if (x.p != x.q) throw std::invalid_argument("not a diagonal chain");
  const int m = x.p;
  CylChain r = zero_chain(m + 1, m + 1);
  for (int q = 0; q <= m - 1; ++q) {
    for (int p = 0; p <= m - q - 1; ++p) {
      const int off = m - p - q;
      // faces: horizontal d_{m-q+1} .. d_m, vertical d_{m-p-q} .. d_{m-q-1}
      CylChain base = x;
      for (int j = m; j >= m - q + 1; --j) base = face_h(G, base, j);
      for (int j = m - q - 1; j >= off; --j) base = face_v(G, base, j);
      if (base.is_zero()) continue;
      base = degen_h(base, off - 1);
      for (const auto& [alpha, sign] : detail::shuffles(p + 1, q)) {
        std::vector<int> beta = detail::complement(alpha, p + q + 1);
        int sig = 0;
        for (std::size_t i = 0; i < alpha.size(); ++i) sig += alpha[i] - static_cast<int>(i);
        CylChain y = base;
        for (int b : beta) y = degen_h(y, b + off);
        for (int a : alpha) y = degen_v(y, a + off);
        r = r + Scalar((off + sig) & 1 ? 1 : -1) * y;
      }
    }
  }
  return normalize_diag(r);
}

/// A chain of the total complex: components keyed by bidegree (p, q).
using TotChain = std::map<std::pair<int, int>, CylChain>;

inline void tot_add(TotChain& t, const CylChain& x) {
  if (x.is_zero()) return;
  auto key = std::make_pair(x.p, x.q);
  auto it = t.find(key);
  if (it == t.end()) {
    t.emplace(key, x);
  } else {
    it->second = it->second + x;
    if (it->second.is_zero()) t.erase(it);
  }
}

inline TotChain ez_total(const Group& G, const CylChain& x) {
  TotChain t;
  for (int p = 0; p <= x.p; ++p) tot_add(t, ez(G, x, p, x.p - p));
  return t;
}

/// EZ^pert(F) = sum_m EZ((B h)^m F), truncated at total degree `max_degree`.
inline TotChain ez_pert(const Group& G, const CylChain& x, int max_degree) {
  TotChain t;
  CylChain cur = normalize_diag(x);
  while (!cur.is_zero() && cur.p <= max_degree) {
    for (const auto& [bd, c] : ez_total(G, cur)) tot_add(t, c);
    cur = B_diag(G, ez_homotopy(G, cur));
  }
  return t;
}

/// Total differential b^h + b^v + B^h + B^v applied componentwise.
inline TotChain tot_differential(const Group& G, const TotChain& t, bool with_B = true) {
  TotChain r;
  for (const auto& [bd, x] : t) {
    if (x.p > 0) tot_add(r, b_h(G, x));
    if (x.q > 0) tot_add(r, b_v(G, x));
    if (with_B) {
      tot_add(r, B_h(G, x));
      tot_add(r, B_v(G, x));
    }
  }
  return r;
}

inline TotChain truncate_total(const TotChain& t, int max_degree) {
  TotChain r;
  for (const auto& [bd, x] : t)
    if (bd.first + bd.second <= max_degree) r.emplace(bd, x);
  return r;
}

}  // namespace equichern
