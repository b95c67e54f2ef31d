#pragma once

#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "equichern/dga.hpp"
#include "equichern/group.hpp"

namespace equichern {

/// A basis slot: the adjoined unit (mask == kUnitSlot) or the element
/// [g] e_k of the crossed product.
inline constexpr std::uint8_t kUnitSlot = 0xFF;

inline AlgebraElem slot_elem(const Key& k) {
  if (k.mask == kUnitSlot) return AlgebraElem::one();
  return AlgebraElem::basis(k.g, k.k);
}

inline Key unit_slot() {
  Key k;
  k.mask = kUnitSlot;
  return k;
}

/// Splits an element into basis slots with coefficients.
inline std::vector<std::pair<Key, Scalar>> slot_terms(const AlgebraElem& a) {
  std::vector<std::pair<Key, Scalar>> out;
  if (!a.unit.is_zero()) out.emplace_back(unit_slot(), a.unit);
  for (const auto& [k, c] : a.f.terms()) {
    Key s;
    s.g = k.g;
    s.k = k.k;
    out.emplace_back(s, c);
  }
  return out;
}

struct SlotsHash {
  std::size_t operator()(const std::vector<Key>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
      h ^= x;
      h *= 1099511628211ull;
    };
    for (const auto& k : v) {
      mix(static_cast<std::uint32_t>(k.g));
      mix(k.mask);
      for (auto m : k.k) mix(static_cast<std::uint16_t>(m));
    }
    return static_cast<std::size_t>(h);
  }
};

/// Multilinear functional on (A^+)^{arity}, given by its values on basis
/// slots. Values may be memoized; the cache is shared between copies.
class Cochain {
 public:
  using Tuple = std::vector<AlgebraElem>;
  using BasisFn = std::function<Scalar(const std::vector<Key>&)>;

  Cochain() = default;
  Cochain(int arity, BasisFn f, bool memoize = false) : arity_(arity), f_(std::move(f)) {
    if (memoize) cache_ = std::make_shared<Cache>();
  }
  static Cochain zero(int arity) {
    return Cochain(arity, [](const std::vector<Key>&) { return Scalar(); });
  }

  int arity() const { return arity_; }

  Scalar basis(const std::vector<Key>& slots) const {
    if (static_cast<int>(slots.size()) != arity_) throw std::invalid_argument("cochain arity mismatch");
    if (!cache_) return f_(slots);
    auto& shard = cache_->shards[SlotsHash{}(slots) % Cache::kShards];
    {
      std::lock_guard<std::mutex> lock(shard.mu);
      if (auto it = shard.map.find(slots); it != shard.map.end()) return it->second;
    }
    Scalar v = f_(slots);
    std::lock_guard<std::mutex> lock(shard.mu);
    shard.map.emplace(slots, v);
    return v;
  }

  Scalar operator()(const Tuple& a) const {
    if (static_cast<int>(a.size()) != arity_) throw std::invalid_argument("cochain arity mismatch");
    std::vector<std::vector<std::pair<Key, Scalar>>> parts;
    for (const auto& x : a) {
      parts.push_back(slot_terms(x));
      if (parts.back().empty()) return {};
    }
    Scalar total;
    std::vector<Key> slots(arity_);
    std::vector<std::size_t> idx(arity_, 0);
    while (true) {
      Scalar c(1);
      for (int i = 0; i < arity_; ++i) {
        slots[i] = parts[i][idx[i]].first;
        c = c * parts[i][idx[i]].second;
      }
      total += c * basis(slots);
      int i = 0;
      while (i < arity_ && ++idx[i] == parts[i].size()) idx[i++] = 0;
      if (i == arity_) break;
    }
    return total;
  }

 private:
  struct Cache {
    static constexpr std::size_t kShards = 64;
    struct Shard {
      std::mutex mu;
      std::unordered_map<std::vector<Key>, Scalar, SlotsHash> map;
    };
    std::array<Shard, kShards> shards;
  };

  int arity_ = 0;
  BasisFn f_;
  std::shared_ptr<Cache> cache_;
};

/// Hochschild coboundary: (b phi)(a_0..a_{k+1}) = sum_i (-1)^i phi(.., a_i a_{i+1}, ..)
/// + (-1)^{k+1} phi(a_{k+1} a_0, a_1, .., a_k).
inline Cochain cochain_b(const Group& G, const Cochain& phi) {
  const int k = phi.arity() - 1;
  return Cochain(k + 2, [G, phi, k](const std::vector<Key>& s) {
    std::vector<AlgebraElem> a;
    for (const auto& x : s) a.push_back(slot_elem(x));
    Scalar total;
    for (int i = 0; i <= k; ++i) {
      Cochain::Tuple t;
      for (int j = 0; j < i; ++j) t.push_back(a[j]);
      t.push_back(convolve(G, a[i], a[i + 1]));
      for (int j = i + 2; j <= k + 1; ++j) t.push_back(a[j]);
      Scalar v = phi(t);
      total += (i & 1) ? -v : v;
    }
    Cochain::Tuple t{convolve(G, a[k + 1], a[0])};
    for (int j = 1; j <= k; ++j) t.push_back(a[j]);
    Scalar v = phi(t);
    total += ((k + 1) & 1) ? -v : v;
    return total;
  });
}

/// Connes' operator on normalized cochains:
/// (B phi)(a_0..a_{k-1}) = sum_i (-1)^{(k-1) i} phi(1, a_i, .., a_{k-1}, a_0, .., a_{i-1}).
inline Cochain cochain_B(const Cochain& phi) {
  const int k = phi.arity() - 1;
  if (k < 1) return Cochain::zero(0);
  return Cochain(k, [phi, k](const std::vector<Key>& s) {
    Scalar total;
    for (int i = 0; i < k; ++i) {
      std::vector<Key> t{unit_slot()};
      for (int j = 0; j < k; ++j) t.push_back(s[(i + j) % k]);
      Scalar v = phi.basis(t);
      total += (((k - 1) * i) & 1) ? -v : v;
    }
    return total;
  });
}

/// Dirichlet integral over the standard simplex: i_0! .. i_k! / (k + sum i)!.
inline Rational simplex_integrate(std::span<const int> exps) {
  const int k = static_cast<int>(exps.size()) - 1;
  Rational num(1);
  int sum = 0;
  for (int e : exps) {
    if (e < 0) throw std::invalid_argument("negative simplex exponent");
    num *= factorial(e);
    sum += e;
  }
  return num / factorial(k + sum);
}

/// Number of curvature insertions J = (n + 2q - k)/2 needed to reach the top
/// degree, or -1 when the degree cannot be reached.
inline int jlo_insertions(int n, int q, int k) {
  int r = n + 2 * q - k;
  if (r < 0 || (r & 1)) return -1;
  return r / 2;
}

/// JLO value int_{Delta^k} trace(rho(a_0) e^{-t_0 Theta} D rho(a_1) ... e^{-t_k Theta})
/// with the trace twisted by gamma = X0^q. Each exponential is expanded; all
/// monomials of total degree J share the weight (-1)^J / (k + J)!.
inline Scalar jlo_value(const CurvedDGA& A, const std::vector<AlgebraElem>& a, int q = 0) {
  const int k = static_cast<int>(a.size()) - 1;
  const int J = jlo_insertions(A.dim(), q, k);
  if (J < 0) return {};
  if (J > (A.dim() + 2 * q + 1) / 2) throw std::logic_error("curvature insertion bound exceeded");
  const int r = A.rank();
  std::vector<Form> Y(k + 1);
  for (int i = 1; i <= k; ++i) {
    Y[i] = A.D(A.rho(a[i]));
    if (Y[i].is_zero()) return {};
  }
  auto theta_r_chain = [&A](std::vector<Form> P) {
    // R[s] = sum_j Theta_r^j P[s - j]
    for (std::size_t s = 1; s < P.size(); ++s) P[s] += A.theta_right(P[s - 1]);
    return P;
  };
  // smooth part of a_0
  std::vector<Form> R(J + 1);
  R[0] = A.rho(a[0]);
  for (int s = 1; s <= J; ++s) R[s] = A.theta_right(R[s - 1]);
  // unit part of a_0: Theta^{i_0} acts from the left on the rest
  std::vector<Form> U;
  if (!a[0].unit.is_zero()) {
    if (k == 0) {
      // Theta^J as the element (F + mu)^J at the unit
      Form t = identity_matrix(r);
      Form fm = A.curvature_form() + A.moment_form();
      for (int s = 0; s < J; ++s) t = wedge(fm, t, GroupRule::left_const);
      return a[0].unit * Scalar(Rational(J & 1 ? -1 : 1) / factorial(J)) * A.trace(t, q) +
             (a[0].f.is_zero() ? Scalar() : Scalar(Rational(J & 1 ? -1 : 1) / factorial(J)) * A.trace(R[J], q));
    }
    U.resize(J + 1);
    std::vector<Form> L(J + 1);
    L[0] = Y[1];
    for (int s = 1; s <= J; ++s) L[s] = A.theta_left(L[s - 1]);
    U = theta_r_chain(L);
    for (auto& u : U) u = a[0].unit * u;
  }
  for (int i = 1; i <= k; ++i) {
    std::vector<Form> P(J + 1);
    for (int s = 0; s <= J; ++s)
      if (!R[s].is_zero()) P[s] = A.star(R[s], Y[i]);
    R = theta_r_chain(std::move(P));
    if (!U.empty() && i >= 2) {
      std::vector<Form> PU(J + 1);
      for (int s = 0; s <= J; ++s)
        if (!U[s].is_zero()) PU[s] = A.star(U[s], Y[i]);
      U = theta_r_chain(std::move(PU));
    }
  }
  Form top = U.empty() ? R[J] : R[J] + U[J];
  Scalar w(Rational(J & 1 ? -1 : 1) / factorial(k + J));
  return w * A.trace(top, q);
}

/// Ch^k of the cycle (A, trace_gamma, rho) as a memoized cochain.
inline Cochain jlo_generic(std::shared_ptr<const CurvedDGA> A, int k, int q = 0) {
  if (jlo_insertions(A->dim(), q, k) < 0) return Cochain::zero(k + 1);
  return Cochain(
      k + 1,
      [A, q](const std::vector<Key>& s) {
        std::vector<AlgebraElem> a;
        for (const auto& x : s) a.push_back(slot_elem(x));
        return jlo_value(*A, a, q);
      },
      true);
}

/// Value of an element of A^+ at a group element: a scalar function on the torus.
inline Form value_at(const AlgebraElem& a, int h) {
  std::vector<Form::Term> t;
  for (const auto& [k, c] : a.f.terms()) {
    if (k.g != h) continue;
    Key nk = k;
    nk.g = 0;
    t.emplace_back(nk, c);
  }
  Form r = Form::from_terms(std::move(t));
  if (h == 0 && !a.unit.is_zero()) r += Form(Key{}, a.unit);
  return r;
}

namespace detail {

/// Calls visit(h) for every h in G^k.
template <class F>
void for_each_tuple(int order, int k, F visit) {
  std::vector<int> h(k, 0);
  while (true) {
    visit(h);
    int i = 0;
    while (i < k && ++h[i] == order) h[i++] = 0;
    if (i == k) break;
  }
}

}  // namespace detail

/// Top-degree untwisted Chern cocycle
/// (1/n!) int_M sum_h a_0(h_1) h_1^* da_1(h_2) ^ ... ^ (h_1..h_n)^* da_n((h_1..h_n)^{-1}),
/// enumerated over G^n for finite groups. For the circle the group integrals
/// are Fourier convolutions of the d-forms evaluated at the unit.
inline Cochain chern_untwisted_top(const Group& G) {
  const int n = G.dim();
  return Cochain(
      n + 1,
      [G, n](const std::vector<Key>& s) -> Scalar {
        std::vector<AlgebraElem> a;
        for (const auto& x : s) a.push_back(slot_elem(x));
        for (int i = 1; i <= n; ++i)
          if (a[i].f.is_zero()) return {};
        const Scalar weight(Rational(1) / factorial(n));
        if (!G.is_finite()) {
          CurvedDGA A = CurvedDGA::untwisted(G);
          Form acc = a[0].f;
          for (int i = 1; i <= n; ++i) acc = A.star(acc, ext_d(a[i].f));
          Scalar v = A.trace(acc);
          if (!a[0].unit.is_zero() && n > 0) {
            Form rest = ext_d(a[1].f);
            for (int i = 2; i <= n; ++i) rest = A.star(rest, ext_d(a[i].f));
            v += a[0].unit * A.trace(rest);
          }
          return weight * v;
        }
        Scalar total;
        detail::for_each_tuple(G.order(), n, [&](const std::vector<int>& h) {
          Form w = value_at(a[0], n == 0 ? 0 : h[0]);
          int prod = 0;
          for (int i = 1; i <= n && !w.is_zero(); ++i) {
            prod = G.mul(prod, h[i - 1]);
            int arg = i < n ? h[i] : G.inv(prod);
            w = wedge(w, act(G, prod, ext_d(value_at(a[i], arg))));
          }
          total += integrate_top(w, n);
        });
        return weight * total;
      },
      true);
}

/// Closed form of the twisted Chern cocycle for finite groups:
/// sum over i_0 + .. + i_k = (n-k)/2 of (-1)^{(n-k)/2} / ((n+k)/2)! times
/// sum_h int tr( a_0(h_1) (h_1^*F)^{i_0} ^ h_1^*(da_1(h_2) + a_1(h_2) delta(h_2)) ^ ((h_1 h_2)^*F)^{i_1} ^ ... ^ F^{i_k} ).
inline Cochain chern_twisted_closed(const Bundle& E, const Connection& nabla, int k) {
  const Group& G = E.group();
  if (!G.is_finite()) throw std::invalid_argument("closed form requires a finite group");
  const int n = G.dim();
  if (k < 0 || k > n || ((n - k) & 1)) return Cochain::zero(k + 1);
  const int J = (n - k) / 2;
  Form F = curvature(nabla);
  std::vector<Form> gF, delta;
  for (int g = 0; g < G.order(); ++g) {
    gF.push_back(E.act(g, F));
    delta.push_back(delta_of_g(E, nabla, g));
  }
  const int r = E.rank();
  // compositions of J into k+1 parts
  std::vector<std::vector<int>> comps;
  std::vector<int> cur(k + 1, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == k) {
      cur[i] = left;
      comps.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, J);
  Scalar weight(Rational(J & 1 ? -1 : 1) / factorial((n + k) / 2));
  return Cochain(
      k + 1,
      [=](const std::vector<Key>& s) -> Scalar {
        std::vector<AlgebraElem> a;
        for (const auto& x : s) a.push_back(slot_elem(x));
        Scalar total;
        detail::for_each_tuple(G.order(), k, [&](const std::vector<int>& h) {
          // group positions: slot i sits at arg[i], the running product after slot i is prod[i]
          std::vector<int> arg(k + 1), prod(k + 1);
          arg[0] = k == 0 ? 0 : h[0];
          prod[0] = arg[0];
          for (int i = 1; i <= k; ++i) {
            arg[i] = i < k ? h[i] : G.inv(prod[i - 1]);
            prod[i] = G.mul(prod[i - 1], arg[i]);
          }
          std::vector<Form> slot(k + 1);
          slot[0] = scalar_to_end(value_at(a[0], arg[0]), r);
          if (slot[0].is_zero()) return;
          for (int i = 1; i <= k; ++i) {
            Form v = value_at(a[i], arg[i]);
            Form body = scalar_to_end(ext_d(v), r) + wedge(scalar_to_end(v, r), delta[arg[i]]);
            slot[i] = E.act(prod[i - 1], body);
            if (slot[i].is_zero()) return;
          }
          for (const auto& c : comps) {
            Form w = slot[0];
            for (int i = 0; i <= k && !w.is_zero(); ++i) {
              if (i > 0) w = wedge(w, slot[i]);
              for (int t = 0; t < c[i]; ++t) w = wedge(w, gF[prod[i]]);
            }
            total += integrate_top(trace_end(w), n);
          }
        });
        return weight * total;
      },
      true);
}

/// Simplified formula for a G-invariant connection:
/// (-1)^J / (k! J!) int tr(F^J) ^ sum_h a_0((h_1..h_k)^{-1}) ((h_1..h_k)^{-1})^* da_1(h_1) ^ .. ^ (h_k^{-1})^* da_k(h_k).
inline Cochain chern_twisted_invariant(const Bundle& E, const Connection& nabla, int k) {
  const Group& G = E.group();
  if (!G.is_finite()) throw std::invalid_argument("invariant formula requires a finite group");
  const int n = G.dim();
  if (k < 0 || k > n || ((n - k) & 1)) return Cochain::zero(k + 1);
  const int J = (n - k) / 2;
  Form trF = identity_matrix(E.rank());
  Form F = curvature(nabla);
  for (int t = 0; t < J; ++t) trF = wedge(trF, F);
  trF = trace_end(trF);
  Scalar weight(Rational(J & 1 ? -1 : 1) / (factorial(k) * factorial(J)));
  return Cochain(
      k + 1,
      [=](const std::vector<Key>& s) -> Scalar {
        std::vector<AlgebraElem> a;
        for (const auto& x : s) a.push_back(slot_elem(x));
        Scalar total;
        detail::for_each_tuple(G.order(), k, [&](const std::vector<int>& h) {
          // suffix products h_i .. h_k
          std::vector<int> suffix(k + 2, 0);
          for (int i = k; i >= 1; --i) suffix[i] = G.mul(h[i - 1], suffix[i + 1]);
          int all = suffix[1];
          Form w = value_at(a[0], G.inv(all));
          for (int i = 1; i <= k && !w.is_zero(); ++i)
            w = wedge(w, act(G, G.inv(suffix[i]), ext_d(value_at(a[i], h[i - 1]))));
          total += integrate_top(wedge(trF, w), n);
        });
        return weight * total;
      },
      true);
}

}  // namespace equichern
