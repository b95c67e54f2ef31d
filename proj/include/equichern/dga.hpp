#pragma once

#include <optional>
#include <vector>

#include "equichern/bundle.hpp"
#include "equichern/group.hpp"
#include "equichern/torus.hpp"

namespace equichern {

/// The externally curved DGA of End(E)-valued equivariant forms on a torus
/// with a group action. The untwisted algebra is the rank-one trivial bundle
/// with the zero connection.
///
/// Elements are Forms whose keys carry the group argument (element index or
/// circle g-mode), the u-degree, the matrix entry and the torus form. Total
/// degree is form degree + 2 u.
class CurvedDGA {
 public:
  CurvedDGA(Bundle E, Connection nabla) : E_(std::move(E)), nabla_(std::move(nabla)) {
    const Group& G = E_.group();
    F_ = curvature(nabla_);
    mu_ = moment(E_, nabla_);
    delta_ = delta_family(E_, nabla_);
    if (G.is_finite()) {
      Accum<Key> acc;
      for (int g = 0; g < G.order(); ++g) {
        Form moved = E_.act(g, F_);
        for (const auto& [k, v] : moved.terms()) {
          Key nk = k;
          nk.g = g;
          acc.add(nk, v);
        }
      }
      gF_ = acc.finish();
    } else {
      gF_ = E_.act_circle(F_) + E_.act_circle(mu_);
    }
  }

  static CurvedDGA untwisted(const Group& G) { return CurvedDGA(Bundle::trivial(G, 1), Connection{}); }

  const Bundle& bundle() const { return E_; }
  const Group& group() const { return E_.group(); }
  const Connection& connection() const { return nabla_; }
  const Form& curvature_form() const { return F_; }
  const Form& moment_form() const { return mu_; }
  /// delta(g) for all g, keyed by element or g-mode.
  const Form& delta() const { return delta_; }
  int rank() const { return E_.rank(); }
  int dim() const { return group().dim(); }

  /// (a * b)(g) = int_G a(h) ^ h^*b(h^{-1} g) dh.
  Form star(const Form& a, const Form& b) const {
    const Group& G = group();
    if (G.is_finite()) {
      std::vector<Form::Term> out;
      std::vector<std::optional<Form>> moved(G.order());
      for (const auto& [ka, ca] : a.terms()) {
        if (!moved[ka.g]) moved[ka.g] = E_.act(ka.g, b);
        Form one(Key{0, ka.u, ka.row, ka.col, ka.mask, ka.k}, ca);
        Form prod = wedge_with(one, *moved[ka.g], [&](const Key&, const Key& kb) -> std::optional<std::int32_t> {
          return G.mul(ka.g, kb.g);
        });
        for (const auto& t : prod.terms()) out.push_back(t);
      }
      return Form::from_terms(std::move(out));
    }
    return wedge_with(a, b, [this](const Key& ka, const Key& kb) -> std::optional<std::int32_t> {
      if (ka.g + E_.circle_shift(kb) != kb.g) return std::nullopt;
      return kb.g;
    });
  }

  /// D a = d_{nabla^End} a + (-1)^{|a|} a ^ delta(g) + iota_{X_M} a.
  Form D(const Form& a) const {
    GroupRule rule = group().is_finite() ? GroupRule::same : GroupRule::add;
    return d_nabla_end(nabla_, a) + wedge(parity(a), delta_, rule) + E_.contract_X(a);
  }

  /// Left multiplication by the curvature: the untwisted derivative term plus (F + mu) ^ a.
  Form theta_left(const Form& a) const {
    Form r = wedge(F_ + mu_, a, GroupRule::left_const);
    if (!group().is_finite()) {
      std::vector<Form::Term> out;
      const Scalar tau = Scalar::tau();
      for (const auto& [k, c] : a.terms()) {
        int s = E_.circle_shift(k) - k.g;
        if (s == 0) continue;
        Key nk = k;
        nk.u = static_cast<std::int16_t>(k.u + 1);
        out.emplace_back(nk, tau * Scalar(s) * c);
      }
      r += Form::from_terms(std::move(out));
    }
    return r;
  }

  /// Right multiplication by the curvature: a ^ (g^*F + g^*mu) plus the untwisted term.
  Form theta_right(const Form& a) const {
    GroupRule rule = group().is_finite() ? GroupRule::same : GroupRule::add;
    Form r = wedge(a, gF_, rule);
    if (!group().is_finite()) {
      std::vector<Form::Term> out;
      const Scalar tau = Scalar::tau();
      for (const auto& [k, c] : a.terms()) {
        if (k.g == 0) continue;
        Key nk = k;
        nk.u = static_cast<std::int16_t>(k.u + 1);
        out.emplace_back(nk, -(tau * Scalar(k.g) * c));
      }
      r += Form::from_terms(std::move(out));
    }
    return r;
  }

  /// Value at the group unit: the unit element (finite) or the sum over g-modes (circle).
  Form at_unit(const Form& a) const {
    const bool fin = group().is_finite();
    std::vector<Form::Term> out;
    for (const auto& [k, c] : a.terms()) {
      if (fin && k.g != 0) continue;
      Key nk = k;
      nk.g = 0;
      out.emplace_back(nk, c);
    }
    return Form::from_terms(std::move(out));
  }

  /// Closed graded trace int_M tr_E D_gamma(a)(e, 0) for gamma = X0^q.
  Scalar trace(const Form& a, int q = 0) const {
    Form e = at_unit(trace_end(a)).filtered([q](const Key& k) { return k.u == q; });
    return Scalar(factorial(q)) * integrate_top(e, dim());
  }

  /// rho(a) in degree 0: scalar functions placed on the diagonal.
  Form rho(const AlgebraElem& a) const { return scalar_to_end(a.f, rank()); }

 private:
  Bundle E_;
  Connection nabla_;
  Form F_, mu_, delta_, gF_;
};

}  // namespace equichern
