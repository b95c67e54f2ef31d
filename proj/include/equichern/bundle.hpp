#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "equichern/group.hpp"
#include "equichern/torus.hpp"

namespace equichern {

/// Multiplies every term of odd form degree by -1, i.e. w -> (-1)^{|w|} w.
inline Form parity(const Form& w) {
  std::vector<Form::Term> out;
  out.reserve(w.size());
  for (const auto& [k, c] : w.terms()) out.emplace_back(k, (k.degree() & 1) ? -c : c);
  return Form::from_terms(std::move(out));
}

/// r x r identity as a 0-form matrix.
inline Form identity_matrix(int rank) {
  std::vector<Form::Term> t;
  for (int i = 0; i < rank; ++i) {
    Key k;
    k.row = k.col = static_cast<std::uint8_t>(i);
    t.emplace_back(k, Scalar(1));
  }
  return Form::from_terms(std::move(t));
}

/// Scalar form placed on the diagonal of End(C^r).
inline Form scalar_to_end(const Form& f, int rank) {
  std::vector<Form::Term> t;
  for (const auto& [k, c] : f.terms())
    for (int i = 0; i < rank; ++i) {
      Key nk = k;
      nk.row = nk.col = static_cast<std::uint8_t>(i);
      t.emplace_back(nk, c);
    }
  return Form::from_terms(std::move(t));
}

/// Matrix trace; the result has row = col = 0.
inline Form trace_end(const Form& w) {
  std::vector<Form::Term> t;
  for (const auto& [k, c] : w.terms()) {
    if (k.row != k.col) continue;
    Key nk = k;
    nk.row = nk.col = 0;
    t.emplace_back(nk, c);
  }
  return Form::from_terms(std::move(t));
}

/// Equivariant structure on the trivial bundle T^n x C^r. Sections transform
/// as (g.s)(x) = U(g,x) s(xg), so U(gh) = U(g) f_g^*U(h). For finite groups U
/// is monomial with single-mode entries; for the circle U(g) = diag(e^{tau chi_i g}).
class Bundle {
 public:
  Bundle() = default;

  static Bundle trivial(const Group& G, int rank = 1) {
    if (G.is_finite()) return finite(G, std::vector<Form>(G.order(), identity_matrix(rank)), rank);
    return circle(G, std::vector<int>(rank, 0));
  }

  static Bundle finite(const Group& G, std::vector<Form> U, int rank) {
    if (!G.is_finite()) throw std::invalid_argument("matrix cocycle requires a finite group");
    if (static_cast<int>(U.size()) != G.order()) throw std::invalid_argument("cocycle needs one matrix per element");
    Bundle E;
    E.G_ = G;
    E.rank_ = rank;
    E.U_ = std::move(U);
    for (const auto& u : E.U_) E.Uinv_.push_back(monomial_inverse(u, rank));
    if (!(E.U_[0] == identity_matrix(rank))) throw std::invalid_argument("cocycle is not the identity at the unit");
    for (int g = 0; g < G.order(); ++g)
      for (int h = 0; h < G.order(); ++h)
        if (!(E.U_[G.mul(g, h)] == wedge(E.U_[g], pullback(G.action(g), E.U_[h]))))
          throw std::invalid_argument("cocycle identity U(gh) = U(g) g^*U(h) fails");
    return E;
  }

  static Bundle circle(const Group& G, std::vector<int> chi) {
    if (G.is_finite()) throw std::invalid_argument("character cocycle requires the circle group");
    Bundle E;
    E.G_ = G;
    E.rank_ = static_cast<int>(chi.size());
    E.chi_ = std::move(chi);
    return E;
  }

  const Group& group() const { return G_; }
  int rank() const { return rank_; }
  const Form& U(int g) const { return U_.at(g); }
  const Form& Uinv(int g) const { return Uinv_.at(g); }
  const std::vector<int>& characters() const { return chi_; }

  /// g^*w = U(g) f_g^*w U(g)^{-1} for a finite group element.
  Form act(int g, const Form& w) const {
    if (g == 0) return w;
    Form p = pullback(G_.action(g), w);
    return wedge(wedge(U_[g], p, GroupRule::left_const), Uinv_[g], GroupRule::right_const);
  }

  /// Group-mode shift picked up by a term under the symbolic circle action.
  int circle_shift(const Key& k) const { return dot(k.k, G_.direction()) + chi_[k.row] - chi_[k.col]; }

  /// g^*w with g the symbolic circle variable: each term gains the g-mode shift.
  Form act_circle(const Form& w) const {
    std::vector<Form::Term> out;
    out.reserve(w.size());
    for (const auto& [k, c] : w.terms()) {
      Key nk = k;
      nk.g += circle_shift(k);
      out.emplace_back(nk, c);
    }
    return Form::from_terms(std::move(out));
  }

  /// Lie derivative L_X w = d/dt exp(tX)^*w at t = 0, X = u X0 (circle only).
  Form lie_derivative(const Form& w) const {
    if (G_.is_finite()) return {};
    std::vector<Form::Term> out;
    const Scalar tau = Scalar::tau();
    for (const auto& [k, c] : w.terms()) {
      int s = circle_shift(k);
      if (s == 0) continue;
      Key nk = k;
      nk.u = static_cast<std::int16_t>(k.u + 1);
      out.emplace_back(nk, tau * Scalar(s) * c);
    }
    return Form::from_terms(std::move(out));
  }

  /// Interior product with X_M = u v.
  Form contract_X(const Form& w) const {
    if (G_.is_finite()) return {};
    Form c = contract(G_.velocity(), w);
    std::vector<Form::Term> out;
    for (const auto& [k, v] : c.terms()) {
      Key nk = k;
      nk.u = static_cast<std::int16_t>(k.u + 1);
      out.emplace_back(nk, v);
    }
    return Form::from_terms(std::move(out));
  }

 private:
  static Form monomial_inverse(const Form& u, int rank) {
    std::vector<int> seen_row(rank, 0), seen_col(rank, 0);
    std::vector<Form::Term> out;
    for (const auto& [k, c] : u.terms()) {
      if (k.mask != 0 || k.u != 0 || k.g != 0) throw std::invalid_argument("cocycle entries must be functions");
      if (k.row >= rank || k.col >= rank) throw std::invalid_argument("cocycle entry outside the matrix");
      if (seen_row[k.row]++ || seen_col[k.col]++) throw std::invalid_argument("cocycle matrix is not monomial");
      Key nk = k;
      nk.row = k.col;
      nk.col = k.row;
      nk.k = -k.k;
      out.emplace_back(nk, c.inverse());
    }
    for (int i = 0; i < rank; ++i)
      if (!seen_row[i]) throw std::invalid_argument("cocycle matrix is singular");
    return Form::from_terms(std::move(out));
  }

  Group G_;
  int rank_ = 1;
  std::vector<Form> U_, Uinv_;
  std::vector<int> chi_;
};

/// Connection d + A on a bundle; A is a matrix of 1-forms.
struct Connection {
  Form A;
};

inline Form curvature(const Connection& c) { return ext_d(c.A) + wedge(c.A, c.A); }

/// d_{nabla^End} w = dw + A ^ w - (-1)^{|w|} w ^ A, for w possibly depending on g.
inline Form d_nabla_end(const Connection& c, const Form& w) {
  return ext_d(w) + wedge(c.A, w, GroupRule::left_const) - wedge(parity(w), c.A, GroupRule::right_const);
}

/// Connection form of g^*nabla = U f_g^*nabla U^{-1}: U f^*A U^{-1} - dU U^{-1}.
inline Form pulled_connection(const Bundle& E, const Connection& c, int g) {
  return E.act(g, c.A) - wedge(ext_d(E.U(g)), E.Uinv(g));
}

/// delta(g) = nabla - g^*nabla.
inline Form delta_of_g(const Bundle& E, const Connection& c, int g) { return c.A - pulled_connection(E, c, g); }

/// delta as a function of the symbolic circle variable (g-modes in the keys).
inline Form delta_circle(const Bundle& E, const Connection& c) { return c.A - E.act_circle(c.A); }

/// delta for every element at once, keyed by the element (finite) or by g-mode (circle).
inline Form delta_family(const Bundle& E, const Connection& c) {
  if (!E.group().is_finite()) return delta_circle(E, c);
  Accum<Key> acc;
  for (int g = 0; g < E.group().order(); ++g) {
    Form d = delta_of_g(E, c, g);
    for (const auto& [k, v] : d.terms()) {
      Key nk = k;
      nk.g = g;
      acc.add(nk, v);
    }
  }
  return acc.finish();
}

/// mu(X) = nabla_{X_M} - L_X at X = u X0: u (iota_v A - diag(tau chi)). Zero for finite groups.
inline Form moment(const Bundle& E, const Connection& c) {
  if (E.group().is_finite()) return {};
  Form r = E.contract_X(c.A);
  std::vector<Form::Term> t;
  for (int i = 0; i < E.rank(); ++i) {
    if (E.characters()[i] == 0) continue;
    Key k;
    k.u = 1;
    k.row = k.col = static_cast<std::uint8_t>(i);
    t.emplace_back(k, -(Scalar::tau() * Scalar(E.characters()[i])));
  }
  return r + Form::from_terms(std::move(t));
}

/// G-invariant connection obtained by averaging g^*nabla over the group.
inline Connection average_connection(const Bundle& E, const Connection& c) {
  const Group& G = E.group();
  if (G.is_finite()) {
    Form sum;
    for (int g = 0; g < G.order(); ++g) sum += pulled_connection(E, c, g);
    return {Scalar(Rational(1, G.order())) * sum};
  }
  return {E.act_circle(c.A).filtered([](const Key& k) { return k.g == 0; })};
}

}  // namespace equichern
