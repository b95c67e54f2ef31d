#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "equichern/torus.hpp"

namespace equichern {

/// A finite group acting on T^n through affine maps, or the circle R/Z acting
/// by translation x.g = x + g v. The action is a right action: the map of the
/// product gh is f_h o f_g. Finite groups are renumbered so the unit is 0.
class Group {
 public:
  enum class Kind { finite, circle };

  static Group finite(int dim, int conductor, std::vector<std::string> names, std::vector<std::vector<int>> table,
                      std::vector<AffineMap> action) {
    const int m = static_cast<int>(names.size());
    if (m == 0) throw std::invalid_argument("group has no elements");
    if (static_cast<int>(table.size()) != m || static_cast<int>(action.size()) != m)
      throw std::invalid_argument("multiplication table or action has the wrong size");
    for (const auto& row : table) {
      if (static_cast<int>(row.size()) != m) throw std::invalid_argument("multiplication table is not square");
      for (int x : row)
        if (x < 0 || x >= m) throw std::invalid_argument("multiplication table entry out of range");
    }
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c)
          if (table[table[a][b]][c] != table[a][table[b][c]]) throw std::invalid_argument("not associative");
    int unit = -1;
    for (int e = 0; e < m && unit < 0; ++e) {
      bool ok = true;
      for (int a = 0; a < m && ok; ++a) ok = table[e][a] == a && table[a][e] == a;
      if (ok) unit = e;
    }
    if (unit < 0) throw std::invalid_argument("no unit element");
    for (int a = 0; a < m; ++a) {
      bool has = false;
      for (int b = 0; b < m; ++b) has = has || (table[a][b] == unit && table[b][a] == unit);
      if (!has) throw std::invalid_argument("element without inverse");
    }
    // renumber so that the unit comes first
    std::vector<int> perm(m), back(m);
    perm[0] = unit;
    for (int a = 0, j = 1; a < m; ++a)
      if (a != unit) perm[j++] = a;
    for (int i = 0; i < m; ++i) back[perm[i]] = i;

    Group G;
    G.kind_ = Kind::finite;
    G.dim_ = dim;
    G.conductor_ = conductor;
    G.names_.resize(m);
    G.mul_.assign(m, std::vector<int>(m));
    G.inv_.resize(m);
    G.action_.resize(m);
    for (int i = 0; i < m; ++i) {
      G.names_[i] = names[perm[i]];
      G.action_[i] = action[perm[i]];
      if (G.action_[i].dim() != dim) throw std::invalid_argument("action map has the wrong dimension");
      for (int j = 0; j < m; ++j) G.mul_[i][j] = back[table[perm[i]][perm[j]]];
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (G.mul_[i][j] == 0) G.inv_[i] = j;
    if (!(G.action_[0] == AffineMap::identity(dim))) throw std::invalid_argument("unit does not act trivially");
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (!(G.action_[G.mul_[i][j]] == G.action_[j].compose(G.action_[i])))
          throw std::invalid_argument("action is not a homomorphism");
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (G.mul_[i][j] != G.mul_[j][i]) throw std::invalid_argument("only abelian groups are supported");
    return G;
  }

  static Group circle(int dim, const Mode& v) {
    Group G;
    G.kind_ = Kind::circle;
    G.dim_ = dim;
    G.v_ = v;
    return G;
  }

  static Group trivial(int dim) { return finite(dim, 1, {"e"}, {{0}}, {AffineMap::identity(dim)}); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  int dim() const { return dim_; }
  int conductor() const { return conductor_; }
  int order() const { return static_cast<int>(mul_.size()); }
  const std::string& name(int g) const { return names_.at(g); }
  int mul(int a, int b) const { return mul_[a][b]; }
  int inv(int a) const { return inv_[a]; }
  const AffineMap& action(int g) const { return action_[g]; }
  const Mode& direction() const { return v_; }

  /// Fundamental vector field X_M of the generator X0 of the circle Lie algebra.
  TangentVector velocity() const {
    TangentVector t(dim_);
    if (kind_ == Kind::circle)
      for (int i = 0; i < dim_; ++i) t[i] = Rational(v_[i]);
    return t;
  }

 private:
  Kind kind_ = Kind::finite;
  int dim_ = 0;
  int conductor_ = 1;
  std::vector<std::string> names_;
  std::vector<std::vector<int>> mul_;
  std::vector<int> inv_;
  std::vector<AffineMap> action_;
  Mode v_{};
};

/// g^* on forms for a finite group element (g keys untouched).
inline Form act(const Group& G, int g, const Form& a) {
  if (g == 0) return a;
  return pullback(G.action(g), a);
}

/// g^* for the circle with g symbolic: each term is multiplied by the
/// group-variable phase e^{tau g (k.v)}.
inline Form act_circle(const Group& G, const Form& a) { return pullback_circle(G.direction(), a); }

/// Haar integral over the group variable: counting measure for finite groups,
/// zero-mode extraction for the circle. The result has g key 0.
inline Form haar_integrate(const Group& G, const Form& f) {
  std::vector<Form::Term> out;
  for (const auto& [k, c] : f.terms()) {
    if (!G.is_finite() && k.g != 0) continue;
    Key nk = k;
    nk.g = 0;
    out.emplace_back(nk, c);
  }
  return Form::from_terms(std::move(out));
}

/// f(g) -> f(g^{-1}).
inline Form invert_argument(const Group& G, const Form& f) {
  std::vector<Form::Term> out;
  for (const auto& [k, c] : f.terms()) {
    Key nk = k;
    nk.g = G.is_finite() ? G.inv(k.g) : -k.g;
    out.emplace_back(nk, c);
  }
  return Form::from_terms(std::move(out));
}

/// Element of the unitized crossed product: a multiple of the adjoined unit
/// plus a function on G x T^n (0-form terms keyed by group element or group
/// mode and torus mode).
struct AlgebraElem {
  Scalar unit;
  Form f;

  static AlgebraElem one() { return {Scalar(1), {}}; }
  static AlgebraElem basis(std::int32_t g, const Mode& k, Scalar c = Scalar(1)) {
    Key key;
    key.g = g;
    key.k = k;
    return {{}, Form(key, std::move(c))};
  }
  bool is_zero() const { return unit.is_zero() && f.is_zero(); }

  friend AlgebraElem operator+(const AlgebraElem& a, const AlgebraElem& b) { return {a.unit + b.unit, a.f + b.f}; }
  friend AlgebraElem operator-(const AlgebraElem& a, const AlgebraElem& b) { return {a.unit - b.unit, a.f - b.f}; }
  friend AlgebraElem operator*(const Scalar& s, const AlgebraElem& a) { return {s * a.unit, s * a.f}; }
  friend bool operator==(const AlgebraElem& a, const AlgebraElem& b) { return a.unit == b.unit && a.f == b.f; }
};

/// (f1 * f2)(x, g) = int_G f1(x, h) f2(xh, h^{-1} g) dh on the smooth parts.
inline Form convolve_smooth(const Group& G, const Form& a, const Form& b) {
  if (G.is_finite()) {
    std::vector<Form::Term> out;
    for (const auto& [ka, ca] : a.terms()) {
      Form pb = act(G, ka.g, b);
      for (const auto& [kb, cb] : pb.terms()) {
        Key k;
        k.g = G.mul(ka.g, kb.g);
        k.k = ka.k + kb.k;
        out.emplace_back(k, ca * cb);
      }
    }
    return Form::from_terms(std::move(out));
  }
  const Mode& v = G.direction();
  return wedge_with(a, b, [&v](const Key& ka, const Key& kb) -> std::optional<std::int32_t> {
    if (ka.g + dot(kb.k, v) != kb.g) return std::nullopt;
    return kb.g;
  });
}

inline AlgebraElem convolve(const Group& G, const AlgebraElem& a, const AlgebraElem& b) {
  AlgebraElem r;
  r.unit = a.unit * b.unit;
  r.f = convolve_smooth(G, a.f, b.f) + a.unit * b.f + b.unit * a.f;
  return r;
}

/// Basis of the smooth part with group support everywhere (finite) or group
/// modes in [-band, band] (circle) and torus modes in the band box.
inline std::vector<AlgebraElem> algebra_basis(const Group& G, int band, int group_band = 0) {
  std::vector<Mode> modes;
  const int n = G.dim();
  std::vector<int> cur(n, -band);
  if (n == 0) {
    modes.push_back(Mode{});
  } else {
    while (true) {
      Mode m{};
      for (int i = 0; i < n; ++i) m[i] = static_cast<std::int16_t>(cur[i]);
      modes.push_back(m);
      int i = 0;
      while (i < n && cur[i] == band) cur[i++] = -band;
      if (i == n) break;
      ++cur[i];
    }
  }
  std::vector<AlgebraElem> out;
  if (G.is_finite()) {
    for (int g = 0; g < G.order(); ++g)
      for (const auto& m : modes) out.push_back(AlgebraElem::basis(g, m));
  } else {
    for (int g = -group_band; g <= group_band; ++g)
      for (const auto& m : modes) out.push_back(AlgebraElem::basis(g, m));
  }
  return out;
}

}  // namespace equichern
