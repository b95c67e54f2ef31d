#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "equichern/scalar.hpp"

namespace equichern {

/// Finite formal linear combination of basis keys with Scalar coefficients.
/// Terms are kept sorted by key with no zero coefficients.
template <class K>
class LinComb {
 public:
  using Key = K;
  using Term = std::pair<K, Scalar>;

  LinComb() = default;
  LinComb(const K& k, Scalar c) {
    if (!c.is_zero()) t_.emplace_back(k, std::move(c));
  }

  /// Sorts, merges equal keys and drops zeros.
  static LinComb from_terms(std::vector<Term> terms) {
    LinComb r;
    if (terms.empty()) return r;
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    r.t_.reserve(terms.size());
    for (auto& t : terms) {
      if (!r.t_.empty() && r.t_.back().first == t.first) {
        r.t_.back().second += t.second;
      } else {
        if (!r.t_.empty() && r.t_.back().second.is_zero()) r.t_.pop_back();
        r.t_.push_back(std::move(t));
      }
    }
    if (!r.t_.empty() && r.t_.back().second.is_zero()) r.t_.pop_back();
    return r;
  }

  const std::vector<Term>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }

  Scalar coeff(const K& k) const {
    auto it = std::lower_bound(t_.begin(), t_.end(), k, [](const Term& t, const K& key) { return t.first < key; });
    if (it != t_.end() && it->first == k) return it->second;
    return {};
  }

  friend LinComb operator+(const LinComb& a, const LinComb& b) {
    if (a.t_.empty()) return b;
    if (b.t_.empty()) return a;
    LinComb r;
    r.t_.reserve(a.t_.size() + b.t_.size());
    std::size_t i = 0, j = 0;
    while (i < a.t_.size() || j < b.t_.size()) {
      if (j == b.t_.size() || (i < a.t_.size() && a.t_[i].first < b.t_[j].first)) {
        r.t_.push_back(a.t_[i++]);
      } else if (i == a.t_.size() || b.t_[j].first < a.t_[i].first) {
        r.t_.push_back(b.t_[j++]);
      } else {
        Scalar s = a.t_[i].second + b.t_[j].second;
        if (!s.is_zero()) r.t_.emplace_back(a.t_[i].first, std::move(s));
        ++i;
        ++j;
      }
    }
    return r;
  }
  LinComb operator-() const {
    LinComb r = *this;
    for (auto& t : r.t_) t.second = -t.second;
    return r;
  }
  friend LinComb operator-(const LinComb& a, const LinComb& b) { return a + (-b); }
  LinComb& operator+=(const LinComb& o) { return *this = *this + o; }
  LinComb& operator-=(const LinComb& o) { return *this = *this - o; }

  friend LinComb operator*(const Scalar& s, const LinComb& a) {
    if (s.is_zero()) return {};
    std::vector<Term> out;
    out.reserve(a.t_.size());
    for (const auto& [k, c] : a.t_) {
      Scalar v = s * c;
      if (!v.is_zero()) out.emplace_back(k, std::move(v));
    }
    LinComb r;
    r.t_ = std::move(out);
    return r;
  }

  template <class Pred>
  LinComb filtered(Pred pred) const {
    LinComb r;
    for (const auto& t : t_)
      if (pred(t.first)) r.t_.push_back(t);
    return r;
  }

  friend bool operator==(const LinComb& a, const LinComb& b) { return a.t_ == b.t_; }

 private:
  std::vector<Term> t_;
};

/// Accumulates terms in arbitrary order, then canonicalizes.
template <class K>
class Accum {
 public:
  void add(const K& k, Scalar c) {
    if (!c.is_zero()) t_.emplace_back(k, std::move(c));
  }
  void add(const LinComb<K>& a) {
    for (const auto& t : a.terms()) t_.push_back(t);
  }
  void add(const Scalar& s, const LinComb<K>& a) {
    if (s.is_zero()) return;
    for (const auto& [k, c] : a.terms()) add(k, s * c);
  }
  LinComb<K> finish() { return LinComb<K>::from_terms(std::move(t_)); }

 private:
  std::vector<typename LinComb<K>::Term> t_;
};

}  // namespace equichern
