#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "equichern/lincomb.hpp"
#include "equichern/scalar.hpp"

namespace equichern {

inline constexpr int kMaxDim = 4;

/// Fourier mode k in Z^n; entries past the torus dimension stay zero.
using Mode = std::array<std::int16_t, kMaxDim>;

inline Mode operator+(const Mode& a, const Mode& b) {
  Mode r{};
  for (int i = 0; i < kMaxDim; ++i) r[i] = static_cast<std::int16_t>(a[i] + b[i]);
  return r;
}
inline Mode operator-(const Mode& a) {
  Mode r{};
  for (int i = 0; i < kMaxDim; ++i) r[i] = static_cast<std::int16_t>(-a[i]);
  return r;
}
inline bool is_zero_mode(const Mode& a) {
  for (auto x : a)
    if (x != 0) return false;
  return true;
}
inline int dot(const Mode& a, const Mode& b) {
  int s = 0;
  for (int i = 0; i < kMaxDim; ++i) s += a[i] * b[i];
  return s;
}
inline Mode make_mode(std::initializer_list<int> ks) {
  Mode m{};
  int i = 0;
  for (int k : ks) m[i++] = static_cast<std::int16_t>(k);
  return m;
}

/// Basis key of a form-valued function. The same key serves all layers:
///   g    finite-group element index, or circle Fourier mode in the group variable
///   u    power of the Lie algebra coordinate (Sym of the dual)
///   row, col  matrix entry for End(E)-valued forms
///   mask index set I of dx_I (bit i = dx_{i+1})
///   k    Fourier mode on the torus
/// A term with coefficient c means c * [g] * u^u * E_{row,col} * e^{tau k.x} dx_I.
struct Key {
  std::int32_t g = 0;
  std::int16_t u = 0;
  std::uint8_t row = 0;
  std::uint8_t col = 0;
  std::uint8_t mask = 0;
  Mode k{};

  int degree() const { return std::popcount(static_cast<unsigned>(mask)); }
  auto operator<=>(const Key&) const = default;
};

using Form = LinComb<Key>;

inline Form form_term(const Scalar& c, const Mode& k, unsigned mask = 0) {
  Key key;
  key.k = k;
  key.mask = static_cast<std::uint8_t>(mask);
  return Form(key, c);
}

/// Sign of dx_I ^ dx_J rearranged to dx_{I u J}; zero when I and J meet.
inline int wedge_sign(unsigned I, unsigned J) {
  if (I & J) return 0;
  int swaps = 0;
  for (unsigned j = J; j != 0; j &= j - 1) {
    unsigned bit = j & (~j + 1);
    swaps += std::popcount(I & ~((bit << 1) - 1));
  }
  return (swaps & 1) ? -1 : 1;
}

/// How the group arguments of two factors combine in a pointwise product.
enum class GroupRule {
  same,        // finite group: both factors at the same element
  add,         // circle: Fourier modes add
  left_const,  // left factor is constant in g, result sits at the right key
  right_const  // right factor is constant in g, result sits at the left key
};

/// Wedge kernel: `gsel(ka, kb)` returns the group key of the product term or
/// nullopt to drop the pair. Matrix indices multiply, u-degrees add.
template <class GSel>
Form wedge_with(const Form& a, const Form& b, GSel gsel) {
  std::vector<Form::Term> out;
  out.reserve(a.size() * b.size());
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      if (ka.col != kb.row) continue;
      int s = wedge_sign(ka.mask, kb.mask);
      if (s == 0) continue;
      std::optional<std::int32_t> g = gsel(ka, kb);
      if (!g) continue;
      Key k;
      k.g = *g;
      k.u = static_cast<std::int16_t>(ka.u + kb.u);
      k.row = ka.row;
      k.col = kb.col;
      k.mask = static_cast<std::uint8_t>(ka.mask | kb.mask);
      k.k = ka.k + kb.k;
      Scalar c = ca * cb;
      out.emplace_back(k, s > 0 ? std::move(c) : -c);
    }
  }
  return Form::from_terms(std::move(out));
}

/// Wedge of (matrix-valued) forms with matrix multiplication on row/col and
/// the given combination rule for the group argument; u-degrees add.
inline Form wedge(const Form& a, const Form& b, GroupRule rule = GroupRule::add) {
  return wedge_with(a, b, [rule](const Key& ka, const Key& kb) -> std::optional<std::int32_t> {
    switch (rule) {
      case GroupRule::same:
        if (ka.g != kb.g) return std::nullopt;
        return ka.g;
      case GroupRule::add:
        return ka.g + kb.g;
      case GroupRule::left_const:
        return kb.g;
      case GroupRule::right_const:
        return ka.g;
    }
    return std::nullopt;
  });
}

/// Exterior derivative: d(e_k dx_I) = sum_j tau k_j e_k dx_j ^ dx_I.
inline Form ext_d(const Form& a) {
  std::vector<Form::Term> out;
  const Scalar tau = Scalar::tau();
  for (const auto& [key, c] : a.terms()) {
    for (int j = 0; j < kMaxDim; ++j) {
      if (key.k[j] == 0 || (key.mask >> j) & 1u) continue;
      int before = std::popcount(static_cast<unsigned>(key.mask) & ((1u << j) - 1));
      Key nk = key;
      nk.mask = static_cast<std::uint8_t>(key.mask | (1u << j));
      Scalar v = tau * Scalar(Rational(key.k[j])) * c;
      out.emplace_back(nk, (before & 1) ? -v : v);
    }
  }
  return Form::from_terms(std::move(out));
}

/// Constant tangent vector field on the torus.
using TangentVector = std::vector<Rational>;

/// Interior product with a constant vector field.
inline Form contract(const TangentVector& v, const Form& a) {
  std::vector<Form::Term> out;
  for (const auto& [key, c] : a.terms()) {
    int pos = 0;
    for (int j = 0; j < kMaxDim; ++j) {
      if (!((key.mask >> j) & 1u)) continue;
      if (j < static_cast<int>(v.size()) && !v[j].is_zero()) {
        Key nk = key;
        nk.mask = static_cast<std::uint8_t>(key.mask & ~(1u << j));
        Scalar val = Scalar(v[j]) * c;
        out.emplace_back(nk, (pos & 1) ? -val : val);
      }
      ++pos;
    }
  }
  return Form::from_terms(std::move(out));
}

/// Zero-mode coefficient of dx_1 ^ ... ^ dx_n (torus volume 1).
inline Scalar integrate_top(const Form& a, int n) {
  const unsigned top = (1u << n) - 1;
  Scalar s;
  for (const auto& [key, c] : a.terms())
    if (key.mask == top && is_zero_mode(key.k)) s += c;
  return s;
}

/// Parts of a form of a given form degree.
inline Form degree_part(const Form& a, int p) {
  return a.filtered([p](const Key& k) { return k.degree() == p; });
}

inline std::string mode_str(const Mode& k, int n) {
  std::string s = "[";
  for (int i = 0; i < n; ++i) {
    if (i) s += ",";
    s += std::to_string(k[i]);
  }
  return s + "]";
}

inline std::string mask_str(unsigned mask) {
  std::string s = "{";
  bool first = true;
  for (int j = 0; j < kMaxDim; ++j) {
    if (!((mask >> j) & 1u)) continue;
    if (!first) s += ",";
    s += std::to_string(j + 1);
    first = false;
  }
  return s + "}";
}

/// Canonical text, one term per line: `coef * e[k1,k2] * dx{1,2}`. Non-trivial
/// group, u or matrix indices are appended as `* g[..] * u^.. * E[r,c]`.
inline std::string to_text(const Form& a, int n) {
  std::string s;
  for (const auto& [key, c] : a.terms()) {
    s += "(" + c.str() + ") * e" + mode_str(key.k, n) + " * dx" + mask_str(key.mask);
    if (key.g != 0) s += " * g[" + std::to_string(key.g) + "]";
    if (key.u != 0) s += " * u^" + std::to_string(key.u);
    if (key.row != 0 || key.col != 0) s += " * E[" + std::to_string(key.row) + "," + std::to_string(key.col) + "]";
    s += "\n";
  }
  return s;
}

/// x -> A x + b on T^n with b in (1/N) Z^n, stored as integer numerators.
class AffineMap {
 public:
  using Matrix = std::array<std::array<int, kMaxDim>, kMaxDim>;

  AffineMap() : AffineMap(0, identity_matrix(), {}, 1) {}
  AffineMap(int n, const Matrix& A, const std::array<int, kMaxDim>& b, int conductor)
      : n_(n), A_(A), b_(b), conductor_(conductor) {
    if (n < 0 || n > kMaxDim) throw std::invalid_argument("torus dimension out of range");
    long long det = determinant();
    if (det == 0) throw std::invalid_argument("affine map matrix is not invertible");
    if (det != 1) throw std::invalid_argument("affine map is not orientation preserving (det != 1)");
    for (int i = 0; i < n; ++i) b_[i] = ((b_[i] % conductor) + conductor) % conductor;
    build_table();
  }

  static Matrix identity_matrix() {
    Matrix m{};
    for (int i = 0; i < kMaxDim; ++i) m[i][i] = 1;
    return m;
  }
  static AffineMap identity(int n, int conductor = 1) { return AffineMap(n, identity_matrix(), {}, conductor); }

  int dim() const { return n_; }
  int conductor() const { return conductor_; }
  const Matrix& matrix() const { return A_; }
  const std::array<int, kMaxDim>& translation() const { return b_; }

  /// (this o other)(x) = A (A' x + b') + b.
  AffineMap compose(const AffineMap& other) const {
    int N = std::lcm(conductor_, other.conductor_);
    Matrix m{};
    std::array<int, kMaxDim> t{};
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j)
        for (int l = 0; l < n_; ++l) m[i][j] += A_[i][l] * other.A_[l][j];
      long long acc = static_cast<long long>(b_[i]) * (N / conductor_);
      for (int l = 0; l < n_; ++l) acc += static_cast<long long>(A_[i][l]) * other.b_[l] * (N / other.conductor_);
      t[i] = static_cast<int>(((acc % N) + N) % N);
    }
    for (int i = n_; i < kMaxDim; ++i) m[i][i] = 1;
    return AffineMap(n_, m, t, N);
  }

  friend bool operator==(const AffineMap& a, const AffineMap& b) {
    if (a.n_ != b.n_) return false;
    for (int i = 0; i < a.n_; ++i) {
      for (int j = 0; j < a.n_; ++j)
        if (a.A_[i][j] != b.A_[i][j]) return false;
      if (static_cast<long long>(a.b_[i]) * b.conductor_ != static_cast<long long>(b.b_[i]) * a.conductor_)
        return false;
    }
    return true;
  }

  /// Pulled-back mode A^T k and the phase exponent N k.b (mod N).
  std::pair<Mode, int> pull_mode(const Mode& k) const {
    Mode r{};
    long long ph = 0;
    for (int j = 0; j < n_; ++j) {
      int s = 0;
      for (int i = 0; i < n_; ++i) s += A_[i][j] * k[i];
      r[j] = static_cast<std::int16_t>(s);
      ph += static_cast<long long>(k[j]) * b_[j];
    }
    return {r, static_cast<int>(((ph % conductor_) + conductor_) % conductor_)};
  }

  /// f^* dx_I = sum_J det(A[I,J]) dx_J.
  const std::vector<std::pair<std::uint8_t, int>>& pull_mask(unsigned mask) const { return table_[mask]; }

 private:
  long long determinant() const {
    // Laplace expansion, fine for n <= 4
    std::vector<int> cols(n_);
    for (int i = 0; i < n_; ++i) cols[i] = i;
    return minor_det(0, (1u << n_) - 1);
  }
  long long minor_det(int row, unsigned cols) const {
    if (row == n_) return 1;
    long long s = 0;
    int sign = 1;
    for (int j = 0; j < n_; ++j) {
      if (!((cols >> j) & 1u)) continue;
      if (A_[row][j] != 0) s += sign * A_[row][j] * minor_det(row + 1, cols & ~(1u << j));
      sign = -sign;
    }
    return s;
  }
  void build_table() {
    for (unsigned I = 0; I < (1u << kMaxDim); ++I) {
      table_[I].clear();
      if (I >> n_) continue;
      // wedge of the rows f^*dx_i = sum_j A_ij dx_j, i in I ascending
      std::vector<std::pair<unsigned, int>> acc{{0u, 1}};
      for (int i = 0; i < n_; ++i) {
        if (!((I >> i) & 1u)) continue;
        std::vector<std::pair<unsigned, int>> next;
        for (auto [m, c] : acc) {
          for (int j = 0; j < n_; ++j) {
            if (A_[i][j] == 0) continue;
            int s = wedge_sign(m, 1u << j);
            if (s == 0) continue;
            unsigned nm = m | (1u << j);
            int val = s * c * A_[i][j];
            bool merged = false;
            for (auto& [mm, cc] : next)
              if (mm == nm) {
                cc += val;
                merged = true;
              }
            if (!merged) next.emplace_back(nm, val);
          }
        }
        acc = std::move(next);
      }
      for (auto [m, c] : acc)
        if (c != 0) table_[I].emplace_back(static_cast<std::uint8_t>(m), c);
    }
  }

  int n_ = 0;
  Matrix A_{};
  std::array<int, kMaxDim> b_{};
  int conductor_ = 1;
  std::array<std::vector<std::pair<std::uint8_t, int>>, (1u << kMaxDim)> table_;
};

/// Pullback of the form part of every term by f; g, u and matrix indices are
/// left untouched.
inline Form pullback(const AffineMap& f, const Form& a) {
  std::vector<Form::Term> out;
  out.reserve(a.size());
  for (const auto& [key, c] : a.terms()) {
    auto [k, ph] = f.pull_mode(key.k);
    Scalar base = ph == 0 ? c : Scalar::zeta(f.conductor(), ph) * c;
    for (auto [m, coef] : f.pull_mask(key.mask)) {
      Key nk = key;
      nk.k = k;
      nk.mask = m;
      out.emplace_back(nk, Scalar(Rational(coef)) * base);
    }
  }
  return Form::from_terms(std::move(out));
}

/// Pullback by the translation x -> x + g v with g a symbolic circle
/// parameter: each term picks up the group mode k.v.
inline Form pullback_circle(const Mode& v, const Form& a) {
  std::vector<Form::Term> out;
  out.reserve(a.size());
  for (const auto& [key, c] : a.terms()) {
    Key nk = key;
    nk.g += dot(key.k, v);
    out.emplace_back(nk, c);
  }
  return Form::from_terms(std::move(out));
}

}  // namespace equichern
