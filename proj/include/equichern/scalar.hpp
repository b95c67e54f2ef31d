#pragma once

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace equichern {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Intermediate results are formed in 128 bits and reduced; anything that
/// still does not fit raises std::overflow_error rather than wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT: implicit by design
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) return from128(__int128(a.num_) + b.num_, 1);
    return from128(__int128(a.num_) * b.den_ + __int128(b.num_) * a.den_, __int128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) return from128(__int128(a.num_) - b.num_, 1);
    return from128(__int128(a.num_) * b.den_ - __int128(b.num_) * a.den_, __int128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) return from128(__int128(a.num_) * b.num_, 1);
    return from128(__int128(a.num_) * b.num_, __int128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from128(__int128(a.num_) * b.den_, __int128(a.den_) * b.num_);
  }
  Rational operator-() const { return from128(-__int128(num_), den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return __int128(a.num_) * b.den_ <=> __int128(b.num_) * a.den_;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  static std::int64_t narrow(__int128 v) {
    if (v > INT64_MAX || v < -INT64_MAX) throw std::overflow_error("rational overflow");
    return static_cast<std::int64_t>(v);
  }
  static Rational from128(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (d != 1) {
      __int128 g = gcd128(n, d);
      if (g > 1) {
        n /= g;
        d /= g;
      }
    }
    Rational r;
    r.num_ = narrow(n);
    r.den_ = n == 0 ? 1 : narrow(d);
    return r;
  }
  void assign(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    *this = from128(n, d);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational factorial(int n) {
  Rational r(1);
  for (int i = 2; i <= n; ++i) r *= Rational(i);
  return r;
}

/// Basis data for Q(zeta_N): the power basis 1, z, ..., z^{phi-1} and the
/// reduced coordinates of every power z^j, 0 <= j < N.
struct CycloField {
  int n = 1;
  int phi = 1;
  std::vector<std::vector<Rational>> power;
};

namespace detail {

inline std::vector<std::int64_t> cyclotomic_polynomial(int n) {
  // x^n - 1 divided by Phi_d for every proper divisor d.
  std::vector<std::int64_t> p(n + 1, 0);
  p[0] = -1;
  p[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    auto q = cyclotomic_polynomial(d);
    // exact division of p by monic q
    std::vector<std::int64_t> quot(p.size() - q.size() + 1, 0);
    for (int i = static_cast<int>(p.size()) - 1; i >= static_cast<int>(q.size()) - 1; --i) {
      std::int64_t c = p[i];
      int shift = i - (static_cast<int>(q.size()) - 1);
      quot[shift] = c;
      for (std::size_t j = 0; j < q.size(); ++j) p[shift + j] -= c * q[j];
    }
    p = quot;
  }
  return p;
}

inline std::unique_ptr<CycloField> build_field(int n) {
  auto f = std::make_unique<CycloField>();
  f->n = n;
  auto phi_poly = cyclotomic_polynomial(n);
  f->phi = static_cast<int>(phi_poly.size()) - 1;
  const int phi = f->phi;
  f->power.assign(n, std::vector<Rational>(phi));
  std::vector<Rational> cur(phi);
  cur[0] = 1;
  for (int j = 0; j < n; ++j) {
    f->power[j] = cur;
    // multiply by z and reduce with z^phi = -sum c_i z^i
    std::vector<Rational> next(phi);
    Rational top = cur[phi - 1];
    for (int i = phi - 1; i >= 1; --i) next[i] = cur[i - 1];
    next[0] = 0;
    if (!top.is_zero()) {
      for (int i = 0; i < phi; ++i) next[i] -= top * Rational(phi_poly[i]);
    }
    cur = std::move(next);
  }
  return f;
}

}  // namespace detail

inline const CycloField& cyclo_field(int n) {
  if (n < 1) throw std::invalid_argument("conductor must be positive");
  thread_local std::array<const CycloField*, 64> fast{};
  if (n < 64 && fast[n] != nullptr) return *fast[n];
  static std::mutex mu;
  static std::map<int, std::unique_ptr<CycloField>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = registry[n];
  if (!slot) slot = detail::build_field(n);
  if (n < 64) fast[n] = slot.get();
  return *slot;
}

/// Element of Q(zeta_N) in the reduced power basis.
class Cyclotomic {
 public:
  using Coeffs = boost::container::small_vector<Rational, 4>;

  Cyclotomic() : field_(&cyclo_field(1)), c_(1) {}
  explicit Cyclotomic(Rational r, int conductor = 1) : field_(&cyclo_field(conductor)), c_(field_->phi) {
    c_[0] = r;
  }
  Cyclotomic(int conductor, Coeffs coeffs) : field_(&cyclo_field(conductor)), c_(std::move(coeffs)) {
    if (static_cast<int>(c_.size()) != field_->phi) throw std::invalid_argument("coefficient count != phi(N)");
  }

  /// zeta_N^j for any integer j.
  static Cyclotomic zeta(int conductor, long j = 1) {
    const CycloField& f = cyclo_field(conductor);
    long r = ((j % conductor) + conductor) % conductor;
    const auto& p = f.power[r];
    return Cyclotomic(conductor, Coeffs(p.begin(), p.end()));
  }

  int conductor() const { return field_->n; }
  const Coeffs& coeffs() const { return c_; }
  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& r) { return r.is_zero(); });
  }
  bool is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (!c_[i].is_zero()) return false;
    return true;
  }

  /// Image in Q(zeta_M) for M a multiple of the conductor.
  Cyclotomic embed(int m) const {
    if (m == field_->n) return *this;
    if (m % field_->n != 0) throw std::invalid_argument("embedding conductor must be a multiple");
    const CycloField& g = cyclo_field(m);
    const int step = m / field_->n;
    Coeffs out(g.phi);
    for (int i = 0; i < field_->phi; ++i) {
      if (c_[i].is_zero()) continue;
      const auto& p = g.power[(i * step) % m];
      for (int j = 0; j < g.phi; ++j)
        if (!p[j].is_zero()) out[j] += c_[i] * p[j];
    }
    return Cyclotomic(m, std::move(out));
  }

  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.field_ != b.field_) {
      int m = std::lcm(a.conductor(), b.conductor());
      return a.embed(m) + b.embed(m);
    }
    Cyclotomic r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
    return r;
  }
  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) { return a + (-b); }
  Cyclotomic operator-() const {
    Cyclotomic r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.field_ != b.field_) {
      int m = std::lcm(a.conductor(), b.conductor());
      return a.embed(m) * b.embed(m);
    }
    const CycloField& f = *a.field_;
    Coeffs out(f.phi);
    for (int i = 0; i < f.phi; ++i) {
      if (a.c_[i].is_zero()) continue;
      for (int j = 0; j < f.phi; ++j) {
        if (b.c_[j].is_zero()) continue;
        Rational prod = a.c_[i] * b.c_[j];
        int idx = (i + j) % f.n;
        if (idx < f.phi) {
          out[idx] += prod;
        } else {
          const auto& p = f.power[idx];
          for (int t = 0; t < f.phi; ++t)
            if (!p[t].is_zero()) out[t] += prod * p[t];
        }
      }
    }
    return Cyclotomic(f.n, std::move(out));
  }
  friend Cyclotomic operator*(const Cyclotomic& a, const Rational& r) {
    Cyclotomic out = a;
    for (auto& x : out.c_) x *= r;
    return out;
  }

  /// Multiplicative inverse by solving (multiplication by *this) x = 1.
  Cyclotomic inverse() const {
    if (is_zero()) throw std::domain_error("cyclotomic division by zero");
    const CycloField& f = *field_;
    const int m = f.phi;
    // column j of the matrix is (*this) * z^j
    std::vector<std::vector<Rational>> mat(m, std::vector<Rational>(m + 1));
    for (int j = 0; j < m; ++j) {
      Cyclotomic col = *this * zeta(f.n, j);
      for (int i = 0; i < m; ++i) mat[i][j] = col.c_[i];
    }
    mat[0][m] = 1;
    for (int col = 0; col < m; ++col) {
      int piv = col;
      while (piv < m && mat[piv][col].is_zero()) ++piv;
      if (piv == m) throw std::domain_error("singular cyclotomic multiplication matrix");
      std::swap(mat[piv], mat[col]);
      Rational inv = Rational(1) / mat[col][col];
      for (int j = col; j <= m; ++j) mat[col][j] *= inv;
      for (int i = 0; i < m; ++i) {
        if (i == col || mat[i][col].is_zero()) continue;
        Rational fac = mat[i][col];
        for (int j = col; j <= m; ++j) mat[i][j] -= fac * mat[col][j];
      }
    }
    Coeffs out(m);
    for (int i = 0; i < m; ++i) out[i] = mat[i][m];
    return Cyclotomic(f.n, std::move(out));
  }
  friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) { return a * b.inverse(); }

  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.field_ == b.field_) return a.c_ == b.c_;
    int m = std::lcm(a.conductor(), b.conductor());
    return a.embed(m).c_ == b.embed(m).c_;
  }

 private:
  const CycloField* field_;
  Coeffs c_;
};

/// Polynomial in the formal symbol tau (standing for 2*pi*i) with cyclotomic
/// coefficients. Zero is the empty term list.
class Scalar {
 public:
  struct Term {
    int tau;
    Cyclotomic c;
  };
  using Terms = boost::container::small_vector<Term, 1>;

  Scalar() = default;
  Scalar(Rational r) {  // NOLINT: implicit by design
    if (!r.is_zero()) t_.push_back({0, Cyclotomic(r)});
  }
  Scalar(std::int64_t r) : Scalar(Rational(r)) {}  // NOLINT
  Scalar(int r) : Scalar(Rational(r)) {}           // NOLINT
  explicit Scalar(Cyclotomic c, int tau_power = 0) {
    if (!c.is_zero()) t_.push_back({tau_power, std::move(c)});
  }
  static Scalar tau(int power = 1) { return Scalar(Cyclotomic(Rational(1)), power); }
  static Scalar zeta(int conductor, long j = 1) { return Scalar(Cyclotomic::zeta(conductor, j)); }

  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  int max_tau() const { return t_.empty() ? -1 : t_.back().tau; }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.t_.empty()) return b;
    if (b.t_.empty()) return a;
    Scalar r;
    std::size_t i = 0, j = 0;
    while (i < a.t_.size() || j < b.t_.size()) {
      if (j == b.t_.size() || (i < a.t_.size() && a.t_[i].tau < b.t_[j].tau)) {
        r.t_.push_back(a.t_[i++]);
      } else if (i == a.t_.size() || b.t_[j].tau < a.t_[i].tau) {
        r.t_.push_back(b.t_[j++]);
      } else {
        Cyclotomic s = a.t_[i].c + b.t_[j].c;
        if (!s.is_zero()) r.t_.push_back({a.t_[i].tau, std::move(s)});
        ++i;
        ++j;
      }
    }
    return r;
  }
  Scalar operator-() const {
    Scalar r = *this;
    for (auto& t : r.t_) t.c = -t.c;
    return r;
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.t_.empty() || b.t_.empty()) return {};
    if (a.t_.size() == 1 && b.t_.size() == 1) {
      Cyclotomic c = a.t_[0].c * b.t_[0].c;
      return Scalar(std::move(c), a.t_[0].tau + b.t_[0].tau);
    }
    Scalar r;
    for (const auto& x : a.t_)
      for (const auto& y : b.t_) r = r + Scalar(x.c * y.c, x.tau + y.tau);
    return r;
  }
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  /// Inverse of a tau-free nonzero scalar.
  Scalar inverse() const {
    if (t_.size() != 1 || t_[0].tau != 0) throw std::domain_error("only tau-free nonzero scalars are invertible");
    return Scalar(t_[0].c.inverse());
  }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.t_.size() != b.t_.size()) return false;
    for (std::size_t i = 0; i < a.t_.size(); ++i)
      if (a.t_[i].tau != b.t_[i].tau || !(a.t_[i].c == b.t_[i].c)) return false;
    return true;
  }

  /// Canonical text: terms "(r)*zN^j*tau^t" joined by " + ", ordered by tau
  /// power then zeta power; zero prints as "0" and rational coefficients use N = 1.
  std::string str() const {
    if (t_.empty()) return "0";
    std::string s;
    for (const auto& t : t_) {
      const Cyclotomic c = t.c.is_rational() ? Cyclotomic(t.c.coeffs()[0]) : t.c;
      const auto& cs = c.coeffs();
      for (std::size_t j = 0; j < cs.size(); ++j) {
        if (cs[j].is_zero()) continue;
        if (!s.empty()) s += " + ";
        s += "(" + cs[j].str() + ")*z" + std::to_string(c.conductor()) + "^" + std::to_string(j) + "*tau^" +
             std::to_string(t.tau);
      }
    }
    return s;
  }

 private:
  Terms t_;
};

/// Polynomial in u with Scalar coefficients (Sym of the dual Lie algebra of
/// the circle).
class PolyU {
 public:
  PolyU() = default;
  explicit PolyU(Scalar c, int deg = 0) {
    if (!c.is_zero()) t_.emplace_back(deg, std::move(c));
  }
  const std::vector<std::pair<int, Scalar>>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  Scalar coeff(int deg) const {
    for (const auto& [d, c] : t_)
      if (d == deg) return c;
    return {};
  }
  friend PolyU operator+(const PolyU& a, const PolyU& b) {
    std::map<int, Scalar> m;
    for (const auto& [d, c] : a.t_) m[d] += c;
    for (const auto& [d, c] : b.t_) m[d] += c;
    return from_map(m);
  }
  friend PolyU operator*(const PolyU& a, const PolyU& b) {
    std::map<int, Scalar> m;
    for (const auto& [d1, c1] : a.t_)
      for (const auto& [d2, c2] : b.t_) m[d1 + d2] += c1 * c2;
    return from_map(m);
  }
  /// q-th derivative evaluated at u = 0, i.e. q! times the u^q coefficient.
  Scalar derivative_at_zero(int q) const { return coeff(q) * Scalar(factorial(q)); }
  friend bool operator==(const PolyU&, const PolyU&) = default;

 private:
  static PolyU from_map(const std::map<int, Scalar>& m) {
    PolyU r;
    for (const auto& [d, c] : m)
      if (!c.is_zero()) r.t_.emplace_back(d, c);
    return r;
  }
  std::vector<std::pair<int, Scalar>> t_;
};

}  // namespace equichern
