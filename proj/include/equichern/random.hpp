#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <vector>

#include "equichern/group.hpp"
#include "equichern/torus.hpp"

namespace equichern {

/// Seeded sampler of band-limited test data. Coefficients come from a small
/// fixed set so results stay exact and small.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Scalar coefficient(int conductor = 1) {
    static const Rational pool[] = {Rational(1), Rational(-1), Rational(2), Rational(-3), Rational(1, 2),
                                    Rational(-2, 3)};
    Scalar c(pool[uniform(0, 5)]);
    if (conductor > 1 && uniform(0, 2) == 0) c = c * Scalar::zeta(conductor, uniform(1, conductor - 1));
    return c;
  }

  Mode mode(int n, int band) {
    Mode m{};
    for (int i = 0; i < n; ++i) m[i] = static_cast<std::int16_t>(uniform(-band, band));
    return m;
  }

  unsigned mask_of_degree(int n, int p) {
    std::vector<unsigned> masks;
    for (unsigned m = 0; m < (1u << n); ++m)
      if (std::popcount(m) == p) masks.push_back(m);
    return masks[uniform(0, static_cast<int>(masks.size()) - 1)];
  }

  struct Shape {
    int terms = 3;
    int band = 1;
    int group_band = 2;  // circle g-modes
    int rank = 1;
    int max_u = 1;
    int conductor = 1;
  };

  /// Random element of total degree `deg` (form degree + 2 u).
  Form element(const Group& G, int deg, const Shape& s) {
    const int n = G.dim();
    Accum<Key> acc;
    for (int t = 0; t < s.terms; ++t) {
      int u_hi = std::min(s.max_u, deg / 2);
      int u_lo = std::max(0, (deg - n + 1) / 2);
      if (u_lo > u_hi) break;
      if (G.is_finite()) u_hi = u_lo = 0;
      if ((deg - 2 * u_lo) > n || deg - 2 * u_lo < 0) break;
      Key k;
      k.u = static_cast<std::int16_t>(uniform(u_lo, u_hi));
      int p = deg - 2 * k.u;
      if (p > n) continue;
      k.mask = static_cast<std::uint8_t>(mask_of_degree(n, p));
      k.g = G.is_finite() ? uniform(0, G.order() - 1) : uniform(-s.group_band, s.group_band);
      k.row = static_cast<std::uint8_t>(uniform(0, s.rank - 1));
      k.col = static_cast<std::uint8_t>(uniform(0, s.rank - 1));
      k.k = mode(n, s.band);
      acc.add(k, coefficient(s.conductor));
    }
    return acc.finish();
  }

  /// Random g-independent End-valued form of form degree p (keys with g = 0, u = 0).
  Form plain_form(int n, int p, int rank, int band, int terms = 3, int conductor = 1) {
    Accum<Key> acc;
    if (p < 0 || p > n) return {};
    for (int t = 0; t < terms; ++t) {
      Key k;
      k.mask = static_cast<std::uint8_t>(mask_of_degree(n, p));
      k.row = static_cast<std::uint8_t>(uniform(0, rank - 1));
      k.col = static_cast<std::uint8_t>(uniform(0, rank - 1));
      k.k = mode(n, band);
      acc.add(k, coefficient(conductor));
    }
    return acc.finish();
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace equichern
