#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "equichern/getzler.hpp"
#include "equichern/jlo.hpp"
#include "equichern/sampling.hpp"
#include "equichern/scenario.hpp"

namespace equichern {

/// File formats of the `pair` command.
///
/// Cochain file: {"components": [{"p": p, "q": q, "terms": [TERM..]}, ..]}
///   TERM = {"g": [g_1..g_q], "u": u, "mode": [..], "dx": [i..], "coeff": COEFF}
///   with dx indices 1-based; all components must share the parity of p + q - n.
/// Tuple file: {"tuple": [ELEM..]}
///   ELEM = {"unit": COEFF, "terms": [{"g": g, "mode": [..], "coeff": COEFF}..]}
inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": parse error: " + e.what());
  }
}

inline CPFamily parse_family(const nlohmann::json& j, const Scenario& sc) {
  const int n = sc.dim;
  CPFamily f;
  f.n = n;
  bool first = true;
  for (const auto& c : j.at("components")) {
    GetzCochain a{c.at("p").get<int>(), c.at("q").get<int>(), {}};
    if (a.p < 0 || a.p > n || a.q < 0 || a.q > static_cast<int>(kMaxSlots)) throw std::invalid_argument("component bidegree out of range");
    if (first) f.k = ((a.p + a.q - n) % 2 + 2) % 2;
    first = false;
    Accum<GetzKey> acc;
    for (const auto& t : c.at("terms")) {
      GetzKey k;
      const auto& g = t.value("g", nlohmann::json::array());
      if (static_cast<int>(g.size()) != a.q) throw std::invalid_argument("term needs q group entries");
      for (int i = 0; i < a.q; ++i) {
        k.g[i] = static_cast<std::int16_t>(g[i].get<int>());
        if (sc.group.is_finite() && (k.g[i] < 0 || k.g[i] >= sc.group.order()))
          throw std::invalid_argument("group entry outside the group");
      }
      k.u = static_cast<std::int16_t>(t.value("u", 0));
      k.k = detail::parse_mode(t.at("mode"), n);
      int deg = 0;
      for (const auto& i : t.value("dx", nlohmann::json::array())) {
        int x = i.get<int>();
        if (x < 1 || x > n || (k.mask >> (x - 1) & 1u)) throw std::invalid_argument("bad dx index");
        k.mask = static_cast<std::uint8_t>(k.mask | (1u << (x - 1)));
        ++deg;
      }
      if (deg != a.p) throw std::invalid_argument("term form degree differs from p");
      acc.add(k, detail::parse_coeff(t.at("coeff"), sc.conductor));
    }
    a.c = acc.finish();
    f.add(a);
  }
  return f;
}

inline std::vector<AlgebraElem> parse_tuple(const nlohmann::json& j, const Scenario& sc) {
  std::vector<AlgebraElem> out;
  for (const auto& e : j.at("tuple")) {
    AlgebraElem a;
    if (e.contains("unit")) a.unit = detail::parse_coeff(e.at("unit"), sc.conductor);
    for (const auto& t : e.value("terms", nlohmann::json::array())) {
      int g = t.at("g").get<int>();
      if (sc.group.is_finite() && (g < 0 || g >= sc.group.order())) throw std::invalid_argument("group element outside the group");
      a = a + AlgebraElem::basis(g, detail::parse_mode(t.at("mode"), sc.dim), detail::parse_coeff(t.at("coeff"), sc.conductor));
    }
    out.push_back(std::move(a));
  }
  if (out.empty()) throw std::invalid_argument("tuple must have at least one entry");
  return out;
}

/// Table of cochain values on all unit/basis tuples of the given arity.
inline nlohmann::json cochain_table(const Cochain& c, const std::vector<Key>& pool, int arity, int n) {
  nlohmann::json rows = nlohmann::json::array();
  detail::for_each_tuple(static_cast<int>(pool.size()), arity, [&](const std::vector<int>& idx) {
    std::vector<Key> t;
    for (int i : idx) t.push_back(pool[i]);
    Scalar v = c.basis(t);
    if (!v.is_zero()) rows.push_back({{"tuple", tuple_text(t, n)}, {"value", v.str()}});
  });
  return rows;
}

}  // namespace equichern
