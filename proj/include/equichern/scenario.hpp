#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "equichern/bundle.hpp"
#include "equichern/dga.hpp"
#include "equichern/group.hpp"

namespace equichern {

/// Validated verification scenario.
///
/// Schema (JSON):
///   name          string
///   dim           torus dimension n (0..4)
///   conductor     N, the cyclotomic conductor for phases and characters
///   group         {"type": "trivial"}
///                 {"type": "cyclic", "order": m, "generator": AFFINE}
///                 {"type": "table", "elements": [..], "table": [[..]], "actions": [AFFINE, ..]}
///                 {"type": "circle", "direction": [v1, .., vn]}
///   bundle        {"rank": r} plus one of
///                 "generator": [ENTRY..]   cocycle value at the cyclic generator
///                 "cocycle": [[ENTRY..], ..] one matrix per table element
///                 "characters": [chi_1, .., chi_r] (circle)
///   connection    [ENTRY..] with "dx": i (1-based) giving A = sum c e_k dx_i E_{row,col}
///   band, jet_order, seed, suites
/// AFFINE  = {"matrix": [[..]], "translation": [t1, .., tn]} with translation in units of 1/N.
/// ENTRY   = {"row", "col", "mode": [..], "coeff": COEFF}
/// COEFF   = integer | "p/q" | {"q": "p/q", "zeta": j, "tau": t}
struct Scenario {
  std::string name;
  int dim = 0;
  int conductor = 1;
  Group group;
  Bundle bundle;
  Connection connection;
  int band = 1;
  int jet_order = 2;
  std::uint64_t seed = 1;
  std::vector<std::string> suites;
  nlohmann::json source;

  CurvedDGA twisted() const { return CurvedDGA(bundle, connection); }
  CurvedDGA twisted_invariant() const { return CurvedDGA(bundle, average_connection(bundle, connection)); }
  CurvedDGA untwisted() const { return CurvedDGA::untwisted(group); }
};

namespace detail {

inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad rational \"" + s + "\"");
  }
}

inline Scalar parse_coeff(const nlohmann::json& j, int conductor) {
  if (j.is_number_integer()) return Scalar(Rational(j.get<std::int64_t>()));
  if (j.is_string()) return Scalar(parse_rational(j.get<std::string>()));
  if (j.is_object()) {
    Scalar c(Rational(1));
    if (j.contains("q")) c = parse_coeff(j.at("q"), conductor);
    if (j.contains("zeta")) c = Scalar::zeta(conductor, j.at("zeta").get<long>()) * c;
    if (j.contains("tau")) c = Scalar::tau(j.at("tau").get<int>()) * c;
    return c;
  }
  throw std::invalid_argument("coefficient must be an integer, a \"p/q\" string or an object");
}

inline Mode parse_mode(const nlohmann::json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) throw std::invalid_argument("mode must have dim entries");
  Mode m{};
  for (int i = 0; i < n; ++i) m[i] = static_cast<std::int16_t>(j[i].get<int>());
  return m;
}

inline Form parse_entries(const nlohmann::json& arr, int n, int rank, int conductor, bool one_forms) {
  Accum<Key> acc;
  for (const auto& e : arr) {
    Key k;
    k.row = static_cast<std::uint8_t>(e.value("row", 0));
    k.col = static_cast<std::uint8_t>(e.value("col", 0));
    if (k.row >= rank || k.col >= rank) throw std::invalid_argument("matrix entry outside the bundle rank");
    k.k = parse_mode(e.at("mode"), n);
    if (one_forms) {
      int i = e.at("dx").get<int>();
      if (i < 1 || i > n) throw std::invalid_argument("connection dx index out of range");
      k.mask = static_cast<std::uint8_t>(1u << (i - 1));
    }
    acc.add(k, parse_coeff(e.at("coeff"), conductor));
  }
  return acc.finish();
}

inline AffineMap parse_affine(const nlohmann::json& j, int n, int N) {
  AffineMap::Matrix A = AffineMap::identity_matrix();
  std::array<int, kMaxDim> b{};
  const auto& m = j.at("matrix");
  if (static_cast<int>(m.size()) != n) throw std::invalid_argument("action matrix must be dim x dim");
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(m[r].size()) != n) throw std::invalid_argument("action matrix must be dim x dim");
    for (int c = 0; c < n; ++c) A[r][c] = m[r][c].get<int>();
  }
  if (j.contains("translation"))
    for (int r = 0; r < n; ++r) b[r] = j.at("translation").at(r).get<int>();
  return AffineMap(n, A, b, N);
}

}  // namespace detail

inline Scenario scenario_from_json(const nlohmann::json& j) {
  using namespace detail;
  Scenario s;
  s.source = j;
  s.name = j.value("name", "unnamed");
  s.dim = j.at("dim").get<int>();
  if (s.dim < 0 || s.dim > kMaxDim) throw std::invalid_argument("dim out of range");
  s.conductor = j.value("conductor", 1);
  if (s.conductor < 1) throw std::invalid_argument("conductor must be positive");
  const int n = s.dim, N = s.conductor;

  const auto& gj = j.at("group");
  const std::string type = gj.at("type").get<std::string>();
  std::vector<std::vector<int>> cyclic_powers;
  if (type == "trivial") {
    s.group = Group::trivial(n);
  } else if (type == "cyclic") {
    int m = gj.at("order").get<int>();
    if (m < 1) throw std::invalid_argument("cyclic order must be positive");
    AffineMap gen = parse_affine(gj.at("generator"), n, N);
    std::vector<std::string> names;
    std::vector<std::vector<int>> table(m, std::vector<int>(m));
    std::vector<AffineMap> actions;
    AffineMap cur = AffineMap::identity(n, N);
    for (int i = 0; i < m; ++i) {
      names.push_back(i == 0 ? "e" : (i == 1 ? "g" : "g^" + std::to_string(i)));
      for (int l = 0; l < m; ++l) table[i][l] = (i + l) % m;
      actions.push_back(cur);
      cur = gen.compose(cur);
    }
    s.group = Group::finite(n, N, names, table, actions);
  } else if (type == "table") {
    auto names = gj.at("elements").get<std::vector<std::string>>();
    auto table = gj.at("table").get<std::vector<std::vector<int>>>();
    std::vector<AffineMap> actions;
    for (const auto& a : gj.at("actions")) actions.push_back(parse_affine(a, n, N));
    s.group = Group::finite(n, N, names, table, actions);
  } else if (type == "circle") {
    s.group = Group::circle(n, parse_mode(gj.at("direction"), n));
  } else {
    throw std::invalid_argument("unknown group type \"" + type + "\"");
  }

  nlohmann::json bj = j.value("bundle", nlohmann::json::object());
  int rank = bj.value("rank", 1);
  if (rank < 1 || rank > 8) throw std::invalid_argument("bundle rank out of range");
  if (bj.contains("characters")) {
    if (s.group.is_finite()) throw std::invalid_argument("characters require the circle group");
    auto chi = bj.at("characters").get<std::vector<int>>();
    if (static_cast<int>(chi.size()) != rank) throw std::invalid_argument("one character per rank");
    s.bundle = Bundle::circle(s.group, chi);
  } else if (bj.contains("generator")) {
    if (type != "cyclic") throw std::invalid_argument("a generator cocycle requires a cyclic group");
    Form Ug = parse_entries(bj.at("generator"), n, rank, N, false);
    // U(g^{i+1}) = U(g) g^*U(g^i); the element g^i has index i before renumbering, and the unit is index 0
    std::vector<Form> U(s.group.order());
    U[0] = identity_matrix(rank);
    for (int i = 1; i < s.group.order(); ++i) U[i] = wedge(Ug, pullback(s.group.action(1), U[i - 1]));
    s.bundle = Bundle::finite(s.group, U, rank);
  } else if (bj.contains("cocycle")) {
    std::vector<Form> U;
    for (const auto& m : bj.at("cocycle")) U.push_back(parse_entries(m, n, rank, N, false));
    if (!s.group.is_finite()) throw std::invalid_argument("matrix cocycle requires a finite group");
    // entries follow the declared element order; move the unit first as the group does
    std::vector<Form> ordered(U.size());
    auto names = gj.at("elements").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < names.size(); ++i)
      for (int g = 0; g < s.group.order(); ++g)
        if (s.group.name(g) == names[i]) ordered[g] = U[i];
    s.bundle = Bundle::finite(s.group, ordered, rank);
  } else {
    s.bundle = Bundle::trivial(s.group, rank);
  }

  if (j.contains("connection")) s.connection.A = parse_entries(j.at("connection"), n, rank, N, true);
  s.band = j.value("band", 1);
  s.jet_order = j.value("jet_order", 2);
  s.seed = j.value("seed", std::uint64_t{1});
  if (s.band < 0 || s.band > 2) throw std::invalid_argument("band limit must be in 0..2");
  if (s.jet_order < 0 || s.jet_order > 2) throw std::invalid_argument("jet order must be in 0..2");
  if (j.contains("suites")) s.suites = j.at("suites").get<std::vector<std::string>>();
  return s;
}

inline Scenario scenario_from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("parse error: ") + e.what());
  }
  return scenario_from_json(j);
}

inline const std::map<std::string, std::string>& preset_texts() {
  static const std::map<std::string, std::string> presets = {
      {"trivial-torus2", R"({
  "name": "trivial-torus2", "dim": 2, "conductor": 1,
  "group": {"type": "trivial"},
  "bundle": {"rank": 1},
  "connection": [
    {"mode": [0, 1], "dx": 1, "coeff": 1},
    {"mode": [1, 0], "dx": 2, "coeff": "1/2"}
  ],
  "band": 1, "jet_order": 0, "seed": 11
})"},
      {"z2-point", R"({
  "name": "z2-point", "dim": 0, "conductor": 2,
  "group": {"type": "cyclic", "order": 2, "generator": {"matrix": []}},
  "bundle": {"rank": 1, "generator": [{"mode": [], "coeff": -1}]},
  "band": 0, "jet_order": 0, "seed": 3
})"},
      {"z4-point", R"({
  "name": "z4-point", "dim": 0, "conductor": 4,
  "group": {"type": "cyclic", "order": 4, "generator": {"matrix": []}},
  "bundle": {"rank": 1, "generator": [{"mode": [], "coeff": {"zeta": 1}}]},
  "band": 0, "jet_order": 0, "seed": 4
})"},
      {"z4-torus2", R"({
  "name": "z4-torus2", "dim": 2, "conductor": 4,
  "group": {"type": "cyclic", "order": 4, "generator": {"matrix": [[0, -1], [1, 0]]}},
  "bundle": {"rank": 1, "generator": [{"mode": [0, 0], "coeff": {"zeta": 1}}]},
  "connection": [
    {"mode": [0, 1], "dx": 1, "coeff": 1},
    {"mode": [1, 0], "dx": 2, "coeff": "1/2"},
    {"mode": [1, 1], "dx": 1, "coeff": {"q": "-1", "zeta": 1}}
  ],
  "band": 1, "jet_order": 0, "seed": 7
})"},
      {"z4-torus2-twist", R"({
  "name": "z4-torus2-twist", "dim": 2, "conductor": 4,
  "group": {"type": "cyclic", "order": 4, "generator": {"matrix": [[0, -1], [1, 0]]}},
  "bundle": {"rank": 1, "generator": [{"mode": [1, 0], "coeff": 1}]},
  "connection": [
    {"mode": [0, 1], "dx": 1, "coeff": 1},
    {"mode": [0, 0], "dx": 2, "coeff": "1/3"}
  ],
  "band": 1, "jet_order": 0, "seed": 8
})"},
      {"z4-torus2-rank2", R"({
  "name": "z4-torus2-rank2", "dim": 2, "conductor": 4,
  "group": {"type": "cyclic", "order": 4, "generator": {"matrix": [[0, -1], [1, 0]]}},
  "bundle": {"rank": 2, "generator": [{"row": 0, "col": 1, "mode": [0, 0], "coeff": 1},
                                     {"row": 1, "col": 0, "mode": [0, 0], "coeff": 1}]},
  "connection": [
    {"row": 0, "col": 0, "mode": [0, 1], "dx": 1, "coeff": 1},
    {"row": 0, "col": 1, "mode": [1, 0], "dx": 2, "coeff": 2},
    {"row": 1, "col": 0, "mode": [0, 0], "dx": 1, "coeff": "-1/2"}
  ],
  "band": 1, "jet_order": 0, "seed": 9
})"},
      {"z2-torus2", R"({
  "name": "z2-torus2", "dim": 2, "conductor": 2,
  "group": {"type": "cyclic", "order": 2, "generator": {"matrix": [[1, 0], [0, 1]], "translation": [1, 0]}},
  "bundle": {"rank": 1},
  "connection": [
    {"mode": [1, 0], "dx": 2, "coeff": 1},
    {"mode": [0, 1], "dx": 1, "coeff": -1}
  ],
  "band": 1, "jet_order": 0, "seed": 5
})"},
      {"z2-flip-torus2", R"({
  "name": "z2-flip-torus2", "dim": 2, "conductor": 2,
  "group": {"type": "cyclic", "order": 2, "generator": {"matrix": [[-1, 0], [0, -1]]}},
  "bundle": {"rank": 1, "generator": [{"mode": [1, 0], "coeff": 1}]},
  "connection": [
    {"mode": [0, 1], "dx": 1, "coeff": 1},
    {"mode": [1, 1], "dx": 2, "coeff": "1/2"}
  ],
  "band": 1, "jet_order": 0, "seed": 6
})"},
      {"circle-torus2", R"({
  "name": "circle-torus2", "dim": 2, "conductor": 1,
  "group": {"type": "circle", "direction": [1, 0]},
  "bundle": {"rank": 1, "characters": [0]},
  "connection": [
    {"mode": [0, 1], "dx": 1, "coeff": 1},
    {"mode": [1, 0], "dx": 2, "coeff": "1/2"}
  ],
  "band": 1, "jet_order": 2, "seed": 13
})"},
      {"circle-torus2-rank2", R"({
  "name": "circle-torus2-rank2", "dim": 2, "conductor": 1,
  "group": {"type": "circle", "direction": [1, 0]},
  "bundle": {"rank": 2, "characters": [0, 1]},
  "connection": [
    {"row": 0, "col": 0, "mode": [0, 1], "dx": 1, "coeff": 1},
    {"row": 0, "col": 1, "mode": [0, 0], "dx": 2, "coeff": 2},
    {"row": 1, "col": 0, "mode": [1, 0], "dx": 1, "coeff": "-1/2"}
  ],
  "band": 1, "jet_order": 2, "seed": 14
})"},
  };
  return presets;
}

/// Named preset or path to a JSON file.
inline Scenario load_scenario(const std::string& name_or_path) {
  const auto& p = preset_texts();
  if (auto it = p.find(name_or_path); it != p.end()) return scenario_from_text(it->second);
  std::ifstream in(name_or_path);
  if (!in) throw std::invalid_argument("cannot open scenario \"" + name_or_path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_text(ss.str());
}

}  // namespace equichern
