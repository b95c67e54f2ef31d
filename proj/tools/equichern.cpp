#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "equichern/io.hpp"
#include "equichern/suites.hpp"

using namespace equichern;

namespace {

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
  out << text;
}

int cmd_verify(const std::string& suite, const std::string& scenario, std::optional<std::uint64_t> seed,
               const std::string& report, const std::string& format) {
  Scenario sc = load_scenario(scenario);
  Report r = run_suite(sc, suite, seed.value_or(sc.seed));
  ReportFormat f = format == "structured" ? ReportFormat::structured : ReportFormat::human;
  if (report.empty() || report == "-") {
    std::cout << (f == ReportFormat::structured ? report_structured(r) : report_human(r));
  } else {
    emit_report(r, f, report);
    std::cerr << r.checks.size() << " checks: " << r.count(Status::pass) << " pass, " << r.count(Status::fail)
              << " fail, " << r.count(Status::skipped_unsupported) << " skipped\n";
  }
  return r.all_pass() ? 0 : 1;
}

int cmd_chern_jlo(const std::string& scenario, const std::string& out) {
  Scenario sc = load_scenario(scenario);
  const int n = sc.dim;
  auto A = std::make_shared<const CurvedDGA>(sc.twisted());
  const auto pool = suites_detail::slot_pool(sc.group, std::min(sc.band, 1));
  nlohmann::json j = {{"scenario", sc.name}, {"cochains", nlohmann::json::array()}};
  for (int k = n % 2; k <= n + 2; k += 2)
    j["cochains"].push_back({{"k", k}, {"values", cochain_table(jlo_generic(A, k), pool, k + 1, n)}});
  write_out(out, j.dump(2) + "\n");
  return 0;
}

int cmd_chern_compare(const std::string& scenario, const std::string& out) {
  Scenario sc = load_scenario(scenario);
  if (!sc.group.is_finite()) throw std::invalid_argument("chern compare needs a finite group");
  if (sc.dim % 2 != 0) throw std::invalid_argument("chern compare needs an even-dimensional torus");
  const int n = sc.dim;
  const Connection inv = average_connection(sc.bundle, sc.connection);
  CPFamily ch = getzler_chern_family(sc.bundle, inv);
  auto A = std::make_shared<const CurvedDGA>(sc.bundle, inv);
  const auto pool = suites_detail::slot_pool(sc.group, std::min(sc.band, 1));
  const Scalar sign((n / 2) % 2 ? -1 : 1);
  bool agree = true;
  nlohmann::json j = {{"scenario", sc.name}, {"sign", sign.str()}, {"cochains", nlohmann::json::array()}};
  for (int k : {0, 2}) {
    Cochain c = c_map_cochain(sc.group, ch, k), jlo = jlo_generic(A, k);
    nlohmann::json rows = nlohmann::json::array();
    detail::for_each_tuple(static_cast<int>(pool.size()), k + 1, [&](const std::vector<int>& idx) {
      std::vector<Key> t;
      for (int i : idx) t.push_back(pool[i]);
      Scalar a = c.basis(t), b = jlo.basis(t);
      if (a.is_zero() && b.is_zero()) return;
      bool ok = a == sign * b;
      agree = agree && ok;
      rows.push_back({{"tuple", tuple_text(t, n)}, {"c_map", a.str()}, {"jlo", b.str()}, {"agree", ok}});
    });
    j["cochains"].push_back({{"k", k}, {"values", rows}});
  }
  j["agree"] = agree;
  write_out(out, j.dump(2) + "\n");
  return agree ? 0 : 1;
}

int cmd_pair(const std::string& scenario, const std::string& cochain, const std::string& tuple) {
  Scenario sc = load_scenario(scenario);
  CPFamily f = parse_family(read_json_file(cochain), sc);
  auto t = parse_tuple(read_json_file(tuple), sc);
  bool normalized = true;
  for (const auto& [bd, a] : f.parts) normalized = normalized && is_cyclically_normalized(sc.group, a).ok;
  nlohmann::json j = {{"scenario", sc.name},
                      {"tuple", elems_text(t, sc.dim)},
                      {"cyclically_normalized", normalized},
                      {"value", c_map(sc.group, f, t).str()}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equichern: exact checks of the equivariant Chern character on tori"};
  app.require_subcommand(1);

  std::string suite, scenario, report, format = "human", out, cochain, tuple;
  std::optional<std::uint64_t> seed;

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--scenario", scenario, "preset name or scenario file")->required();
  verify->add_option("--seed", seed, "seed (default: the scenario seed)");
  verify->add_option("--report", report, "report file (default: stdout)");
  verify->add_option("--format", format, "report format")->check(CLI::IsMember({"human", "structured"}));

  auto* chern = app.add_subcommand("chern", "evaluate Chern cocycles");
  chern->require_subcommand(1);
  auto* jlo = chern->add_subcommand("jlo", "JLO cocycle table of the twisted cycle");
  jlo->add_option("--scenario", scenario, "preset name or scenario file")->required();
  jlo->add_option("--out", out, "output file (default: stdout)");
  auto* compare = chern->add_subcommand("compare", "c(Ch_G) against the JLO cocycle for the averaged connection");
  compare->add_option("--scenario", scenario, "preset name or scenario file")->required();
  compare->add_option("--out", out, "output file (default: stdout)");

  auto* pair = app.add_subcommand("pair", "evaluate c(alpha) on a tuple of crossed-product elements");
  pair->add_option("--scenario", scenario, "preset name or scenario file")->required();
  pair->add_option("--cochain", cochain, "Getzler cochain file")->required()->check(CLI::ExistingFile);
  pair->add_option("--tuple", tuple, "tuple file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors share exit code 2 with runtime errors; --help exits 0
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*verify) return cmd_verify(suite, scenario, seed, report, format);
    if (*jlo) return cmd_chern_jlo(scenario, out);
    if (*compare) return cmd_chern_compare(scenario, out);
    if (*pair) return cmd_pair(scenario, cochain, tuple);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
