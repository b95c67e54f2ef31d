// Acceptance run: one PASS/FAIL line per criterion. A criterion passes when
// every check it names passes. Checks listed as `literal` restate an identity
// verbatim; when one of those fails while its corrected form (listed as
// required) passes, the criterion prints FAIL with the recorded analysis and
// the exit code stays 0. Any failing required check makes the exit code 1.

#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "equichern/suites.hpp"

using namespace equichern;

namespace {

struct Run {
  std::string scenario;
  std::string suite;
};

class Runner {
 public:
  const Report& get(const std::string& scenario, const std::string& suite) {
    auto key = scenario + "/" + suite;
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      Scenario sc = load_scenario(scenario);
      it = cache_.emplace(key, run_suite(sc, suite, sc.seed)).first;
    }
    return it->second;
  }

 private:
  std::map<std::string, Report> cache_;
};

struct Selection {
  Run run;
  std::function<bool(const CheckRecord&)> pick;
};

struct Criterion {
  int number;
  std::string title;
  std::vector<Selection> required;
  std::vector<Selection> literal;
  std::string analysis;
  std::function<bool(std::string&)> extra;
};

bool starts(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::function<bool(const CheckRecord&)> prefix(std::string p) {
  return [p](const CheckRecord& c) { return starts(c.id, p); };
}

std::function<bool(const CheckRecord&)> any_of(std::vector<std::string> ids) {
  return [ids](const CheckRecord& c) {
    for (const auto& id : ids)
      if (starts(c.id, id)) return true;
    return false;
  };
}

std::function<bool(const CheckRecord&)> all_but(std::vector<std::string> ids) {
  auto f = any_of(std::move(ids));
  return [f](const CheckRecord& c) { return !f(c); };
}

struct Tally {
  int checks = 0;
  int failed = 0;
  long instances = 0;
  std::vector<std::string> failures;
};

Tally tally(Runner& r, const std::vector<Selection>& sel) {
  Tally t;
  for (const auto& s : sel) {
    const Report& rep = r.get(s.run.scenario, s.run.suite);
    int matched = 0;
    for (const auto& c : rep.checks) {
      if (!s.pick(c) || c.status == Status::skipped_unsupported) continue;
      ++matched;
      ++t.checks;
      t.instances += c.instances;
      if (c.status == Status::fail) {
        ++t.failed;
        t.failures.push_back(s.run.scenario + ":" + c.id + " [" + c.counterexample.substr(0, 160) + "]");
      }
    }
    if (matched == 0) {
      ++t.failed;
      t.failures.push_back(s.run.scenario + ":" + s.run.suite + " selected no checks");
    }
  }
  return t;
}

bool determinism(std::string& detail) {
  const std::vector<Run> runs = {{"z4-torus2", "claims"}, {"trivial-torus2", "jlo"}, {"z4-torus2-twist", "bridge"},
                                 {"circle-torus2", "traces"}};
  for (const auto& r : runs) {
    Scenario sc = load_scenario(r.scenario);
    std::string a = report_structured(run_suite(sc, r.suite, 99));
    std::string b = report_structured(run_suite(sc, r.suite, 99));
    if (a != b) {
      detail = r.suite + " on " + r.scenario + " differs between runs";
      return false;
    }
  }
  detail = std::to_string(runs.size()) + " suite runs byte-identical";
  return true;
}

}  // namespace

int main() {
  Runner runner;
  const std::string z4 = "z4-torus2", z4t = "z4-torus2-twist", z2 = "z2-torus2", circ = "circle-torus2";

  std::vector<Criterion> criteria = {
      {1,
       "curved DGA axioms (D^2 = [Theta, -], Bianchi) on circle-torus2 and z4-torus2",
       {{{circ, "dga"}, prefix("dga.")}, {{z4, "dga"}, prefix("dga.twisted.")}},
       {},
       "",
       {}},
      {2,
       "graded, closed, Theta-cyclic traces; circle traces for gamma of degree 0, 1, 2",
       {{{circ, "traces"}, prefix("traces.")}, {{z4, "traces"}, prefix("traces.")}},
       {},
       "",
       {}},
      {3,
       "bundle claims 1-11 on z4-torus2, claims 1, 6, 7, 8, 9, 11 on circle-torus2",
       {{{z4, "claims"}, prefix("claims.")},
        {{circ, "claims"}, any_of({"claims.c1", "claims.c6", "claims.c7", "claims.c8", "claims.c9", "claims.c11"})}},
       {},
       "",
       {}},
      {4,
       "JLO cocycle b Ch^k = B Ch^{k+2} (k = 0, 2) and degree concentration",
       {{{z4, "jlo"}, any_of({"jlo.cocycle.signed", "jlo.degree-concentration"})},
        {{z4t, "jlo"}, any_of({"jlo.cocycle.signed", "jlo.degree-concentration"})}},
       {{{z4, "jlo"}, prefix("jlo.cocycle.literal")}, {{z4t, "jlo"}, prefix("jlo.cocycle.literal")}},
       "with the standard Hochschild b and Connes B the family satisfies b Ch^k + B Ch^{k+2} = 0 exactly on every "
       "tuple; the literal equality fails on the tuples where both sides are nonzero",
       {}},
      {5,
       "closed forms equal the simplex-integrated JLO cochains",
       {{{z4, "jlo"}, any_of({"jlo.closed-form", "jlo.cache"})}, {{z4t, "jlo"}, any_of({"jlo.closed-form", "jlo.cache"})}},
       {},
       "",
       {}},
      {6,
       "bicomplex identities, Eilenberg-Zilber data, Psi_1 and EZ^pert chain maps, Psi_3 intertwining, circle jets",
       {{{z2, "complexes"}, prefix("complexes.")}, {{z4, "complexes"}, prefix("complexes.")},
        {{circ, "complexes"}, prefix("complexes.jet-")}},
       {},
       "",
       {}},
      {7,
       "pairing lemma with sign (-1)^{p(n+q) + p(p+1)/2}",
       {{{z4, "bridge"}, all_but({"bridge.pairing.d.literal"})}, {{z2, "bridge"}, all_but({"bridge.pairing.d.literal"})}},
       {{{z4, "bridge"}, prefix("bridge.pairing.d.literal")}, {{z2, "bridge"}, prefix("bridge.pairing.d.literal")}},
       "with the stated pairing sign the d-line holds as <d a, b> = -<a, B~^h b>; every other line of the lemma "
       "holds as stated",
       {}},
      {8,
       "main theorem c(Ch_G(E, nabla)) = Ch_{Omega_{E,nabla}} on z4-torus2, exhaustive band <= 1, k = 0, 2",
       {{{z4, "chern-compare"}, prefix("chern-compare.signed")}},
       {{{z4, "chern-compare"}, prefix("chern-compare.literal")}},
       "the cochains agree exactly up to the sign (-1)^{n/2}, which is -1 on the 2-torus; the literal equality "
       "fails on every tuple where the values are nonzero",
       {}},
      {9,
       "reductions: trivial group (HKR, classical Chern current) and point case for Z/2 and Z/4",
       {{{"trivial-torus2", "reductions"}, prefix("reductions.")},
        {{"z2-point", "reductions"}, prefix("reductions.")},
        {{"z4-point", "reductions"}, prefix("reductions.")}},
       {},
       "",
       {}},
      {10, "identical scenario and seed give byte-identical structured reports", {}, {}, "", determinism},
  };

  bool required_ok = true;
  for (const auto& c : criteria) {
    Tally req = tally(runner, c.required);
    Tally lit = tally(runner, c.literal);
    std::string extra_detail;
    bool extra_ok = !c.extra || c.extra(extra_detail);
    const bool pass = req.failed == 0 && lit.failed == 0 && extra_ok;
    required_ok = required_ok && req.failed == 0 && extra_ok;
    std::cout << "criterion " << c.number << ": " << (pass ? "PASS" : "FAIL") << "  " << c.title << "  ("
              << req.checks + lit.checks << " checks, " << req.instances + lit.instances << " instances"
              << (extra_detail.empty() ? "" : "; " + extra_detail) << ")\n";
    for (const auto& f : req.failures) std::cout << "    required check failed: " << f << "\n";
    if (lit.failed > 0) {
      std::cout << "    literal statement fails in " << lit.failed << " of " << lit.checks << " checks";
      std::cout << (req.failed == 0 ? "; corrected form passes\n" : "\n");
      std::cout << "    analysis: " << c.analysis << "\n";
      for (const auto& f : lit.failures) std::cout << "    " << f << "\n";
    }
  }
  std::cout << (required_ok ? "all failures are documented deviations\n" : "undocumented failures present\n");
  return required_ok ? 0 : 1;
}
