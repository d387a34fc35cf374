// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "attposet/leonard.hpp"
#include "attposet/relations.hpp"
#include "attposet/specdec.hpp"
#include "attposet/suites.hpp"

using namespace attposet;
using exact::QSqrt;
using poset::InstanceParams;

namespace {

const InstanceParams P231{2, 3, 1}, P331{3, 3, 1}, P242{2, 4, 2}, P261{2, 6, 1};

const algebra::GeneratorSet& gens(const InstanceParams& p) {
  static std::map<std::tuple<int, int, int>, algebra::GeneratorSet> cache;
  const auto key = std::make_tuple(p.q, p.N, p.M);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, algebra::build_generators(poset::enumerate(p))).first;
  return it->second;
}

// Collects failure reasons for one criterion.
struct Log {
  std::vector<std::string> problems;
  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  void require(const CheckResult& r, const std::string& where) {
    if (!r.pass) problems.push_back(where + " " + r.id + ": " + (r.witness ? r.witness->to_json().dump() : r.detail));
  }
};

int failures = 0;

void criterion(int k, const std::string& title, double budget_s, const std::function<void(Log&)>& body) {
  Stopwatch sw;
  Log log;
  try {
    body(log);
  } catch (const std::exception& e) {
    log.problems.push_back(std::string("exception: ") + e.what());
  }
  const double s = sw.ms() / 1000.0;
  log.require(s < budget_s, "took " + std::to_string(s) + " s, budget " + std::to_string(budget_s) + " s");
  const bool ok = log.problems.empty();
  if (!ok) ++failures;
  std::printf("CRITERION %d: %s - %s (%.1f s)\n", k, ok ? "PASS" : "FAIL", title.c_str(), s);
  for (const auto& p : log.problems) std::printf("    %s\n", p.c_str());
  std::fflush(stdout);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  criterion(1, "grade sizes", 30, [](Log& log) {
    const std::vector<std::pair<InstanceParams, std::vector<std::size_t>>> table = {
        {{2, 2, 1}, {1, 6, 4}},
        {{2, 3, 1}, {1, 14, 28, 8}},
        {{2, 3, 2}, {1, 28, 112, 64}},
        {{3, 3, 1}, {1, 39, 117, 27}},
        {{2, 4, 2}, {1, 60, 560, 960, 256}},
        {{2, 6, 1}, {1, 126, 2604, 11160, 10416, 2016, 64}},
    };
    for (const auto& [p, want] : table) {
      const auto P = poset::enumerate(p);
      std::vector<std::size_t> got;
      for (int i = 0; i <= p.N; ++i) got.push_back(P.grade_count(i));
      log.require(got == want, "grade sizes at " + p.label());
      for (int i = 0; i <= p.N; ++i) log.require(poset::grade_size(p, i) == want[i], "formula at " + p.label());
    }
  });

  criterion(2, "relation catalog dense at (2,3,1), (3,3,1), (2,4,2)", 360, [](Log& log) {
    for (const auto& p : {P231, P331, P242}) {
      Stopwatch sw;
      for (const auto& id : algebra::relation_ids()) {
        if (algebra::needs_large_n(id)) continue;
        auto r = algebra::verify_relation(id, gens(p), algebra::Mode::Dense, 0, 0, 5000);
        log.require(r, p.label());
        log.require(r.mode == "dense", id + " ran in mode " + r.mode);
      }
      log.require(sw.ms() < 120000, "catalog at " + p.label() + " exceeded 2 min");
    }
  });

  criterion(3, "N >= 6 identities at (2,6,1)", 600, [](Log& log) {
    const auto& g = gens(P261);
    auto r19 = algebra::verify_relation("REL-19", g, algebra::Mode::Dense, 0, 0);
    log.require(r19, "");
    log.require(r19.mode == "dense", "REL-19 mode " + r19.mode);
    log.require(algebra::verify_independence("LIN-94", g), "");
    log.require(algebra::verify_independence("LIN-95", g), "");
    for (const std::string id : {"REL-03", "REL-04", "REL-09", "REL-10"}) {
      auto r = algebra::verify_relation(id, g, algebra::Mode::MatrixFree, 5, 2024);
      log.require(r, "");
      log.require(r.trials == 5 && r.mode == "matrix-free", id + " ran " + r.mode);
    }
  });

  criterion(4, "spectral decomposition at (2,3,1) and (3,3,1)", 120, [](Log& log) {
    struct Want {
      int r, d;
      int c1, c2;
      std::size_t mult;
    };
    const std::vector<std::pair<InstanceParams, std::vector<Want>>> table = {
        {P231, {{0, 3, 17, 32, 1}, {1, 1, 10, 32, 6}, {1, 2, 9, 16, 7}, {2, 0, 6, 16, 14}}},
        {P331, {{0, 3, 41, 243, 1}, {1, 1, 15, 243, 12}, {1, 2, 14, 81, 26}, {2, 0, 6, 81, 78}}},
    };
    for (const auto& [p, want] : table) {
      const auto& g = gens(p);
      auto pack = specdec::build_central(g);
      log.require(specdec::verify_spectrum(g, pack, 3000), p.label());
      log.require(pack.types.size() == want.size(), "type count at " + p.label());
      std::size_t total = 0;
      const auto counted = specdec::counted_multiplicities(g);
      for (std::size_t k = 0; k < std::min(want.size(), pack.types.size()); ++k) {
        const auto& t = pack.types[k];
        const auto& w = want[k];
        log.require(t.type.r == w.r && t.type.d == w.d && t.c1 == QSqrt(w.c1) && t.c2 == QSqrt(w.c2) &&
                        t.multiplicity == w.mult,
                    "type " + std::to_string(k) + " at " + p.label());
        log.require(counted.count(t.type) && counted.at(t.type) == t.multiplicity, "counting oracle at " + p.label());
        total += t.multiplicity * static_cast<std::size_t>(t.type.d + 1);
      }
      log.require(total == g.size(), "sum of m(d+1) at " + p.label());
    }
  });

  criterion(5, "quantum relations", 120, [](Log& log) {
    for (const auto& p : {P231, P261}) {
      for (const auto& t : specdec::enumerate_types(p)) log.require(specdec::verify_uqsl2(t, p), p.label());
    }
    const auto& g = gens(P231);
    auto pack = specdec::build_central(g);
    specdec::spectral_decompose(g, pack, 3000);
    log.require(specdec::verify_uqsl2_global(g, pack), "global");
    log.require(specdec::verify_phi_omega(g, pack), "");
    log.require(algebra::verify_relation("REL-24", g, algebra::Mode::Dense, 0, 0), "down-up");
  });

  criterion(6, "case table round trip at (2,6,1)", 900, [](Log& log) {
    const auto& g = gens(P261);
    for (const auto& spec : leonard::sample_cases()) {
      auto [inp, c] = leonard::case_expand(spec, P261);
      auto t = leonard::verify_tridiagonal("TRIDIAG-" + spec.tag, inp, c, g, 5, 7);
      log.require(t, "");
      log.require(t.trials == 5, spec.tag + " trials");
      log.require(leonard::verify_tridiagonal_modules("TRIDIAG-MODULES-" + spec.tag, inp, c, P261), "");
      auto neg = leonard::negative_control(spec, g, 5, 7);
      log.require(neg, "");
      log.require(neg.witness.has_value(), spec.tag + " negative control without witness");
    }
  });

  criterion(7, "block tables at (2,6,1) under I0 and III+", 600, [](Log& log) {
    const auto& g = gens(P261);
    for (const auto& spec : leonard::sample_cases()) {
      if (spec.tag != "I0" && spec.tag != "III+") continue;
      auto [inp, c] = leonard::case_expand(spec, P261);
      auto r = leonard::block_check("BLOCKS-" + spec.tag, inp, c, g, true);
      log.require(r, "");
      log.require(r.components > 100, spec.tag + " compared only " + std::to_string(r.components) + " blocks");
    }
  });

  criterion(8, "Leonard-pair criterion at (2,6,1)", 120, [](Log& log) {
    const auto& cases = leonard::sample_cases();
    const leonard::CaseSpec i0 = cases[2], ip = cases[0];
    log.require(i0.tag == "I0" && i0.x == QSqrt(1) && ip.tag == "I+", "sample order");
    for (const auto& t : specdec::enumerate_types(P261)) {
      auto r = leonard::leonard_check(i0, t, P261);
      log.require(r.pass && r.validation.ok && r.phi_matches_closed_form,
                  "I0 module (" + std::to_string(t.r) + "," + std::to_string(t.d) + ")");
    }
    int forbidden = 0;
    for (const auto& t : specdec::enumerate_types(P261)) {
      if (t.d < 1) continue;
      leonard::CaseSpec s = ip;
      s.x = leonard::forbidden_x(s, t, P261, 1);
      auto r = leonard::leonard_check(s, t, P261);
      ++forbidden;
      log.require(!r.pass && r.condition_index == 1 && r.phi_zero_index == 1 && !r.validation.ok &&
                      r.validation.axiom == 2,
                  "I+ forbidden x on (" + std::to_string(t.r) + "," + std::to_string(t.d) + ")");
    }
    log.require(forbidden > 0, "no module with d >= 1");
  });

  criterion(9, "deterministic reports", 300, [](Log& log) {
    const auto dir = std::filesystem::temp_directory_path() / "attposet-acceptance";
    std::filesystem::create_directories(dir);
    for (const auto& p : {P231, P261}) {
      std::vector<std::string> dumps;
      for (int k = 0; k < 2; ++k) {
        const auto out = dir / ("all_q" + std::to_string(p.q) + "_N" + std::to_string(p.N) + "_M" + std::to_string(p.M) + "_" +
                                std::to_string(k) + ".json");
        std::filesystem::remove(out);
        const std::string cmd = std::string(ATTPOSET_CLI) + " verify --suite all --seed 99 --q " + std::to_string(p.q) +
                                " --N " + std::to_string(p.N) + " --M " + std::to_string(p.M) + " --out " +
                                out.string() + " > /dev/null 2>&1";
        log.require(std::system(cmd.c_str()) == 0, "cli run at " + p.label());
        const auto report = nlohmann::ordered_json::parse(read_file(out));
        dumps.push_back(suites::strip_timing(report).dump(2));
        if (k == 0) {
          std::multiset<std::string> ids;
          for (const auto& c : report["checks"]) ids.insert(c["id"].get<std::string>());
          for (const auto& s : report["skipped"]) ids.insert(s["id"].get<std::string>());
          for (const auto& id : algebra::relation_ids()) log.require(ids.count(id) == 1, id + " listed once at " + p.label());
        }
      }
      log.require(dumps[0] == dumps[1], "reports differ at " + p.label());
    }
  });

  return failures == 0 ? 0 : 1;
}
