#include "attposet/suites.hpp"

#include <iomanip>

#include "attposet/leonard.hpp"
#include "attposet/specdec.hpp"

namespace attposet::suites {

namespace {

using algebra::GeneratorSet;
using nlohmann::ordered_json;

struct Run {
  const RunConfig& cfg;
  std::ostream* table;
  ordered_json checks = ordered_json::array();
  ordered_json skipped = ordered_json::array();
  std::size_t passed = 0, failed = 0;

  void add(const CheckResult& r) {
    checks.push_back(r.to_json());
    (r.pass ? passed : failed) += 1;
    if (table) {
      *table << (r.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(22) << r.id << std::setw(12) << r.mode
             << r.detail;
      if (!r.pass && r.witness) *table << "  [" << r.witness->component << "]";
      *table << "\n";
    }
  }
  void skip(const std::string& id, const std::string& reason) {
    skipped.push_back({{"id", id}, {"reason", reason}});
    if (table) *table << "SKIP  " << std::left << std::setw(22) << id << reason << "\n";
  }
};

std::string type_label(const specdec::ModuleType& t) {
  return "(" + std::to_string(t.r) + "," + std::to_string(t.d) + ")";
}

void poset_suite(Run& run, const poset::Poset& P, const GeneratorSet& g) {
  const auto& p = P.params();
  {
    Stopwatch sw;
    CheckResult r;
    r.id = "POSET-GRADES";
    r.mode = "exact";
    r.pass = true;
    ordered_json sizes = ordered_json::array();
    for (int i = 0; i <= p.N; ++i) {
      ++r.components;
      sizes.push_back(P.grade_count(i));
      if (P.grade_count(i) != poset::grade_size(p, i) && r.pass) {
        r.pass = false;
        Witness w;
        w.component = "grade " + std::to_string(i);
        w.note = "enumerated " + std::to_string(P.grade_count(i)) + ", expected " + std::to_string(poset::grade_size(p, i));
        r.witness = w;
      }
    }
    r.data = {{"grade_sizes", sizes}, {"total", P.size()}};
    r.detail = "|P| = " + std::to_string(P.size());
    r.elapsed_ms = sw.ms();
    run.add(r);
  }
  {
    // x in grade i covers exactly (q^i − 1)/(q − 1) elements.
    Stopwatch sw;
    CheckResult r;
    r.id = "POSET-COVERS";
    r.mode = "exact";
    r.pass = true;
    for (std::size_t x = 0; x < g.size() && r.pass; ++x) {
      ++r.components;
      const int i = g.grade_of(x);
      const std::uint64_t want = poset::gauss(i, 1, p.q);
      if (g.R.row_cols(x).size() != want) {
        r.pass = false;
        Witness w;
        w.component = "lower covers";
        w.row = x;
        w.note = "found " + std::to_string(g.R.row_cols(x).size()) + ", expected " + std::to_string(want);
        r.witness = w;
      }
    }
    r.detail = "R nnz = " + std::to_string(g.R.nnz());
    r.elapsed_ms = sw.ms();
    run.add(r);
  }
}

void relations_suite(Run& run, const GeneratorSet& g) {
  const auto& cfg = run.cfg;
  const bool large = g.params.N >= 6;
  for (const auto& id : algebra::relation_ids()) {
    if (algebra::needs_large_n(id) && !large) {
      run.skip(id, "requires N >= 6");
      continue;
    }
    run.add(algebra::verify_relation(id, g, cfg.mode, cfg.trials, cfg.seed, cfg.dense_cap));
  }
  for (const std::string id : {"LIN-94", "LIN-95"}) {
    if (large) {
      run.add(algebra::verify_independence(id, g));
    } else {
      run.skip(id, "requires N >= 6");
    }
  }
}

void spectrum_suite(Run& run, const GeneratorSet& g, specdec::CentralPack& pack) {
  const auto& p = g.params;
  if (g.size() <= run.cfg.dense_cap) {
    run.add(specdec::verify_spectrum(g, pack, run.cfg.dense_cap));
  } else {
    run.skip("SPEC", "|P| = " + std::to_string(g.size()) + " exceeds dense cap " + std::to_string(run.cfg.dense_cap));
  }
  for (const auto& t : specdec::enumerate_types(p)) {
    CheckResult r = specdec::verify_module_relations(t, p);
    r.id = "MOD-REL-" + type_label(t);
    run.add(r);
  }
}

void quantum_suite(Run& run, const GeneratorSet& g, specdec::CentralPack& pack) {
  const auto& p = g.params;
  const int a = run.cfg.theta_power, b = run.cfg.omega_power;
  for (const auto& t : specdec::enumerate_types(p)) run.add(specdec::verify_uqsl2(t, p, a, b));
  if (g.size() > run.cfg.dense_cap) {
    const std::string why = "|P| = " + std::to_string(g.size()) + " exceeds dense cap " + std::to_string(run.cfg.dense_cap);
    run.skip("UQSL2-GLOBAL", why);
    run.skip("PHI-OMEGA", why);
    return;
  }
  if (!pack.decomposed) specdec::spectral_decompose(g, pack, run.cfg.dense_cap);
  run.add(specdec::verify_uqsl2_global(g, pack, a, b));
  run.add(specdec::verify_phi_omega(g, pack));
}

const std::vector<std::string> kLeonardPrefixes = {"SCALARS", "TRIDIAG", "TRIDIAG-MODULES", "NEG", "BLOCKS", "LEONARD"};

CheckResult leonard_modules(const leonard::CaseSpec& spec, const poset::InstanceParams& p) {
  Stopwatch sw;
  CheckResult r;
  r.id = "LEONARD-" + spec.tag;
  r.mode = "exact";
  r.pass = true;
  ordered_json mods = ordered_json::array();
  for (const auto& t : specdec::enumerate_types(p)) {
    ++r.components;
    auto res = leonard::leonard_check(spec, t, p);
    mods.push_back(res.to_json());
    if (!res.pass && r.pass) {
      r.pass = false;
      Witness w;
      w.component = type_label(t);
      if (res.condition_index) w.note = "x condition fails at i = " + std::to_string(*res.condition_index);
      if (res.phi_zero_index) w.note += "; phi_" + std::to_string(*res.phi_zero_index) + " = 0";
      if (!res.validation.ok) w.note += "; axiom " + std::to_string(res.validation.axiom) + ": " + res.validation.note;
      r.witness = w;
    }
  }
  r.data = {{"case", spec.to_json()}, {"modules", mods}};
  r.detail = std::to_string(mods.size()) + " modules";
  r.elapsed_ms = sw.ms();
  return r;
}

void leonard_suite(Run& run, const GeneratorSet& g) {
  const auto& cfg = run.cfg;
  std::vector<leonard::CaseSpec> cases;
  if (cfg.case_path) {
    cases.push_back(leonard::CaseSpec::load(*cfg.case_path));
  } else {
    cases = leonard::sample_cases();
  }
  for (const auto& spec : cases) {
    if (g.params.N < 6) {
      for (const auto& pre : kLeonardPrefixes) run.skip(pre + "-" + spec.tag, "requires N >= 6");
      continue;
    }
    auto [inp, coeffs] = leonard::case_expand(spec, g.params);
    run.add(leonard::verify_case_scalars(spec, g.params));
    CheckResult t = leonard::verify_tridiagonal("TRIDIAG-" + spec.tag, inp, coeffs, g, cfg.trials, cfg.seed);
    t.data = {{"case", spec.to_json()}, {"coefficients", coeffs.to_json()}};
    run.add(t);
    run.add(leonard::verify_tridiagonal_modules("TRIDIAG-MODULES-" + spec.tag, inp, coeffs, g.params));
    run.add(leonard::negative_control(spec, g, cfg.trials, cfg.seed));
    run.add(leonard::block_check("BLOCKS-" + spec.tag, inp, coeffs, g, true));
    run.add(leonard_modules(spec, g.params));
  }
}

void strip(ordered_json& j) {
  if (j.is_object()) {
    j.erase("elapsed_ms");
    for (auto& [k, v] : j.items()) strip(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip(v);
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"poset", "relations", "spectrum", "quantum", "leonard", "all"};
  return names;
}

void RunConfig::validate() const {
  params.validate();
  bool ok = false;
  for (const auto& s : suite_names()) ok = ok || s == suite;
  if (!ok) throw std::invalid_argument("unknown suite '" + suite + "'");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
}

ordered_json RunConfig::to_json() const {
  ordered_json j;
  j["command"] = command;
  j["q"] = params.q;
  j["N"] = params.N;
  j["M"] = params.M;
  j["suite"] = suite;
  j["mode"] = algebra::mode_name(mode);
  j["trials"] = trials;
  j["seed"] = seed;
  j["dense_cap"] = dense_cap;
  j["case"] = case_path ? ordered_json(case_path->string()) : ordered_json(nullptr);
  j["theta_power"] = theta_power;
  j["omega_power"] = omega_power;
  return j;
}

ordered_json run(const RunConfig& cfg, std::ostream* table) {
  cfg.validate();
  if (cfg.case_path) leonard::CaseSpec::load(*cfg.case_path);  // fail early on a bad fixture
  const poset::Poset P = cfg.cache ? poset::load_or_enumerate(cfg.params, *cfg.cache) : poset::enumerate(cfg.params);
  const GeneratorSet g = algebra::build_generators(P);
  Run r{cfg, table};
  const bool all = cfg.suite == "all";
  specdec::CentralPack pack;
  const bool central = all || cfg.suite == "spectrum" || cfg.suite == "quantum";
  if (central) pack = specdec::build_central(g);
  if (all || cfg.suite == "poset") poset_suite(r, P, g);
  if (all || cfg.suite == "relations") relations_suite(r, g);
  if (all || cfg.suite == "spectrum") spectrum_suite(r, g, pack);
  if (all || cfg.suite == "quantum") quantum_suite(r, g, pack);
  if (all || cfg.suite == "leonard") leonard_suite(r, g);

  ordered_json report;
  report["tool"] = kToolName;
  report["version"] = kToolVersion;
  report["config"] = cfg.to_json();
  report["checks"] = std::move(r.checks);
  report["skipped"] = std::move(r.skipped);
  report["summary"] = {{"total", r.passed + r.failed},
                       {"passed", r.passed},
                       {"failed", r.failed},
                       {"skipped", report["skipped"].size()},
                       {"pass", r.failed == 0}};
  if (table) {
    *table << r.passed << " passed, " << r.failed << " failed, " << report["skipped"].size() << " skipped\n";
  }
  return report;
}

ordered_json strip_timing(const ordered_json& report) {
  ordered_json out = report;
  strip(out);
  return out;
}

}  // namespace attposet::suites
