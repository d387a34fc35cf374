#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "attposet/leonard.hpp"
#include "attposet/suites.hpp"

namespace {

using attposet::suites::RunConfig;

struct Flags {
  int q = 2, N = 3, M = 1;
  std::string suite = "all";
  std::string mode = "auto";
  int trials = 5;
  std::uint64_t seed = 42;
  std::size_t dense_cap = attposet::algebra::kDefaultDenseCap;
  std::string cache, out, case_path;
  int theta_power = 0, omega_power = 0;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--q", f.q, "prime field size");
  sub->add_option("--N", f.N, "rank");
  sub->add_option("--M", f.M, "dimension of the attenuating space");
  sub->add_option("--mode", f.mode, "dense | matrix-free | auto");
  sub->add_option("--trials", f.trials, "random vectors per matrix-free identity");
  sub->add_option("--seed", f.seed, "base seed for matrix-free vectors");
  sub->add_option("--dense-cap", f.dense_cap, "largest |P| evaluated densely");
  sub->add_option("--cache", f.cache, "poset cache file");
  sub->add_option("--out", f.out, "write the JSON report here");
}

int emit(const nlohmann::ordered_json& report, const std::string& out) {
  if (out.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "error: cannot write " << out << "\n";
      return 2;
    }
    f << report.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact model of the attenuated space poset A_q(N,M) and its incidence algebra"};
  app.require_subcommand(1);
  Flags f;
  auto* enumerate = app.add_subcommand("enumerate", "enumerate the poset and check grade and cover counts");
  auto* verify = app.add_subcommand("verify", "run a check suite");
  auto* spectrum = app.add_subcommand("spectrum", "decompose the standard module by central characters");
  auto* quantum = app.add_subcommand("quantum", "Chevalley relations per module and globally");
  auto* leonard = app.add_subcommand("leonard", "tridiagonal pairs from the case table and Leonard-pair checks");
  auto* cache = app.add_subcommand("cache", "build or load the poset cache and print its location");
  for (auto* s : {enumerate, verify, spectrum, quantum, leonard, cache}) add_common(s, f);
  verify->add_option("--suite", f.suite, "poset | relations | spectrum | quantum | leonard | all");
  leonard->add_option("--case", f.case_path, "case fixture JSON");
  for (auto* s : {verify, quantum}) {
    s->add_option("--theta-power", f.theta_power, "A in Θ = Φ^A Ω^B");
    s->add_option("--omega-power", f.omega_power, "B in Θ = Φ^A Ω^B");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg;
  cfg.params = {f.q, f.N, f.M};
  cfg.trials = f.trials;
  cfg.seed = f.seed;
  cfg.dense_cap = f.dense_cap;
  cfg.theta_power = f.theta_power;
  cfg.omega_power = f.omega_power;
  if (!f.case_path.empty()) cfg.case_path = f.case_path;
  if (!f.cache.empty()) {
    cfg.cache = f.cache;
  } else if (const char* env = std::getenv("ATTPOSET_CACHE_DIR"); env && *env) {
    cfg.cache = attposet::poset::default_cache_path(cfg.params);
  }
  const auto* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  if (chosen == enumerate) cfg.suite = "poset";
  if (chosen == verify) cfg.suite = f.suite;
  if (chosen == spectrum) cfg.suite = "spectrum";
  if (chosen == quantum) cfg.suite = "quantum";
  if (chosen == leonard) cfg.suite = "leonard";

  try {
    cfg.mode = attposet::algebra::parse_mode(f.mode);
    if (chosen == cache) {
      cfg.params.validate();
      const auto path = cfg.cache ? *cfg.cache : attposet::poset::default_cache_path(cfg.params);
      const auto P = attposet::poset::load_or_enumerate(cfg.params, path);
      nlohmann::ordered_json j;
      j["path"] = path.string();
      j["size"] = P.size();
      return emit(j, f.out);
    }
    // Without --out the JSON owns stdout and the table goes to stderr.
    std::ostream& table = f.out.empty() ? std::cerr : std::cout;
    const auto report = attposet::suites::run(cfg, &table);
    if (const int rc = emit(report, f.out)) return rc;
    return report["summary"]["pass"].get<bool>() ? 0 : 1;
  } catch (const attposet::leonard::FixtureError& e) {
    std::cerr << "fixture error: " << e.what() << "\n";
  } catch (const attposet::algebra::CapExceeded& e) {
    std::cerr << "resource error: " << e.what() << "\n";
  } catch (const attposet::poset::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
  } catch (const attposet::poset::CacheError& e) {
    std::cerr << "cache error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
  }
  return 2;
}
