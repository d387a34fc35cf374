#pragma once

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "attposet/relations.hpp"

namespace attposet::suites {

inline constexpr const char* kToolName = "attposet";
inline constexpr const char* kToolVersion = "1.0.0";

struct RunConfig {
  std::string command = "verify";
  poset::InstanceParams params;
  std::string suite = "all";  // poset, relations, spectrum, quantum, leonard, all
  algebra::Mode mode = algebra::Mode::Auto;
  int trials = 5;
  std::uint64_t seed = 42;
  std::size_t dense_cap = algebra::kDefaultDenseCap;
  std::optional<std::filesystem::path> cache;
  std::optional<std::filesystem::path> case_path;
  int theta_power = 0;
  int omega_power = 0;

  // Throws std::invalid_argument on an unknown suite or bad parameters.
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

const std::vector<std::string>& suite_names();

// Runs the suite and returns the report {tool, version, config, checks,
// skipped, summary}. When table is non-null one line per check is printed.
// Throws std::invalid_argument or leonard::FixtureError on configuration errors.
nlohmann::ordered_json run(const RunConfig& cfg, std::ostream* table = nullptr);

// Copy of a report without elapsed_ms fields.
nlohmann::ordered_json strip_timing(const nlohmann::ordered_json& report);

}  // namespace attposet::suites
