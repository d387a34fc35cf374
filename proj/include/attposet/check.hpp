#pragma once

#include "json.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "attposet/qsqrt.hpp"

namespace attposet {

// Location and values where an identity failed. Dense and block modes fill
// row/col; matrix-free mode fills trial/index.
struct Witness {
  std::string component;
  std::optional<std::size_t> row;
  std::optional<std::size_t> col;
  std::optional<int> trial;
  std::optional<std::size_t> index;
  std::optional<exact::QSqrt> lhs;
  std::optional<exact::QSqrt> rhs;
  std::string note;

  nlohmann::ordered_json to_json() const;
};

struct CheckResult {
  std::string id;
  bool pass = false;
  std::string mode;
  int trials = 0;
  std::uint64_t seed = 0;
  std::optional<Witness> witness;
  std::size_t components = 0;
  std::string detail;
  nlohmann::ordered_json data;  // check-specific payload, null when unused
  double elapsed_ms = 0;

  nlohmann::ordered_json to_json() const;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace attposet
