#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "attposet/gfq.hpp"

namespace attposet::poset {

struct InstanceParams {
  int q = 2;
  int N = 1;
  int M = 1;

  int dim() const { return N + M; }
  // Throws std::invalid_argument on a non-prime q or non-positive N, M.
  void validate() const;
  std::string label() const;
  bool operator==(const InstanceParams&) const = default;
};

// Number of i-dimensional subspaces of F_q^n.
std::uint64_t gauss(int n, int i, int q);
// gauss(N,i,q)·q^{iM}.
std::uint64_t grade_size(const InstanceParams& p, int i);
std::uint64_t poset_size(const InstanceParams& p);

struct SubspaceCanon {
  int dim = 0;
  gfq::GFMatrix basis;  // dim × (N+M), reduced, every pivot column < N

  std::string key() const;
  bool operator==(const SubspaceCanon&) const = default;
};

// Canonical form of the row space of m; nullopt if it meets h nontrivially.
std::optional<SubspaceCanon> canonicalize(const gfq::GFMatrix& m, int N);

class Poset {
 public:
  Poset(InstanceParams params, std::vector<std::vector<SubspaceCanon>> grades);

  const InstanceParams& params() const { return params_; }
  std::size_t size() const { return offsets_.back(); }
  int rank() const { return params_.N; }
  const std::vector<SubspaceCanon>& grade(int i) const { return grades_[static_cast<std::size_t>(i)]; }
  // Global index of the first element of grade i; offset(N+1) = size().
  std::size_t offset(int i) const { return offsets_[static_cast<std::size_t>(i)]; }
  std::size_t grade_count(int i) const { return grade(i).size(); }
  int grade_of(std::size_t index) const;
  const SubspaceCanon& element(std::size_t index) const;
  std::optional<std::size_t> index_of(const SubspaceCanon& x) const;
  std::optional<std::size_t> index_of_key(const std::string& key) const;

  friend bool operator==(const Poset& a, const Poset& b) { return a.params_ == b.params_ && a.grades_ == b.grades_; }

 private:
  InstanceParams params_;
  std::vector<std::vector<SubspaceCanon>> grades_;
  std::vector<std::size_t> offsets_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

class ResourceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

Poset enumerate(const InstanceParams& params, std::uint64_t cap = kDefaultEnumerationCap);

bool covers(const SubspaceCanon& x, const SubspaceCanon& y);
// x, y in the same grade; true iff x+y has dimension i+1 and meets h in a line.
bool in_tilde(const SubspaceCanon& x, const SubspaceCanon& y, const InstanceParams& params);

// Global indices of the elements of grade i-1 covered by the element at index.
std::vector<std::size_t> lower_covers(const Poset& p, std::size_t index);
// Global indices y with in_tilde(x, y), built from x + <u> with u ∈ h.
std::vector<std::size_t> tilde_neighbors(const Poset& p, std::size_t index);

class CacheError : public std::runtime_error {
 public:
  enum class Kind { Malformed, Version, Param, Checksum, Io };
  CacheError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

void save_cache(const Poset& p, const std::filesystem::path& path);
Poset load_cache(const std::filesystem::path& path);
// $ATTPOSET_CACHE_DIR (or ".attposet-cache") / A_q<q>_N<N>_M<M>.json
std::filesystem::path default_cache_path(const InstanceParams& params);
// Loads from path when present and matching params; otherwise enumerates and
// writes the cache.
Poset load_or_enumerate(const InstanceParams& params, const std::filesystem::path& path,
                        std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace attposet::poset
