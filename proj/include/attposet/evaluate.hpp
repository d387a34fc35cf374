#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "attposet/check.hpp"
#include "attposet/generators.hpp"
#include "attposet/poly.hpp"

namespace attposet::algebra {

using exact::Rational;

// One identity lhs = rhs between polynomials in bound atoms.
struct Component {
  std::string label;
  Poly lhs;
  Poly rhs;
};

class CapExceeded : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Names → square matrices of one size. "X^t" resolves to the transpose of X
// unless bound explicitly.
class Binding {
 public:
  explicit Binding(std::size_t n) : n_(n) {}
  // R, L, K, Ki, S, F0..FN.
  static Binding standard(const GeneratorSet& g);

  void set(const std::string& name, SparseMat m);
  void set(const std::string& name, std::shared_ptr<const SparseMat> m);
  bool has(const std::string& name) const;
  const SparseMat& get(const std::string& name) const;
  std::shared_ptr<const SparseMat> share(const std::string& name) const;
  std::size_t dim() const { return n_; }

 private:
  std::size_t n_;
  mutable std::map<std::string, std::shared_ptr<const SparseMat>> mats_;
};

using SparseVec = std::vector<std::pair<std::uint32_t, QSqrt>>;

struct Outcome {
  bool pass = true;
  std::optional<Witness> witness;
  std::string engine;  // "int128" or "qsqrt" for matrix-free runs
};

// Evaluates identities exactly after clearing denominators: each atom X is
// replaced by δ_X·X with δ_X the lcm of its entry denominators, and every
// coefficient is rescaled so the whole identity lives in Z[√q].
class Evaluator {
 public:
  explicit Evaluator(const Binding& b) : b_(b) {}

  // Full sparse products; throws CapExceeded above dense_cap.
  Outcome dense(const Component& c, std::size_t dense_cap);
  // identity·v = 0 on `trials` vectors with entries uniform in [0, 10^6],
  // generated by mt19937_64 seeded with seed + trial.
  Outcome matrix_free(const Component& c, int trials, std::uint64_t seed);
  // Exact comparison of the columns indexed by cols.
  Outcome columns(const Component& c, const std::vector<std::size_t>& cols);

  // p·e_col, exact and sparse.
  SparseVec apply_to_basis(const Poly& p, std::size_t col);
  // Full matrix of p (no denominator clearing needed by callers).
  SparseMat matrix(const Poly& p);

  void clear_memo();

 private:
  struct Atom {
    std::shared_ptr<const SparseMat> scaled;  // δ·X
    Rational delta;
    std::shared_ptr<const SparseMat> scaled_t;
    bool int_ok = false;
    std::vector<std::size_t> ptr;
    std::vector<std::uint32_t> col;
    std::vector<std::int64_t> val;
  };
  struct Prepared {
    std::vector<Term> lhs, rhs;
    Rational G;  // both sides were multiplied by G
  };

  Atom& atom(const std::string& name);
  Prepared prepare(const Component& c);
  const SparseMat& product(const Word& w, std::size_t from);

  const Binding& b_;
  std::map<std::string, Atom> atoms_;
  std::map<Word, SparseMat> memo_;
};

std::string int128_to_string(__int128 v);

}  // namespace attposet::algebra
