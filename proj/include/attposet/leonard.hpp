#pragma once

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "attposet/check.hpp"
#include "attposet/evaluate.hpp"
#include "attposet/specdec.hpp"

namespace attposet::leonard {

using algebra::GeneratorSet;
using algebra::Poly;
using exact::DenseMat;
using exact::QSqrt;
using exact::Rational;
using exact::SparseMat;
using poset::InstanceParams;
using specdec::ModuleType;

// A = Σ α_i R F_i + Σ θ_i F_i and A* = Σ α*_i L F_i + Σ θ*_i F_i.
struct LeonardInput {
  std::vector<QSqrt> alphas;      // α_0..α_{N−1}
  std::vector<QSqrt> alphaStars;  // α*_1..α*_N, stored at index i−1
  std::vector<QSqrt> thetas;      // θ_0..θ_N
  std::vector<QSqrt> thetaStars;  // θ*_0..θ*_N

  int N() const { return static_cast<int>(thetas.size()) - 1; }
  // Zero outside 0..N−1 (resp. 1..N).
  QSqrt alpha(int i) const;
  QSqrt alpha_star(int i) const;
  // ξ_i = α_i α*_{i+1}.
  QSqrt xi(int i) const;
  // Throws std::invalid_argument on a zero α, α* or a repeated θ, θ*.
  void validate() const;
};

struct TDCoeffs {
  QSqrt beta, gamma, gammaStar, rho, rhoStar;
  // β = ±2; such data cannot give B = B* = 0.
  bool degenerate = false;

  bool operator==(const TDCoeffs& o) const {
    return beta == o.beta && gamma == o.gamma && gammaStar == o.gammaStar && rho == o.rho && rhoStar == o.rhoStar;
  }
  nlohmann::ordered_json to_json() const;
};

class FixtureError : public std::runtime_error {
 public:
  FixtureError(std::string path, std::string field, const std::string& what)
      : std::runtime_error(path + ": field '" + field + "': " + what), path(std::move(path)), field(std::move(field)) {}
  std::string path, field;
};

struct CaseSpec {
  std::string tag;  // I+, I-, I0, II+, II-, II0, III+, III-
  QSqrt a, b, c, aStar, bStar, cStar, x;

  // 'I', 'II' or 'III' and the sign character '+', '-', '0'.
  std::string family() const;
  char sign() const;
  // Q = q for families I and III, q⁻¹ for II.
  QSqrt Q(int q) const;
  // Throws std::invalid_argument unless the zero pattern matches the tag.
  void validate() const;

  nlohmann::ordered_json to_json() const;
  // Values are rational strings "p/q" or integers. `where` names the source
  // in error messages.
  static CaseSpec from_json(const nlohmann::json& j, const std::string& where = "<json>");
  static CaseSpec load(const std::filesystem::path& path);
};

const std::vector<std::string>& case_tags();
// One sample per tag with small integer parameters; same values as fixtures/.
const std::vector<CaseSpec>& sample_cases();

struct ParameterArray {
  std::vector<QSqrt> theta, thetaStar;  // indices 0..d
  std::vector<QSqrt> varphi, phi;       // indices 1..d, stored at i−1

  int d() const { return static_cast<int>(theta.size()) - 1; }
  nlohmann::ordered_json to_json() const;
};

// First failed axiom of the parameter array definition, if any.
struct ArrayValidation {
  bool ok = true;
  int axiom = 0;  // 1..5
  int index = 0;
  std::string note;
};

ArrayValidation validate_parameter_array(const ParameterArray& pa);

std::pair<SparseMat, SparseMat> build_A_Astar(const LeonardInput& inp, const GeneratorSet& g);
// Lower bidiagonal A and upper bidiagonal A* on the model w_0..w_d of type t.
std::pair<DenseMat, DenseMat> build_A_Astar(const LeonardInput& inp, const specdec::ModuleModel& m,
                                            const InstanceParams& p);

// B and B* as polynomials in the atoms "A" and "As".
Poly b_poly(const TDCoeffs& c);
Poly bstar_poly(const TDCoeffs& c);
// [A, A²A* − βAA*A + A*A² − γ(AA*+A*A) − ϱA*] and its starred twin.
Poly b_commutator_poly(const TDCoeffs& c);
Poly bstar_commutator_poly(const TDCoeffs& c);

// β, γ, γ*, ϱ, ϱ* from the three-term recurrences. Requires N ≥ 3; throws
// std::invalid_argument when the recurrences disagree.
TDCoeffs standard_params(const std::vector<QSqrt>& thetas, const std::vector<QSqrt>& thetaStars);

// Coefficients from the closed forms in a, b, c, a*, b*, c*, Q.
TDCoeffs case_coeffs(const CaseSpec& spec, int q);

// θ, θ*, ξ from the case row. α_i defaults to 1 and α*_{i+1} = ξ_i/α_i; pass
// gauge = α_0..α_{N−1} to factor differently.
std::pair<LeonardInput, TDCoeffs> case_expand(const CaseSpec& spec, const InstanceParams& p,
                                              const std::vector<QSqrt>& gauge = {});

// ξ_i straight from the case row, 0 ≤ i ≤ N−1.
std::vector<QSqrt> case_xi(const CaseSpec& spec, const InstanceParams& p);

enum class Shape { Quadratic, Alternating, Generic };
std::string shape_name(Shape s);

struct RecurrenceFit {
  Shape shape = Shape::Generic;
  QSqrt a, b, c;
  QSqrt Q;  // Generic only; the root with Q > 1 (or the larger one)
};

// Fits a + bi + ci² (β = 2), a + b(−1)^i + ci(−1)^i (β = −2) or a + bQ^i + cQ^{−i}.
// Throws std::invalid_argument when fewer than 4 terms are given, when Q is
// not in Q(√q), or when the sequence does not follow the shape.
RecurrenceFit beta_fit(const std::vector<QSqrt>& seq, const QSqrt& beta);

// ♥_i for 0 ≤ i ≤ N−2.
QSqrt heartsuit(int i, const std::vector<QSqrt>& thetas, const std::vector<QSqrt>& thetaStars, const QSqrt& beta);

// B = 0 and B* = 0 on the whole standard module, matrix-free.
CheckResult verify_tridiagonal(const std::string& id, const LeonardInput& inp, const TDCoeffs& c, const GeneratorSet& g,
                               int trials, std::uint64_t seed);
// B = 0 and B* = 0 on every module model of the instance, dense.
CheckResult verify_tridiagonal_modules(const std::string& id, const LeonardInput& inp, const TDCoeffs& c,
                                       const InstanceParams& p);

// Adds 1 to θ_{N/2} while keeping the coefficients and expects B ≠ 0
// matrix-free. Passes when a nonzero entry is found; the witness locates it.
CheckResult negative_control(const CaseSpec& spec, const GeneratorSet& g, int trials, std::uint64_t seed);

// Every block F_j B F_i and F_j B* F_i against the weighted-sum tables,
// exactly, on representative columns of grade i. The general tables hold for
// any coefficients; with standard = true the simplified tables that assume
// the three-term recurrences are checked too.
CheckResult block_check(const std::string& id, const LeonardInput& inp, const TDCoeffs& c, const GeneratorSet& g,
                        bool standard);

// Scalar identities of a case: both ♥ formulas, the ξ recurrences, β ≠ ±2,
// closed-form coefficients against standard_params, recovery of the case
// shapes by beta_fit and per-module agreement of the recurrence scalars.
CheckResult verify_case_scalars(const CaseSpec& spec, const InstanceParams& p);

struct LeonardResult {
  ModuleType type;
  bool pass = false;
  // First i in 1..d violating the x condition.
  std::optional<int> condition_index;
  // First i with ϕ_i = 0 in the assembled array.
  std::optional<int> phi_zero_index;
  ParameterArray array;
  ArrayValidation validation;
  bool phi_matches_closed_form = true;

  nlohmann::ordered_json to_json() const;
};

// Right side of the x condition for index i: q^{r+d−N−M}(q−1)²(bc*+cb*)q^{−i}.
QSqrt forbidden_x(const CaseSpec& spec, const ModuleType& t, const InstanceParams& p, int i);

// ϕ_i from the per-case closed form.
QSqrt phi_closed_form(const CaseSpec& spec, const ModuleType& t, const InstanceParams& p, int i);

LeonardResult leonard_check(const CaseSpec& spec, const ModuleType& t, const InstanceParams& p);

}  // namespace attposet::leonard
