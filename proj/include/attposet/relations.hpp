#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "attposet/check.hpp"
#include "attposet/evaluate.hpp"

namespace attposet::algebra {

enum class Mode { Dense, MatrixFree, Auto };

Mode parse_mode(const std::string& s);
std::string mode_name(Mode m);

inline constexpr std::size_t kDefaultDenseCap = 3000;

// REL-01..REL-19, REL-22..REL-25 in report order.
const std::vector<std::string>& relation_ids();
// Ids that only make sense for N ≥ 6.
bool needs_large_n(const std::string& id);

// C1 = q⁻¹(q−1)⁻¹(q+1)K + RL − q⁻¹LR.
Poly c1_poly(const poset::InstanceParams& p);
// C2 = K² + (q−1)RLK − (q−1)LRK.
Poly c2_poly(const poset::InstanceParams& p);

// The identities making up one relation id. Throws invalid_argument for ids
// without a polynomial form (REL-18) or unknown ids.
std::vector<Component> relation_components(const std::string& id, const poset::InstanceParams& p);

// Auto resolves to dense iff |P| ≤ dense_cap. REL-18 and REL-19 are exact
// block checks and ignore trials.
CheckResult verify_relation(const std::string& id, const GeneratorSet& g, Mode mode, int trials, std::uint64_t seed,
                            std::size_t dense_cap = kDefaultDenseCap);

// LIN-94 / LIN-95. Requires N ≥ 6.
CheckResult verify_independence(const std::string& id, const GeneratorSet& g);

// Whether the maps p·F_grade (p in polys) are linearly independent, judged on
// the given columns of that grade. The automorphism group of the poset is
// transitive on each grade and commutes with R, L, K, so a single column
// already decides the question; callers may pass more as a cross-check.
bool independent_on_columns(const GeneratorSet& g, const std::vector<Poly>& polys, const std::vector<std::size_t>& cols);

// First, middle and last index of grade i.
std::vector<std::size_t> representative_columns(const GeneratorSet& g, int grade);

}  // namespace attposet::algebra
