#pragma once

#include <cstddef>
#include <vector>

#include "attposet/poset.hpp"
#include "attposet/sparse.hpp"

namespace attposet::algebra {

using exact::SparseMat;

struct GeneratorSet {
  poset::InstanceParams params;
  std::vector<std::size_t> offsets;  // grade i occupies [offsets[i], offsets[i+1])
  SparseMat R, L, K, Kinv, S;
  std::vector<SparseMat> F;

  std::size_t size() const { return offsets.back(); }
  std::size_t grade_count(int i) const { return offsets[static_cast<std::size_t>(i) + 1] - offsets[static_cast<std::size_t>(i)]; }
  int grade_of(std::size_t index) const;
};

// R_{xy} = 1 iff x covers y; L = R^t; S_{xy} = 1 iff x, y share a grade and
// x + y meets h in a line; K = Σ q^{N+M-i} F_i.
GeneratorSet build_generators(const poset::Poset& p);

}  // namespace attposet::algebra
