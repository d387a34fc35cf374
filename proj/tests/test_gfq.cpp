#include <gtest/gtest.h>

#include <map>
#include <set>

#include "attposet/gfq.hpp"

using namespace attposet::gfq;

TEST(Field, RejectsComposite) {
  EXPECT_THROW(FieldScalar(1, 4), std::invalid_argument);
  EXPECT_NO_THROW(FieldScalar(1, 5));
}

TEST(Field, InverseTimesSelf) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (std::uint32_t v = 1; v < p; ++v) {
      FieldScalar x(v, p);
      EXPECT_EQ((x * x.inverse()).value(), 1u);
    }
  }
}

TEST(Rref, EmptyMatrix) {
  GFMatrix m(0, 3, 2);
  auto r = rref(m);
  EXPECT_EQ(r.rank, 0u);
  EXPECT_TRUE(r.pivots.empty());
  EXPECT_EQ(r.reduced.rows(), 0u);
}

TEST(Rref, IdentityIsReduced) {
  auto r = rref(GFMatrix::identity(3, 2));
  EXPECT_EQ(r.reduced, GFMatrix::identity(3, 2));
  EXPECT_EQ(r.pivots_one_based(), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(r.rank, 3u);
}

TEST(Rref, HandReduction) {
  auto r = rref(GFMatrix::from_rows(2, {{1, 1, 0}, {0, 1, 1}}));
  EXPECT_EQ(r.reduced, GFMatrix::from_rows(2, {{1, 0, 1}, {0, 1, 1}}));
  EXPECT_EQ(r.pivots_one_based(), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(r.rank, 2u);
}

TEST(Rref, DropsZeroRowsAndIsIdempotent) {
  auto m = GFMatrix::from_rows(3, {{1, 2, 0}, {2, 1, 0}, {0, 0, 0}});
  auto r = rref(m);
  EXPECT_EQ(r.rank, 1u);
  EXPECT_EQ(rref(r.reduced).reduced, r.reduced);
}

TEST(Containment, Examples) {
  auto b = GFMatrix::from_rows(2, {{1, 0, 0}});
  std::vector<std::uint8_t> zero{0, 0, 0}, e2{0, 1, 0};
  EXPECT_TRUE(row_space_contains(b, zero));
  EXPECT_FALSE(row_space_contains(b, e2));
  auto b2 = GFMatrix::from_rows(2, {{1, 0, 1}, {0, 1, 1}});
  std::vector<FieldScalar> v{{1, 2}, {1, 2}, {0, 2}};
  EXPECT_TRUE(row_space_contains(b2, v));
  std::vector<std::uint8_t> wrong{1, 0};
  EXPECT_THROW(row_space_contains(b2, wrong), std::invalid_argument);
}

TEST(StackRank, Examples) {
  EXPECT_EQ(stack_rank(GFMatrix::identity(2, 2), GFMatrix::identity(2, 2)), 2u);
  EXPECT_EQ(stack_rank(GFMatrix::from_rows(2, {{1, 0}}), GFMatrix::from_rows(2, {{0, 1}})), 2u);
  EXPECT_EQ(stack_rank(GFMatrix::from_rows(2, {{1, 1, 0}}), GFMatrix::from_rows(2, {{0, 1, 1}, {1, 0, 1}})), 2u);
  EXPECT_THROW(stack_rank(GFMatrix(1, 2, 2), GFMatrix(1, 3, 2)), std::invalid_argument);
}

namespace {

std::vector<std::vector<std::uint8_t>> all_vectors(std::size_t n) {
  std::vector<std::vector<std::uint8_t>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::uint8_t> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = (mask >> k) & 1u;
    out.push_back(v);
  }
  return out;
}

GFMatrix from_vecs(const std::vector<std::vector<std::uint8_t>>& rows, std::size_t n) {
  GFMatrix m(rows.size(), n, 2);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < n; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

// A subspace of F_2^n as the sorted set of its vectors.
std::set<std::vector<std::uint8_t>> span_of(const GFMatrix& m) {
  std::set<std::vector<std::uint8_t>> s;
  for (std::uint32_t mask = 0; mask < (1u << m.rows()); ++mask) {
    std::vector<std::uint8_t> v(m.cols(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if ((mask >> r) & 1u) {
        for (std::size_t c = 0; c < m.cols(); ++c) v[c] ^= m.at(r, c);
      }
    }
    s.insert(v);
  }
  return s;
}

}  // namespace

TEST(Rref, OneRepresentativePerSubspace) {
  // Every basis of every subspace of F_2^n canonicalizes to the same matrix,
  // and distinct subspaces get distinct matrices.
  for (std::size_t n = 1; n <= 4; ++n) {
    auto vecs = all_vectors(n);
    std::map<std::set<std::vector<std::uint8_t>>, std::vector<std::uint8_t>> canon;
    for (std::uint32_t a = 0; a < vecs.size(); ++a) {
      for (std::uint32_t b = 0; b < vecs.size(); ++b) {
        for (std::uint32_t c = 0; c < (n >= 3 ? vecs.size() : 1u); ++c) {
          auto m = from_vecs({vecs[a], vecs[b], vecs[c]}, n);
          auto r = rref(m);
          auto key = span_of(m);
          auto [it, fresh] = canon.emplace(key, r.reduced.data());
          if (!fresh) EXPECT_EQ(it->second, r.reduced.data());
          EXPECT_EQ(span_of(r.reduced), key);
        }
      }
    }
    std::set<std::vector<std::uint8_t>> reps;
    for (auto& [k, v] : canon) reps.insert(v);
    EXPECT_EQ(reps.size(), canon.size());
  }
}

TEST(StackRank, SubadditiveWithEqualityIffTrivialIntersection) {
  const std::size_t n = 4;
  auto vecs = all_vectors(n);
  std::vector<GFMatrix> subspaces;
  std::set<std::vector<std::uint8_t>> seen;
  for (std::uint32_t a = 0; a < vecs.size(); ++a) {
    for (std::uint32_t b = a; b < vecs.size(); ++b) {
      auto r = rref(from_vecs({vecs[a], vecs[b]}, n)).reduced;
      if (seen.insert(r.data()).second) subspaces.push_back(r);
    }
  }
  for (const auto& x : subspaces) {
    for (const auto& y : subspaces) {
      const auto sx = span_of(x), sy = span_of(y);
      std::size_t common = 0;
      for (const auto& v : sx) common += sy.count(v);
      const std::size_t s = stack_rank(x, y);
      EXPECT_LE(s, x.rows() + y.rows());
      EXPECT_EQ(s == x.rows() + y.rows(), common == 1);
    }
  }
}
