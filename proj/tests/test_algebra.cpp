#include <gtest/gtest.h>

#include <map>

#include "attposet/relations.hpp"

using namespace attposet;
using namespace attposet::algebra;
using attposet::exact::QSqrt;
using attposet::exact::Rational;

namespace {

const GeneratorSet& gens(int q, int N, int M) {
  static std::map<std::tuple<int, int, int>, GeneratorSet> cache;
  auto key = std::make_tuple(q, N, M);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto p = poset::enumerate({q, N, M});
    it = cache.emplace(key, build_generators(p)).first;
  }
  return it->second;
}

}  // namespace

TEST(Generators, CoverCountAndWeights) {
  const auto& g = gens(2, 2, 1);
  EXPECT_EQ(g.R.nnz(), 18u);
  EXPECT_EQ(g.L, g.R.transpose());
  EXPECT_EQ(g.K.at(0, 0), QSqrt(8));
  EXPECT_EQ(g.K.at(g.offsets[1], g.offsets[1]), QSqrt(4));
  EXPECT_EQ(g.K.at(g.offsets[2], g.offsets[2]), QSqrt(2));
  EXPECT_EQ(g.Kinv.at(0, 0), QSqrt(Rational(1, 8)));
  for (std::size_t x = 0; x < g.size(); ++x) EXPECT_TRUE(g.S.at(x, x).is_zero());
  EXPECT_EQ(g.S, g.S.transpose());
}

TEST(Generators, LowerMinusRaiseEntries) {
  // (LR - RL)_xx = (q^{N+M-i} - q^M - q^i + 1)/(q-1) on grade i; off-diagonal -1 exactly on tilde pairs.
  const auto& g = gens(2, 3, 1);
  const int q = 2, N = 3, M = 1;
  const auto D = g.L * g.R - g.R * g.L;
  for (std::size_t x = 0; x < g.size(); ++x) {
    const int i = g.grade_of(x);
    const Rational want = (Rational::pow(q, N + M - i) - Rational::pow(q, M) - Rational::pow(q, i) + 1) / Rational(q - 1);
    EXPECT_EQ(D.at(x, x), QSqrt(want));
    for (std::size_t y = 0; y < g.size(); ++y) {
      if (y == x) continue;
      EXPECT_EQ(D.at(x, y), g.S.at(x, y).is_zero() ? QSqrt(0) : QSqrt(-1));
    }
  }
}

TEST(Relations, DenseAtSmallInstances) {
  for (auto [q, N, M] : {std::tuple{2, 2, 1}, std::tuple{2, 3, 1}}) {
    const auto& g = gens(q, N, M);
    for (const auto& id : relation_ids()) {
      if (needs_large_n(id)) continue;
      auto r = verify_relation(id, g, Mode::Dense, 0, 0);
      EXPECT_TRUE(r.pass) << id << " at " << g.params.label() << ": " << (r.witness ? r.witness->to_json().dump() : "");
    }
  }
}

TEST(Relations, MatrixFreeAgreesWithDense) {
  const auto& g = gens(2, 3, 1);
  for (const auto& id : relation_ids()) {
    if (needs_large_n(id)) continue;
    auto d = verify_relation(id, g, Mode::Dense, 0, 0);
    auto m = verify_relation(id, g, Mode::MatrixFree, 3, 42);
    EXPECT_EQ(d.pass, m.pass) << id;
  }
}

TEST(Relations, BrokenIdentityIsCaughtWithWitness) {
  const auto& g = gens(2, 3, 1);
  Binding b = Binding::standard(g);
  Evaluator ev(b);
  const Poly R = Poly::atom("R"), K = Poly::atom("K");
  // RK = KR is false: RK = qKR.
  Component bad{"RK = KR", R * K, K * R};
  auto d = ev.dense(bad, kDefaultDenseCap);
  ASSERT_FALSE(d.pass);
  ASSERT_TRUE(d.witness && d.witness->lhs && d.witness->rhs);
  EXPECT_EQ(*d.witness->lhs, QSqrt(2) * *d.witness->rhs);
  auto m = ev.matrix_free(bad, 2, 7);
  EXPECT_FALSE(m.pass);
  EXPECT_EQ(m.engine, "int128");
  auto c = ev.columns(bad, {0});
  EXPECT_FALSE(c.pass);
}

TEST(Relations, IrrationalCoefficientsUseExactEngine) {
  const auto& g = gens(2, 3, 1);
  auto r = verify_relation("REL-24", g, Mode::MatrixFree, 2, 1);
  EXPECT_TRUE(r.pass);
  auto s = verify_relation("REL-09", g, Mode::MatrixFree, 2, 1);
  EXPECT_TRUE(s.pass);
}

TEST(Relations, DenseCapIsEnforced) {
  const auto& g = gens(2, 3, 1);
  EXPECT_THROW(verify_relation("REL-01", g, Mode::Dense, 0, 0, 10), CapExceeded);
  auto r = verify_relation("REL-01", g, Mode::Auto, 1, 3, 10);
  EXPECT_EQ(r.mode, "matrix-free");
  EXPECT_THROW(verify_relation("REL-99", g, Mode::Dense, 0, 0), std::invalid_argument);
  EXPECT_THROW(verify_relation("REL-19", g, Mode::Dense, 0, 0), std::invalid_argument);
}

TEST(Relations, SupportPatternBothWays) {
  const auto& g = gens(2, 3, 1);
  EXPECT_TRUE(verify_relation("REL-18", g, Mode::Dense, 0, 0).pass);
  EXPECT_TRUE(verify_relation("REL-18", g, Mode::MatrixFree, 1, 0).pass);
}

TEST(Independence, ColumnsAgreeWithAllColumns) {
  // The representative-column shortcut against the full grade at a small instance.
  const auto& g = gens(2, 4, 1);
  const Poly R = Poly::atom("R"), L = Poly::atom("L");
  for (int i = 0; i <= 2; ++i) {
    std::vector<std::size_t> all;
    for (std::size_t c = g.offsets[i]; c < g.offsets[i + 1]; ++c) all.push_back(c);
    for (const auto& fam : {std::vector<Poly>{R * R, R * R * R * L}, std::vector<Poly>{R * R, R * R * R * L, L * R * R * R},
                            std::vector<Poly>{R * R, R * R}}) {
      EXPECT_EQ(independent_on_columns(g, fam, representative_columns(g, i)), independent_on_columns(g, fam, all));
    }
  }
  EXPECT_FALSE(independent_on_columns(g, {R * R, R * R}, representative_columns(g, 1)));
}

TEST(Polys, CentralElementsTransposeToThemselves) {
  const poset::InstanceParams p{2, 3, 1};
  const auto& g = gens(2, 3, 1);
  Binding b = Binding::standard(g);
  Evaluator ev(b);
  const auto c1 = ev.matrix(c1_poly(p));
  EXPECT_EQ(c1, c1.transpose());
  EXPECT_EQ(c1_poly(p).transpose().atoms(), (std::vector<std::string>{"K^t", "L^t", "R^t"}));
}
