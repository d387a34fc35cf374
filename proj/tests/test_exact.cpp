#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "attposet/dense.hpp"
#include "attposet/qsqrt.hpp"
#include "attposet/rational.hpp"
#include "attposet/sparse.hpp"

using namespace attposet::exact;

TEST(Rational, ParseAndFormat) {
  EXPECT_THROW(Rational::parse("6/-4"), std::invalid_argument);
  EXPECT_EQ(Rational::parse("-6/4").str(), "-3/2");
  EXPECT_EQ(Rational::parse("5").str(), "5/1");
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("a/2"), std::invalid_argument);
}

TEST(Rational, MatchesMpqOnRandomOperands) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long long> small(-50, 50);
  std::uniform_int_distribution<long long> huge(-(1LL << 62), 1LL << 62);
  for (int t = 0; t < 4000; ++t) {
    auto pick = [&](bool big) {
      long long n = big ? huge(rng) : small(rng);
      long long d = big ? huge(rng) : small(rng);
      if (d == 0) d = 1;
      return std::pair{n, d};
    };
    auto [n1, d1] = pick(t % 3 == 0);
    auto [n2, d2] = pick(t % 5 == 0);
    Rational x(n1, d1), y(n2, d2);
    mpq_class mx(mpz_class(std::to_string(n1)), mpz_class(std::to_string(d1)));
    mpq_class my(mpz_class(std::to_string(n2)), mpz_class(std::to_string(d2)));
    mx.canonicalize();
    my.canonicalize();
    EXPECT_EQ((x + y).to_mpq(), mpq_class(mx + my));
    EXPECT_EQ((x - y).to_mpq(), mpq_class(mx - my));
    EXPECT_EQ((x * y).to_mpq(), mpq_class(mx * my));
    if (n2 != 0) EXPECT_EQ((x / y).to_mpq(), mpq_class(mx / my));
    EXPECT_EQ(x < y, mx < my);
    // Canonical storage: the same value compares equal regardless of path.
    EXPECT_EQ(x * y - y * x, Rational());
    EXPECT_TRUE((x + y - y == x));
  }
}

TEST(Rational, DemotesAfterCancellation) {
  Rational big = Rational::pow(Rational(3), 60);
  EXPECT_FALSE(big.is_small());
  Rational back = big / Rational::pow(Rational(3), 59);
  EXPECT_TRUE(back.is_small());
  EXPECT_EQ(back, Rational(3));
}

TEST(QSqrt, SquareOfRoot) {
  const QSqrt s = QSqrt::sqrt_q(2);
  EXPECT_EQ(s * s, QSqrt(2));
}

TEST(QSqrt, BracketThree) {
  EXPECT_EQ(QSqrt::bracket(2, 3), QSqrt(Rational(7, 2)));
  EXPECT_EQ(QSqrt::bracket(3, 3), QSqrt(Rational(13, 3)));
}

TEST(QSqrt, InverseOfOnePlusRoot) {
  const QSqrt x = QSqrt(1) + QSqrt::sqrt_q(2);
  EXPECT_EQ(x.inverse(), QSqrt(Rational(-1), Rational(1), 2));
  EXPECT_EQ(x * x.inverse(), QSqrt(1));
  EXPECT_THROW(QSqrt().inverse(), std::domain_error);
}

TEST(QSqrt, HalfPowers) {
  for (int q : {2, 3, 5}) {
    for (int k = -7; k <= 7; ++k) {
      const QSqrt v = QSqrt::q_power(q, k);
      if (k % 2 == 0) EXPECT_TRUE(v.is_rational());
      EXPECT_EQ(v * QSqrt::q_power(q, -k), QSqrt(1));
      EXPECT_NEAR(v.to_double(), std::pow(double(q), k / 2.0), 1e-9 * std::pow(double(q), std::abs(k) / 2.0));
    }
  }
}

TEST(QSqrt, ExactSquareRoot) {
  const QSqrt x = QSqrt(3) + QSqrt(Rational(2), Rational(0), 2) * QSqrt::sqrt_q(2);
  auto r = (x * x).sqrt();
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(*r * *r, x * x);
  EXPECT_FALSE(QSqrt(Rational(3), Rational(0), 2).sqrt().has_value());
  EXPECT_EQ(*QSqrt(Rational(9, 4), Rational(0), 2).sqrt(), QSqrt(Rational(3, 2)));
}

TEST(QSqrt, RejectsMixedRadicands) {
  EXPECT_THROW(QSqrt::sqrt_q(2) + QSqrt::sqrt_q(3), std::invalid_argument);
}

TEST(QSqrt, JsonRoundTrip) {
  const QSqrt x(Rational(-3, 4), Rational(5), 2);
  auto j = x.to_json();
  EXPECT_EQ(j.dump(), R"({"a":"-3/4","b":"5/1"})");
  EXPECT_EQ(QSqrt::from_json(j, 2), x);
}

TEST(QSqrt, AgreesWithFloatingEvaluation) {
  std::mt19937_64 rng(11);
  const int q = 3;
  std::function<QSqrt(int)> build = [&](int depth) -> QSqrt {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 4 : 1);
    std::uniform_int_distribution<int> leaf(-9, 9);
    switch (pick(rng)) {
      case 0:
        return QSqrt(leaf(rng));
      case 1:
        return QSqrt(Rational(leaf(rng)), Rational(leaf(rng)), q);
      case 2:
        return build(depth - 1) + build(depth - 1);
      case 3:
        return build(depth - 1) * build(depth - 1);
      default: {
        QSqrt d = build(depth - 1);
        if (d.is_zero()) d = QSqrt(1);
        return build(depth - 1) / d;
      }
    }
  };
  for (int t = 0; t < 1000; ++t) {
    const QSqrt x = build(4);
    const QSqrt y = build(3);
    const double expect = x.to_double() * y.to_double() + x.to_double();
    const double got = (x * y + x).to_double();
    EXPECT_NEAR(got, expect, 1e-9 * std::max(1.0, std::abs(expect)));
  }
}

namespace {

SparseMat random_sparse(std::mt19937_64& rng, std::size_t r, std::size_t c, double density) {
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> v(-5, 5);
  std::vector<SparseMat::Triplet> t;
  for (std::uint32_t i = 0; i < r; ++i) {
    for (std::uint32_t j = 0; j < c; ++j) {
      if (u(rng) < density) t.push_back({i, j, QSqrt(Rational(v(rng)), Rational(v(rng)), 2)});
    }
  }
  return SparseMat::from_triplets(r, c, t);
}

}  // namespace

TEST(SparseMat, ProductWithZero) {
  std::mt19937_64 rng(1);
  auto a = random_sparse(rng, 5, 4, 0.5);
  EXPECT_TRUE((a * SparseMat(4, 3)).equals_zero());
}

TEST(SparseMat, AssociativeAndDistributive) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    auto a = random_sparse(rng, 6, 5, 0.4);
    auto b = random_sparse(rng, 5, 7, 0.4);
    auto b2 = random_sparse(rng, 5, 7, 0.4);
    auto c = random_sparse(rng, 7, 4, 0.4);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + b2), a * b + a * b2);
    EXPECT_EQ((b - b).nnz(), 0u);
    EXPECT_EQ(a.transpose().transpose(), a);
    EXPECT_EQ((a * b).transpose(), b.transpose() * a.transpose());
    std::vector<QSqrt> v(4);
    for (std::size_t k = 0; k < 4; ++k) v[k] = QSqrt(Rational(int(k) - 1), Rational(int(k) % 2), 2);
    EXPECT_EQ((a * (b * c)).apply(v), a.apply(b.apply(c.apply(v))));
  }
}

TEST(SparseMat, ShapeMismatch) {
  EXPECT_THROW(SparseMat(2, 3) * SparseMat(2, 3), std::invalid_argument);
  EXPECT_THROW(SparseMat(2, 3) + SparseMat(3, 2), std::invalid_argument);
}

TEST(SparseMat, CancellationLeavesNoStoredZeros) {
  auto a = SparseMat::from_triplets(2, 2, {{0, 0, QSqrt(1)}, {0, 0, QSqrt(-1)}, {1, 1, QSqrt(2)}});
  EXPECT_EQ(a.nnz(), 1u);
  EXPECT_TRUE((a - a).equals_zero());
}

TEST(DenseKernel, Examples) {
  EXPECT_TRUE(dense_kernel_basis(DenseMat::identity(3)).empty());
  EXPECT_EQ(dense_kernel_basis(DenseMat(3, 3)).size(), 3u);
  auto k = dense_kernel_basis(DenseMat::from_rows({{QSqrt(1), QSqrt(1)}, {QSqrt(1), QSqrt(1)}}));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], (std::vector<QSqrt>{QSqrt(1), QSqrt(-1)}));
}

TEST(DenseKernel, RandomRankDeficient) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    auto a = DenseMat::from_sparse(random_sparse(rng, 6, 3, 0.7));
    auto b = DenseMat::from_sparse(random_sparse(rng, 3, 8, 0.7));
    auto m = a * b;
    auto k = dense_kernel_basis(m);
    EXPECT_EQ(k.size(), m.cols() - dense_rank(m));
    EXPECT_LE(dense_rank(m), 3u);
    for (const auto& v : k) {
      for (const auto& e : m.apply(v)) EXPECT_TRUE(e.is_zero());
    }
  }
}

TEST(DenseInverse, RoundTrip) {
  std::mt19937_64 rng(9);
  int checked = 0;
  for (int t = 0; t < 20; ++t) {
    auto m = DenseMat::from_sparse(random_sparse(rng, 5, 5, 0.8));
    if (dense_rank(m) < 5) {
      EXPECT_THROW(dense_inverse(m), std::domain_error);
      continue;
    }
    EXPECT_EQ(m * dense_inverse(m), DenseMat::identity(5));
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(LinearIndependence, Examples) {
  std::mt19937_64 rng(2);
  auto m = random_sparse(rng, 4, 4, 0.6);
  EXPECT_TRUE(linear_independence(std::vector<SparseMat>{m}));
  EXPECT_FALSE(linear_independence(std::vector<SparseMat>{m, m.scaled(QSqrt(2))}));
  EXPECT_FALSE(linear_independence(std::vector<SparseMat>{m, m}));
  EXPECT_TRUE(linear_independence(std::vector<SparseMat>{SparseMat::identity(3),
                                                         SparseMat::from_triplets(3, 3, {{0, 1, QSqrt(1)}})}));
  EXPECT_FALSE(linear_independence(std::vector<SparseMat>{SparseMat(3, 3)}));
}
