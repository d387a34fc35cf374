#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <set>

#include "json.hpp"

#include "attposet/poset.hpp"

using namespace attposet::poset;
using attposet::gfq::GFMatrix;

namespace {

std::vector<std::size_t> sizes(const Poset& p) {
  std::vector<std::size_t> s;
  for (int i = 0; i <= p.rank(); ++i) s.push_back(p.grade_count(i));
  return s;
}

SubspaceCanon span(std::uint32_t q, std::initializer_list<std::initializer_list<std::uint32_t>> rows, int N) {
  return *canonicalize(GFMatrix::from_rows(q, rows), N);
}

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "attposet-test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Gauss, SmallValues) {
  EXPECT_EQ(gauss(3, 1, 2), 7u);
  EXPECT_EQ(gauss(4, 2, 2), 35u);
  EXPECT_EQ(gauss(3, 1, 3), 13u);
  EXPECT_EQ(gauss(6, 3, 2), 1395u);
  EXPECT_EQ(gauss(3, 4, 2), 0u);
}

TEST(Enumerate, GradeSizes) {
  EXPECT_EQ(sizes(enumerate({2, 2, 1})), (std::vector<std::size_t>{1, 6, 4}));
  EXPECT_EQ(sizes(enumerate({2, 3, 1})), (std::vector<std::size_t>{1, 14, 28, 8}));
  EXPECT_EQ(sizes(enumerate({2, 3, 2})), (std::vector<std::size_t>{1, 28, 112, 64}));
  EXPECT_EQ(sizes(enumerate({3, 3, 1})), (std::vector<std::size_t>{1, 39, 117, 27}));
  EXPECT_EQ(sizes(enumerate({2, 4, 2})), (std::vector<std::size_t>{1, 60, 560, 960, 256}));
}

TEST(Enumerate, LargeInstanceMatchesCount) {
  const InstanceParams p{2, 6, 1};
  auto P = enumerate(p);
  EXPECT_EQ(sizes(P), (std::vector<std::size_t>{1, 126, 2604, 11160, 10416, 2016, 64}));
  EXPECT_EQ(P.size(), poset_size(p));
}

TEST(Enumerate, MatchesExhaustiveSubspaceSearch) {
  // Canonicalize every tuple of at most N vectors of F_q^{N+M} and keep those
  // meeting h trivially; the resulting set must equal the enumeration.
  for (InstanceParams p : {InstanceParams{2, 2, 1}, InstanceParams{2, 2, 2}, InstanceParams{3, 2, 1}}) {
    auto P = enumerate(p);
    const std::size_t W = static_cast<std::size_t>(p.dim());
    std::size_t nvec = 1;
    for (std::size_t k = 0; k < W; ++k) nvec *= static_cast<std::size_t>(p.q);
    std::set<std::string> found;
    for (std::size_t a = 0; a < nvec; ++a) {
      for (std::size_t b = 0; b < nvec; ++b) {
        GFMatrix m(2, W, static_cast<std::uint32_t>(p.q));
        std::size_t x = a, y = b;
        for (std::size_t c = 0; c < W; ++c) {
          m.set(0, c, static_cast<std::uint32_t>(x % static_cast<std::size_t>(p.q)));
          m.set(1, c, static_cast<std::uint32_t>(y % static_cast<std::size_t>(p.q)));
          x /= static_cast<std::size_t>(p.q);
          y /= static_cast<std::size_t>(p.q);
        }
        if (auto canon = canonicalize(m, p.N)) found.insert(canon->key());
      }
    }
    EXPECT_EQ(found.size(), P.size());
    for (const auto& k : found) EXPECT_TRUE(P.index_of_key(k).has_value());
  }
}

TEST(Enumerate, DeterministicLexicographicOrder) {
  auto a = enumerate({2, 3, 1});
  auto b = enumerate({2, 3, 1});
  EXPECT_TRUE(a == b);
  for (int i = 0; i <= 3; ++i) {
    for (std::size_t k = 1; k < a.grade_count(i); ++k) {
      EXPECT_LT(a.grade(i)[k - 1].basis.data(), a.grade(i)[k].basis.data());
    }
  }
}

TEST(Enumerate, CapIsEnforced) { EXPECT_THROW(enumerate({2, 6, 1}, 1000), ResourceError); }

TEST(Enumerate, RejectsBadParams) {
  EXPECT_THROW(enumerate({4, 2, 1}), std::invalid_argument);
  EXPECT_THROW(enumerate({2, 0, 1}), std::invalid_argument);
}

TEST(Covers, Examples) {
  auto P = enumerate({2, 2, 1});
  const auto& zero = P.grade(0)[0];
  EXPECT_FALSE(covers(zero, zero));
  for (const auto& y : P.grade(1)) EXPECT_TRUE(covers(zero, y));
  std::size_t pairs = 0;
  for (const auto& x : P.grade(1)) {
    for (const auto& y : P.grade(2)) pairs += covers(x, y);
  }
  EXPECT_EQ(pairs, 12u);
}

TEST(Covers, CountsPerElement) {
  for (InstanceParams p : {InstanceParams{2, 2, 1}, InstanceParams{2, 3, 1}, InstanceParams{3, 2, 1}}) {
    auto P = enumerate(p);
    const int q = p.q;
    for (int i = 0; i <= p.N; ++i) {
      for (const auto& x : P.grade(i)) {
        if (i >= 1) {
          std::size_t below = 0;
          for (const auto& z : P.grade(i - 1)) below += covers(z, x);
          EXPECT_EQ(below, (gauss(i, 1, q)));
        }
        if (i + 1 <= p.N) {
          std::size_t above = 0;
          for (const auto& z : P.grade(i + 1)) above += covers(x, z);
          // (q^{N+M-i} - q^M)/(q-1)
          std::uint64_t a = 1, b = 1;
          for (int k = 0; k < p.N + p.M - i; ++k) a *= static_cast<std::uint64_t>(q);
          for (int k = 0; k < p.M; ++k) b *= static_cast<std::uint64_t>(q);
          EXPECT_EQ(above, (a - b) / static_cast<std::uint64_t>(q - 1));
        }
      }
    }
  }
}

TEST(Covers, FastLowerCoversMatchBruteForce) {
  for (InstanceParams p : {InstanceParams{2, 3, 1}, InstanceParams{3, 2, 1}, InstanceParams{2, 3, 2}}) {
    auto P = enumerate(p);
    for (std::size_t y = 0; y < P.size(); ++y) {
      std::vector<std::size_t> brute;
      const int i = P.grade_of(y);
      if (i > 0) {
        for (std::size_t k = 0; k < P.grade_count(i - 1); ++k) {
          if (covers(P.grade(i - 1)[k], P.element(y))) brute.push_back(P.offset(i - 1) + k);
        }
      }
      EXPECT_EQ(lower_covers(P, y), brute);
    }
  }
}

TEST(Tilde, Examples) {
  const InstanceParams p{2, 2, 1};
  auto x = span(2, {{1, 0, 0}}, 2);
  auto y = span(2, {{1, 0, 1}}, 2);
  auto z = span(2, {{0, 1, 0}}, 2);
  EXPECT_FALSE(in_tilde(x, x, p));
  EXPECT_TRUE(in_tilde(x, y, p));
  EXPECT_FALSE(in_tilde(x, z, p));
  auto two = span(2, {{1, 0, 0}, {0, 1, 0}}, 2);
  EXPECT_THROW(in_tilde(x, two, p), std::invalid_argument);
}

TEST(Tilde, SymmetricAndFastMatchesBruteForce) {
  for (InstanceParams p : {InstanceParams{2, 3, 1}, InstanceParams{2, 2, 2}, InstanceParams{3, 2, 1}}) {
    auto P = enumerate(p);
    for (std::size_t x = 0; x < P.size(); ++x) {
      const int i = P.grade_of(x);
      std::vector<std::size_t> brute;
      for (std::size_t k = 0; k < P.grade_count(i); ++k) {
        const bool t = in_tilde(P.element(x), P.grade(i)[k], p);
        EXPECT_EQ(t, in_tilde(P.grade(i)[k], P.element(x), p));
        if (t) brute.push_back(P.offset(i) + k);
      }
      EXPECT_EQ(tilde_neighbors(P, x), brute);
    }
  }
}

TEST(Cache, RoundTrip) {
  auto P = enumerate({2, 2, 1});
  auto path = temp_file("rt.json");
  save_cache(P, path);
  EXPECT_TRUE(load_cache(path) == P);
}

TEST(Cache, AlteredQIsAParamError) {
  auto P = enumerate({2, 2, 1});
  auto path = temp_file("altered.json");
  save_cache(P, path);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  auto pos = text.find("\"q\":2");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 5, "\"q\":3");
  std::ofstream(path) << text;
  try {
    load_cache(path);
    FAIL() << "expected CacheError";
  } catch (const CacheError& e) {
    EXPECT_EQ(e.kind(), CacheError::Kind::Param);
  }
}

TEST(Cache, TruncatedIsMalformed) {
  auto P = enumerate({2, 2, 1});
  auto path = temp_file("trunc.json");
  save_cache(P, path);
  auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size / 2);
  try {
    load_cache(path);
    FAIL() << "expected CacheError";
  } catch (const CacheError& e) {
    EXPECT_EQ(e.kind(), CacheError::Kind::Malformed);
  }
}

TEST(Cache, VersionAndChecksum) {
  auto P = enumerate({2, 2, 1});
  auto path = temp_file("ver.json");
  save_cache(P, path);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  in.close();
  std::string v = text;
  v.replace(v.find("attposet-cache/1"), 16, "attposet-cache/9");
  std::ofstream(path) << v;
  try {
    load_cache(path);
    FAIL();
  } catch (const CacheError& e) {
    EXPECT_EQ(e.kind(), CacheError::Kind::Version);
  }
  // Swap two elements of grade 1: still valid members, order changed.
  auto doc = nlohmann::json::parse(text);
  std::swap(doc["grades"][1][0], doc["grades"][1][1]);
  std::ofstream(path) << doc.dump();
  try {
    load_cache(path);
    FAIL();
  } catch (const CacheError& e) {
    EXPECT_EQ(e.kind(), CacheError::Kind::Checksum);
  }
}

TEST(Cache, EnvironmentOverridesDirectory) {
  setenv("ATTPOSET_CACHE_DIR", "/tmp/attposet-env-dir", 1);
  EXPECT_EQ(default_cache_path({2, 3, 1}), std::filesystem::path("/tmp/attposet-env-dir/A_q2_N3_M1.json"));
  unsetenv("ATTPOSET_CACHE_DIR");
  auto path = temp_file("loe.json");
  std::filesystem::remove(path);
  auto a = load_or_enumerate({2, 2, 1}, path);
  EXPECT_TRUE(std::filesystem::exists(path));
  auto b = load_or_enumerate({2, 2, 1}, path);
  EXPECT_TRUE(a == b);
  EXPECT_THROW(load_or_enumerate({2, 3, 1}, path), CacheError);
}
