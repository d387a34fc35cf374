#include <gtest/gtest.h>

#include <fstream>

#include "attposet/leonard.hpp"

using namespace attposet;
using namespace attposet::leonard;

namespace {

const InstanceParams P261{2, 6, 1};

const GeneratorSet& g261() {
  static const GeneratorSet g = algebra::build_generators(poset::enumerate(P261));
  return g;
}

CaseSpec fixture(const std::string& file) { return CaseSpec::load(std::string(ATTPOSET_FIXTURE_DIR) + "/" + file); }

const std::vector<std::string> kFiles = {"Ip.json", "Im.json", "I0.json", "IIp.json",
                                         "IIm.json", "II0.json", "IIIp.json", "IIIm.json"};

std::vector<QSqrt> seq(int n, const std::function<QSqrt(int)>& f) {
  std::vector<QSqrt> out;
  for (int i = 0; i < n; ++i) out.push_back(f(i));
  return out;
}

QSqrt r(long long p, long long q = 1) { return QSqrt(Rational(p, q)); }

}  // namespace

TEST(Build, GlobalAndModuleForms) {
  const auto g = algebra::build_generators(poset::enumerate({2, 3, 1}));
  LeonardInput inp;
  inp.alphas = {1, 1, 1};
  inp.alphaStars = {1, 1, 1};
  inp.thetas = {0, 1, 2, 3};
  inp.thetaStars = {0, 2, 4, 6};
  auto [A, As] = build_A_Astar(inp, g);
  for (std::size_t x = 0; x < g.size(); ++x) EXPECT_EQ(A.at(x, x), QSqrt(g.grade_of(x)));
  EXPECT_EQ(A - algebra::Evaluator(algebra::Binding::standard(g)).matrix(Poly::atom("R")),
            SparseMat::diagonal(seq(static_cast<int>(g.size()), [&](int x) { return QSqrt(g.grade_of(x)); })));
  EXPECT_EQ(As.transpose() - A, SparseMat::diagonal(seq(static_cast<int>(g.size()), [&](int x) { return QSqrt(g.grade_of(x)); })));

  const auto m = specdec::module_model({0, 3}, {2, 3, 1});
  inp.alphaStars = {2, 3, 5};
  auto [Am, Asm] = build_A_Astar(inp, m, {2, 3, 1});
  for (int i = 0; i < 3; ++i) EXPECT_EQ(Am(i + 1, i), QSqrt(1));
  EXPECT_EQ(Am(2, 2), QSqrt(2));
  EXPECT_EQ(Asm(0, 1), QSqrt(28));
  EXPECT_EQ(Asm(1, 2), QSqrt(54));
  EXPECT_EQ(Asm(2, 3), QSqrt(70));
  EXPECT_EQ(Asm(3, 3), QSqrt(6));

  inp.alphas = {0, 0, 0};
  EXPECT_THROW(build_A_Astar(inp, g), std::invalid_argument);
}

TEST(Build, ExpandedFormsMatchCommutators) {
  const TDCoeffs c{r(5, 2), r(-3, 2), r(7), r(1, 3), r(-4)};
  EXPECT_EQ(b_poly(c), b_commutator_poly(c));
  EXPECT_EQ(bstar_poly(c), bstar_commutator_poly(c));
  EXPECT_EQ(b_poly(c).degree(), 4u);
}

TEST(Build, CommutingPairGivesZero) {
  algebra::Binding b(3);
  b.set("A", SparseMat::diagonal({1, 2, 3}));
  b.set("As", SparseMat::diagonal({1, 2, 3}));
  algebra::Evaluator ev(b);
  const TDCoeffs c{r(9), r(2), r(3), r(4), r(5)};
  EXPECT_TRUE(ev.dense({"B", b_poly(c), Poly()}, 10).pass);
  EXPECT_TRUE(ev.dense({"B*", bstar_poly(c), Poly()}, 10).pass);
}

TEST(Recurrence, StandardParams) {
  const auto geo = seq(5, [](int i) { return QSqrt(Rational::pow(Rational(2), -i)); });
  const auto geo2 = seq(5, [](int i) { return QSqrt(Rational::pow(Rational(2), -i) * 3); });
  auto c = standard_params(geo, geo2);
  EXPECT_EQ(c.beta, r(5, 2));
  EXPECT_TRUE(c.gamma.is_zero());
  EXPECT_TRUE(c.rho.is_zero());
  EXPECT_FALSE(c.degenerate);

  const auto shifted = seq(5, [](int i) { return QSqrt(Rational::pow(Rational(2), -i) + 3); });
  EXPECT_EQ(standard_params(shifted, geo).gamma, r(-3, 2));

  auto lin = standard_params(seq(5, [](int i) { return QSqrt(i); }), seq(5, [](int i) { return QSqrt(2 * i); }));
  EXPECT_EQ(lin.beta, r(2));
  EXPECT_TRUE(lin.degenerate);

  // θ geometric with ratio 2, θ* with ratio 3: no common β.
  const auto geo3 = seq(5, [](int i) { return QSqrt(Rational::pow(Rational(3), i)); });
  EXPECT_THROW(standard_params(geo, geo3), std::invalid_argument);
  EXPECT_THROW(standard_params({0, 1, 2}, {0, 1, 2}), std::invalid_argument);
}

TEST(Recurrence, BetaFit) {
  auto f = beta_fit(seq(6, [](int i) { return QSqrt(3 + Rational::pow(2, i) * 2 + Rational::pow(2, -i) * 5); }), r(5, 2));
  EXPECT_EQ(f.shape, Shape::Generic);
  EXPECT_EQ(f.Q, r(2));
  EXPECT_EQ(f.a, r(3));
  EXPECT_EQ(f.b, r(2));
  EXPECT_EQ(f.c, r(5));

  auto quad = beta_fit(seq(5, [](int i) { return QSqrt(1 + i + i * i); }), r(2));
  EXPECT_EQ(quad.shape, Shape::Quadratic);
  EXPECT_EQ(std::vector<QSqrt>({quad.a, quad.b, quad.c}), std::vector<QSqrt>({r(1), r(1), r(1)}));

  auto alt = beta_fit(seq(5, [](int i) { return QSqrt(i % 2 ? -i : i); }), r(-2));
  EXPECT_EQ(alt.shape, Shape::Alternating);
  EXPECT_EQ(std::vector<QSqrt>({alt.a, alt.b, alt.c}), std::vector<QSqrt>({r(0), r(0), r(1)}));

  EXPECT_THROW(beta_fit({1, 2, 4, 9}, r(5, 2)), std::invalid_argument);
  EXPECT_THROW(beta_fit({1, 2, 4}, r(5, 2)), std::invalid_argument);
  // Q + 1/Q = 3 has irrational roots outside Q(√2).
  EXPECT_THROW(beta_fit({1, 2, 4, 8}, r(3)), std::invalid_argument);
}

TEST(Recurrence, Heartsuit) {
  const std::vector<QSqrt> th = {0, 1, 3, 7};
  EXPECT_TRUE(heartsuit(1, th, {5, 5, 5, 5}, r(3)).is_zero());
  // (β+1)((θ*_0−θ*_2)(θ_1−θ_0) + (θ*_1−θ*_2)(θ_0−θ_2)) = 4·((−2)(1) + (−1)(−3)).
  EXPECT_EQ(heartsuit(0, th, {0, 1, 2, 3}, r(3)), r(4));
  EXPECT_THROW(heartsuit(2, th, th, r(3)), std::out_of_range);
}

TEST(Cases, ExpandAndErrors) {
  auto [inp, c] = case_expand(fixture("I0.json"), P261);
  EXPECT_EQ(inp.xi(0), r(255, 256));
  EXPECT_EQ(inp.xi(5), r(8191, 8192));
  EXPECT_EQ(c.beta, r(5, 2));

  auto [inp3, c3] = case_expand(fixture("IIIp.json"), P261);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(inp3.xi(i), r(1));
  EXPECT_EQ(inp3.thetas[3], r(9));
  EXPECT_EQ(inp3.thetaStars[3], r(17, 8));

  CaseSpec zero = fixture("Ip.json");
  zero.x = r(1, 256);  // ξ_0 = x − 2^{−8}cc*
  EXPECT_THROW(case_expand(zero, P261), std::invalid_argument);

  CaseSpec bad = fixture("I0.json");
  bad.b = r(1);
  EXPECT_THROW(case_expand(bad, P261), std::invalid_argument);
}

TEST(Cases, FixtureErrorsNameTheField) {
  const std::string path = testing::TempDir() + "/bad_case.json";
  auto field_of = [&](const std::string& text) {
    std::ofstream(path) << text;
    try {
      CaseSpec::load(path);
    } catch (const FixtureError& e) {
      EXPECT_EQ(e.path, path);
      return e.field;
    }
    return std::string("<none>");
  };
  EXPECT_EQ(field_of(R"({"tag":"I0","a":"0","b":"0","c":"1","aStar":"0","bStar":"0","cStar":"1"})"), "x");
  EXPECT_EQ(field_of(R"({"tag":"I0","a":"0","b":"0","c":"one","aStar":"0","bStar":"0","cStar":"1","x":"1"})"), "c");
  EXPECT_EQ(field_of(R"({"tag":"I0","a":"0","b":"0","c":"1","aStar":"0","bStar":"0","cStar":"1","x":"1","y":"2"})"), "y");
  EXPECT_EQ(field_of(R"({"tag":"IV","a":"0","b":"0","c":"1","aStar":"0","bStar":"0","cStar":"1","x":"1"})"), "tag");
  EXPECT_EQ(field_of("{"), "");
}

TEST(Cases, FixturesMatchBuiltInSamples) {
  ASSERT_EQ(sample_cases().size(), kFiles.size());
  for (std::size_t k = 0; k < kFiles.size(); ++k) EXPECT_EQ(fixture(kFiles[k]).to_json(), sample_cases()[k].to_json());
}

TEST(Cases, ScalarsForEveryFixture) {
  for (const auto& f : kFiles) {
    const CaseSpec s = fixture(f);
    auto [inp, c] = case_expand(s, P261);
    EXPECT_EQ(standard_params(inp.thetas, inp.thetaStars), c) << f;
    auto res = verify_case_scalars(s, P261);
    EXPECT_TRUE(res.pass) << f << " " << res.to_json().dump();
  }
}

TEST(RoundTrip, AllCasesVanishAt261) {
  for (const auto& f : kFiles) {
    const CaseSpec s = fixture(f);
    auto [inp, c] = case_expand(s, P261);
    auto mf = verify_tridiagonal("T", inp, c, g261(), 5, 11);
    EXPECT_TRUE(mf.pass) << f << " " << mf.to_json().dump();
    EXPECT_TRUE(verify_tridiagonal_modules("M", inp, c, P261).pass) << f;
    auto neg = negative_control(s, g261(), 5, 11);
    EXPECT_TRUE(neg.pass) << f;
    ASSERT_TRUE(neg.witness.has_value());
  }
}

TEST(RoundTrip, OtherGaugeStillVanishes) {
  const CaseSpec s = fixture("IIm.json");
  auto [inp, c] = case_expand(s, P261, {r(2), r(-1), r(1, 3), r(5), r(7), r(1, 2)});
  EXPECT_EQ(inp.alpha(1), r(-1));
  EXPECT_TRUE(verify_tridiagonal("T", inp, c, g261(), 2, 3).pass);
  EXPECT_TRUE(verify_tridiagonal_modules("M", inp, c, P261).pass);
}

TEST(Blocks, TablesAgreeAt261) {
  for (const auto& f : {"I0.json", "IIIp.json"}) {
    auto [inp, c] = case_expand(fixture(f), P261);
    auto res = block_check("BLOCKS", inp, c, g261(), true);
    EXPECT_TRUE(res.pass) << f << " " << res.to_json().dump();
    // The general tables do not depend on B vanishing.
    inp.thetas[2] += 1;
    inp.thetaStars[4] -= 3;
    auto general = block_check("BLOCKS", inp, c, g261(), false);
    EXPECT_TRUE(general.pass) << f << " " << general.to_json().dump();
    EXPECT_FALSE(block_check("BLOCKS", inp, c, g261(), true).pass) << f;
  }
}

TEST(LeonardPairs, CaseI0PassesEverywhere) {
  const CaseSpec s = fixture("I0.json");
  for (const auto& t : specdec::enumerate_types(P261)) {
    auto res = leonard_check(s, t, P261);
    EXPECT_TRUE(res.pass) << t.r << "," << t.d;
    EXPECT_TRUE(res.validation.ok);
    EXPECT_TRUE(res.phi_matches_closed_form);
  }
  // d = 6: ϕ_1 = q^{1}(q−1)^{-2}(q−1)(q^6−1)·x = 126.
  EXPECT_EQ(leonard_check(s, {0, 6}, P261).array.phi[0], r(126));
}

TEST(LeonardPairs, ForbiddenXIsCaught) {
  CaseSpec s = fixture("Ip.json");
  s.x = forbidden_x(s, {0, 6}, P261, 1);
  EXPECT_EQ(s.x, r(1, 4));
  auto res = leonard_check(s, {0, 6}, P261);
  EXPECT_FALSE(res.pass);
  EXPECT_EQ(res.condition_index, 1);
  EXPECT_EQ(res.phi_zero_index, 1);
  EXPECT_EQ(res.validation.axiom, 2);

  // With b* in place of b the vanishing ϕ index mirrors to d.
  CaseSpec m = fixture("Im.json");
  m.x = forbidden_x(m, {0, 6}, P261, 1);
  auto mr = leonard_check(m, {0, 6}, P261);
  EXPECT_EQ(mr.condition_index, 1);
  EXPECT_EQ(mr.phi_zero_index, 6);
}

TEST(LeonardPairs, CommonRatioForIIIp) {
  auto res = leonard_check(fixture("IIIp.json"), {0, 6}, P261);
  ASSERT_TRUE(res.pass);
  const auto& th = res.array.theta;
  for (int i = 2; i <= 5; ++i) EXPECT_EQ((th[i - 2] - th[i + 1]) / (th[i - 1] - th[i]), r(7, 2));
  ParameterArray broken = res.array;
  broken.phi[2] += 1;
  auto v = validate_parameter_array(broken);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.axiom, 4);  // only the ϕ identity reads ϕ_3
}
