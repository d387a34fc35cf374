#include "attposet/relations.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "attposet/dense.hpp"

namespace attposet::algebra {

namespace {

Poly A(const std::string& n) { return Poly::atom(n); }
Poly F(int i) { return A("F" + std::to_string(i)); }
QSqrt rat(const Rational& r) { return QSqrt(r); }
Rational qpow(int q, int k) { return Rational::pow(Rational(q), k); }

Component comp(std::string label, Poly lhs, Poly rhs) { return {std::move(label), std::move(lhs), std::move(rhs)}; }

void require_large_n(const std::string& id, const poset::InstanceParams& p) {
  if (p.N < 6) throw std::invalid_argument(id + " requires N >= 6, got " + p.label());
}

std::vector<std::size_t> grade_columns(const GeneratorSet& g, int i) {
  std::vector<std::size_t> cols;
  for (std::size_t c = g.offsets[static_cast<std::size_t>(i)]; c < g.offsets[static_cast<std::size_t>(i) + 1]; ++c) cols.push_back(c);
  return cols;
}

}  // namespace

Mode parse_mode(const std::string& s) {
  if (s == "dense") return Mode::Dense;
  if (s == "matrix-free") return Mode::MatrixFree;
  if (s == "auto") return Mode::Auto;
  throw std::invalid_argument("unknown mode '" + s + "' (expected dense, matrix-free or auto)");
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::Dense: return "dense";
    case Mode::MatrixFree: return "matrix-free";
    case Mode::Auto: return "auto";
  }
  return "?";
}

const std::vector<std::string>& relation_ids() {
  static const std::vector<std::string> ids = {"REL-01", "REL-02", "REL-03", "REL-04", "REL-05", "REL-06",
                                               "REL-07", "REL-08", "REL-09", "REL-10", "REL-11", "REL-12",
                                               "REL-13", "REL-14", "REL-15", "REL-16", "REL-17", "REL-18",
                                               "REL-19", "REL-22", "REL-23", "REL-24", "REL-25"};
  return ids;
}

bool needs_large_n(const std::string& id) { return id == "REL-19" || id == "LIN-94" || id == "LIN-95"; }

Poly c1_poly(const poset::InstanceParams& p) {
  const Rational q(p.q);
  const Rational k = (q + 1) / (q * (q - 1));
  return rat(k) * A("K") + A("R") * A("L") - rat(q.inverse()) * (A("L") * A("R"));
}

Poly c2_poly(const poset::InstanceParams& p) {
  const Rational q1(p.q - 1);
  return A("K") * A("K") + rat(q1) * (A("R") * A("L") * A("K")) - rat(q1) * (A("L") * A("R") * A("K"));
}

std::vector<Component> relation_components(const std::string& id, const poset::InstanceParams& p) {
  const int qi = p.q, N = p.N, M = p.M;
  const Rational q(qi), q1 = q - 1, qp1 = q + 1, q31 = qpow(qi, 3) - 1;
  const Poly R = A("R"), L = A("L"), K = A("K"), Ki = A("Ki"), S = A("S"), I(1);
  std::vector<Component> out;

  if (id == "REL-01") {
    out.push_back(comp("RK = qKR", R * K, rat(q) * (K * R)));
  } else if (id == "REL-02") {
    out.push_back(comp("LK = q^-1 KL", L * K, rat(q.inverse()) * (K * L)));
  } else if (id == "REL-03") {
    out.push_back(comp("q(q+1)^-1 RL^2 - LRL + (q+1)^-1 L^2R + LK = 0",
                       rat(q / qp1) * (R * L * L) - L * R * L + rat(qp1.inverse()) * (L * L * R) + L * K, Poly()));
  } else if (id == "REL-04") {
    out.push_back(comp("q(q+1)^-1 R^2L - RLR + (q+1)^-1 LR^2 + KR = 0",
                       rat(q / qp1) * (R * R * L) - R * L * R + rat(qp1.inverse()) * (L * R * R) + K * R, Poly()));
  } else if (id == "REL-05") {
    out.push_back(comp("R^2LR expansion", R * R * L * R,
                       rat(qp1 / (q * q)) * (R * R * K) +
                           rat(q * (q * q - 1) / q31) * (R * R * R * L) + rat(q1 / q31) * (L * R * R * R)));
  } else if (id == "REL-06") {
    out.push_back(comp("RLR^2 expansion", R * L * R * R,
                       rat(qp1 / (q * q)) * (R * R * K) +
                           rat(q * q * q1 / q31) * (R * R * R * L) + rat((q * q - 1) / q31) * (L * R * R * R)));
  } else if (id == "REL-07") {
    out.push_back(comp("L^2RL expansion", L * L * R * L,
                       rat(qp1) * (L * L * K) + rat(q * q * q1 / q31) * (R * L * L * L) +
                           rat((q * q - 1) / q31) * (L * L * L * R)));
  } else if (id == "REL-08") {
    out.push_back(comp("LRL^2 expansion", L * R * L * L,
                       rat(qp1) * (L * L * K) + rat(q * (q * q - 1) / q31) * (R * L * L * L) +
                           rat(q1 / q31) * (L * L * L * R)));
  } else if (id == "REL-09" || id == "REL-10") {
    const QSqrt b3 = QSqrt::bracket(qi, 3);
    const Poly X = id == "REL-09" ? R : L, Y = id == "REL-09" ? L : R;
    out.push_back(comp(id == "REL-09" ? "R^3L - [3]R^2LR + [3]RLR^2 - LR^3 = 0" : "L^3R - [3]L^2RL + [3]LRL^2 - RL^3 = 0",
                       X * X * X * Y - b3 * (X * X * Y * X) + b3 * (X * Y * X * X) - Y * X * X * X, Poly()));
  } else if (id == "REL-11") {
    const std::vector<std::pair<std::string, Poly>> xs = {{"RL", R * L}, {"LR", L * R}, {"K", K}, {"Ki", Ki}};
    for (std::size_t a = 0; a < xs.size(); ++a) {
      for (std::size_t b = a + 1; b < xs.size(); ++b) {
        out.push_back(comp("[" + xs[a].first + "," + xs[b].first + "] = 0", commutator(xs[a].second, xs[b].second), Poly()));
      }
    }
  } else if (id == "REL-12") {
    const Rational inv = q1.inverse();
    out.push_back(comp("S + LR - RL = (K - q^{N+M}Ki + (1-q^M)I)/(q-1)", S + L * R - R * L,
                       rat(inv) * K - rat(qpow(qi, N + M) * inv) * Ki + rat((1 - qpow(qi, M)) * inv) * I));
  } else if (id == "REL-13") {
    out.push_back(comp("LS - qSL = (q^M-1)L", L * S - rat(q) * (S * L), rat(qpow(qi, M) - 1) * L));
  } else if (id == "REL-14") {
    out.push_back(comp("SR - qRS = (q^M-1)R", S * R - rat(q) * (R * S), rat(qpow(qi, M) - 1) * R));
  } else if (id == "REL-15") {
    out.push_back(comp("[S,RL] = 0", commutator(S, R * L), Poly()));
    out.push_back(comp("[S,LR] = 0", commutator(S, L * R), Poly()));
    out.push_back(comp("[S,K] = 0", commutator(S, K), Poly()));
    out.push_back(comp("[S,Ki] = 0", commutator(S, Ki), Poly()));
  } else if (id == "REL-16") {
    Poly sum;
    for (int i = 0; i <= N; ++i) {
      sum += F(i);
      for (int j = 0; j <= N; ++j) {
        const std::string lbl = "F" + std::to_string(i) + "F" + std::to_string(j);
        out.push_back(comp(lbl + (i == j ? " = F" + std::to_string(i) : " = 0"), F(i) * F(j), i == j ? F(i) : Poly()));
      }
    }
    out.push_back(comp("sum F_i = I", sum, I));
  } else if (id == "REL-17") {
    for (int i = 0; i < N; ++i) {
      out.push_back(comp("RF" + std::to_string(i) + " = F" + std::to_string(i + 1) + "R", R * F(i), F(i + 1) * R));
    }
    out.push_back(comp("RF" + std::to_string(N) + " = 0", R * F(N), Poly()));
    out.push_back(comp("F0R = 0", F(0) * R, Poly()));
    for (int i = 1; i <= N; ++i) {
      out.push_back(comp("LF" + std::to_string(i) + " = F" + std::to_string(i - 1) + "L", L * F(i), F(i - 1) * L));
    }
    out.push_back(comp("LF0 = 0", L * F(0), Poly()));
    out.push_back(comp("F" + std::to_string(N) + "L = 0", F(N) * L, Poly()));
  } else if (id == "REL-19") {
    require_large_n(id, p);
    const Rational c = qpow(qi, M) * q31 * (qpow(qi, N - 2) - 1) / (q1 * q1);
    out.push_back(comp("LR^3F0 = cR^2F0", L * R * R * R * F(0), rat(c) * (R * R * F(0))));
    out.push_back(comp("L^3RF2 = cL^2F2", L * L * L * R * F(2), rat(c) * (L * L * F(2))));
  } else if (id == "REL-22") {
    const Poly c1 = c1_poly(p), c2 = c2_poly(p);
    for (const auto& [n, X] : std::vector<std::pair<std::string, Poly>>{{"R", R}, {"L", L}, {"K", K}}) {
      out.push_back(comp("[C1," + n + "] = 0", commutator(c1, X), Poly()));
      out.push_back(comp("[C2," + n + "] = 0", commutator(c2, X), Poly()));
    }
  } else if (id == "REL-23") {
    const Poly c1 = c1_poly(p), c2 = c2_poly(p);
    const Rational a = q1.inverse(), b = a * a;
    out.push_back(comp("RL = -q(q-1)^-2 K + q(q-1)^-1 C1 - (q-1)^-2 C2 Ki", R * L,
                       rat(-q * b) * K + rat(q * a) * c1 - rat(b) * (c2 * Ki)));
    out.push_back(comp("LR = -(q-1)^-2 K + q(q-1)^-1 C1 - q(q-1)^-2 C2 Ki", L * R,
                       rat(-b) * K + rat(q * a) * c1 - rat(q * b) * (c2 * Ki)));
  } else if (id == "REL-24") {
    // Down-up algebra with E = L, F = R, s = -1, t = 0, phi(v) = -tau(tau^2-1)^-2 v.
    const QSqrt tau = QSqrt::sqrt_q(qi), tinv = tau.inverse(), t2 = tau * tau;
    const QSqrt d2 = (t2 - 1) * (t2 - 1);
    const Poly cs = (-tau / d2) * c2_poly(p), ct = (t2 / (t2 - 1)) * c1_poly(p);
    const Poly E = L, Fp = R;
    out.push_back(comp("KKi = I", K * Ki, I));
    out.push_back(comp("KiK = I", Ki * K, I));
    const std::vector<std::pair<std::string, Poly>> gens = {{"K", K}, {"Ki", Ki}, {"E", E}, {"F", Fp}};
    for (const auto& [cn, C] : std::vector<std::pair<std::string, Poly>>{{"Cs", cs}, {"Ct", ct}}) {
      for (const auto& [gn, G] : gens) out.push_back(comp("[" + cn + "," + gn + "] = 0", commutator(C, G), Poly()));
    }
    out.push_back(comp("[Cs,Ct] = 0", commutator(cs, ct), Poly()));
    out.push_back(comp("KE = tau^2 EK", K * E, t2 * (E * K)));
    out.push_back(comp("KF = tau^-2 FK", K * Fp, (tinv * tinv) * (Fp * K)));
    const QSqrt phi = -tau / d2;
    out.push_back(comp("FE = Cs tau^-1 Ki + Ct + phi(tau K)", Fp * E, tinv * (cs * Ki) + ct + (phi * tau) * K));
    out.push_back(comp("EF = Cs tau Ki + Ct + phi(tau^-1 K)", E * Fp, tau * (cs * Ki) + ct + (phi * tinv) * K));
  } else if (id == "REL-25") {
    const Poly c1 = c1_poly(p), c2 = c2_poly(p);
    out.push_back(comp("R^t = L", R.transpose(), L));
    out.push_back(comp("S^t = S", S.transpose(), S));
    out.push_back(comp("C1^t = C1", c1.transpose(), c1));
    out.push_back(comp("C2^t = C2", c2.transpose(), c2));
  } else if (id == "REL-18") {
    throw std::invalid_argument("REL-18 is a support pattern, not a polynomial identity");
  } else {
    throw std::invalid_argument("unknown relation id '" + id + "'");
  }
  return out;
}

std::vector<std::size_t> representative_columns(const GeneratorSet& g, int grade) {
  const std::size_t lo = g.offsets[static_cast<std::size_t>(grade)], hi = g.offsets[static_cast<std::size_t>(grade) + 1];
  std::set<std::size_t> s = {lo, lo + (hi - lo) / 2, hi - 1};
  return {s.begin(), s.end()};
}

namespace {

// Grades (i, j) with F_i X^k F_j ≠ 0, computed from the nonzero entries.
std::set<std::pair<int, int>> block_support(const GeneratorSet& g, const SparseMat& m) {
  std::set<std::pair<int, int>> out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const int gi = g.grade_of(r);
    for (auto c : m.row_cols(r)) out.insert({gi, g.grade_of(c)});
  }
  return out;
}

CheckResult support_pattern(const GeneratorSet& g, Mode mode) {
  CheckResult res;
  res.id = "REL-18";
  res.mode = mode_name(mode);
  res.pass = true;
  const int N = g.params.N;
  Binding b = Binding::standard(g);
  Evaluator ev(b);
  for (const char* xn : {"R", "L"}) {
    const bool raise = std::string(xn) == "R";
    for (int k = 0; k <= N; ++k) {
      std::set<std::pair<int, int>> expected, found;
      for (int j = 0; j <= N; ++j) {
        const int i = raise ? j + k : j - k;
        if (i >= 0 && i <= N) expected.insert({i, j});
      }
      const Poly pk = pow(Poly::atom(xn), k);
      if (mode == Mode::Dense) {
        found = block_support(g, ev.matrix(pk));
      } else {
        // One column per grade decides the block, by transitivity on grades.
        for (int j = 0; j <= N; ++j) {
          for (const auto& [r, v] : ev.apply_to_basis(pk, g.offsets[static_cast<std::size_t>(j)])) found.insert({g.grade_of(r), j});
        }
      }
      ++res.components;
      if (found != expected) {
        res.pass = false;
        Witness w;
        w.component = std::string("F_i ") + xn + "^" + std::to_string(k) + " F_j";
        std::vector<std::pair<int, int>> diff;
        std::set_symmetric_difference(found.begin(), found.end(), expected.begin(), expected.end(), std::back_inserter(diff));
        w.row = static_cast<std::size_t>(diff.front().first);
        w.col = static_cast<std::size_t>(diff.front().second);
        w.note = found.count(diff.front()) ? "block is nonzero but should vanish" : "block vanishes but should be nonzero";
        res.witness = std::move(w);
        return res;
      }
    }
  }
  return res;
}

}  // namespace

CheckResult verify_relation(const std::string& id, const GeneratorSet& g, Mode mode, int trials, std::uint64_t seed,
                            std::size_t dense_cap) {
  Stopwatch sw;
  if (mode == Mode::Auto) mode = g.size() <= dense_cap ? Mode::Dense : Mode::MatrixFree;
  if (mode == Mode::Dense && g.size() > dense_cap && id != "REL-18" && id != "REL-19") {
    throw CapExceeded(id + ": |P| = " + std::to_string(g.size()) + " exceeds the dense cap " + std::to_string(dense_cap));
  }
  if (mode == Mode::MatrixFree && trials < 1) throw std::invalid_argument("matrix-free mode needs trials >= 1");

  CheckResult res;
  if (id == "REL-18") {
    res = support_pattern(g, mode == Mode::Dense && g.size() <= dense_cap ? Mode::Dense : Mode::MatrixFree);
    res.mode = mode_name(mode);
    res.detail = mode == Mode::Dense && g.size() <= dense_cap ? "support of every power R^k, L^k read off full products"
                                                              : "support read off one column per grade";
    res.elapsed_ms = sw.ms();
    return res;
  }

  const auto comps = relation_components(id, g.params);
  Binding b = Binding::standard(g);
  Evaluator ev(b);
  res.id = id;
  res.mode = mode_name(mode);
  res.components = comps.size();
  res.pass = true;
  if (id == "REL-19") {
    // Exact on the full restricted blocks: every column of F0, resp. F2.
    res.mode = "dense";
    res.detail = "restricted blocks evaluated exactly column by column";
    const std::vector<int> grades = {0, 2};
    for (std::size_t k = 0; k < comps.size(); ++k) {
      auto o = ev.columns(comps[k], grade_columns(g, grades[k]));
      if (!o.pass) {
        res.pass = false;
        res.witness = o.witness;
        break;
      }
    }
    res.elapsed_ms = sw.ms();
    return res;
  }
  if (mode == Mode::MatrixFree) {
    res.trials = trials;
    res.seed = seed;
  }
  std::set<std::string> engines;
  for (const auto& c : comps) {
    Outcome o = mode == Mode::Dense ? ev.dense(c, dense_cap) : ev.matrix_free(c, trials, seed);
    if (!o.engine.empty()) engines.insert(o.engine);
    if (!o.pass) {
      res.pass = false;
      res.witness = o.witness;
      break;
    }
  }
  if (!engines.empty()) {
    std::string e;
    for (const auto& s : engines) e += (e.empty() ? "" : ",") + s;
    res.detail = "engine: " + e;
  }
  res.elapsed_ms = sw.ms();
  return res;
}

bool independent_on_columns(const GeneratorSet& g, const std::vector<Poly>& polys, const std::vector<std::size_t>& cols) {
  Binding b = Binding::standard(g);
  Evaluator ev(b);
  const std::size_t n = g.size();
  std::vector<std::vector<std::pair<std::size_t, QSqrt>>> vecs;
  for (const auto& p : polys) {
    std::vector<std::pair<std::size_t, QSqrt>> v;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      for (auto& [r, x] : ev.apply_to_basis(p, cols[k])) v.emplace_back(k * n + r, std::move(x));
    }
    vecs.push_back(std::move(v));
  }
  return exact::linear_independence(vecs);
}

CheckResult verify_independence(const std::string& id, const GeneratorSet& g) {
  Stopwatch sw;
  require_large_n(id, g.params);
  const int N = g.params.N;
  const Poly R = A("R"), L = A("L");
  struct Family {
    std::string label;
    std::vector<Poly> polys;
    int grade;
  };
  std::vector<Family> fams;
  if (id == "LIN-94") {
    fams.push_back({"{R^2F_{N-2}, R^3LF_{N-2}}", {R * R, R * R * R * L}, N - 2});
    fams.push_back({"{L^2F_N, RL^3F_N}", {L * L, R * L * L * L}, N});
  } else if (id == "LIN-95") {
    for (int i = 1; i <= N - 3; ++i) {
      fams.push_back({"{R^2F_i, R^3LF_i, LR^3F_i} at i=" + std::to_string(i), {R * R, R * R * R * L, L * R * R * R}, i});
    }
  } else {
    throw std::invalid_argument("unknown independence id '" + id + "'");
  }
  CheckResult res;
  res.id = id;
  res.mode = "dense";
  res.pass = true;
  res.components = fams.size();
  res.detail = "decided on representative columns of each grade; the automorphism group is transitive on grades";
  for (const auto& f : fams) {
    if (!independent_on_columns(g, f.polys, representative_columns(g, f.grade))) {
      res.pass = false;
      Witness w;
      w.component = f.label;
      w.note = "family is linearly dependent";
      res.witness = std::move(w);
      break;
    }
  }
  res.elapsed_ms = sw.ms();
  return res;
}

}  // namespace attposet::algebra
