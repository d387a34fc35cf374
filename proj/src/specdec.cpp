#include "attposet/specdec.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "attposet/relations.hpp"

namespace attposet::specdec {

using algebra::Binding;
using algebra::Component;
using algebra::Evaluator;
using algebra::Poly;

namespace {

Rational qpow(int q, int k) { return Rational::pow(Rational(q), k); }

std::string type_label(const ModuleType& t) { return "(" + std::to_string(t.r) + "," + std::to_string(t.d) + ")"; }

// Runs every component densely; the first failure fills res.
void run_components(CheckResult& res, Evaluator& ev, const std::vector<Component>& comps, const std::string& prefix = "") {
  for (const auto& c : comps) {
    ++res.components;
    auto o = ev.dense(c, static_cast<std::size_t>(-1));
    if (!o.pass) {
      res.pass = false;
      res.witness = o.witness;
      if (!prefix.empty()) res.witness->component = prefix + res.witness->component;
      return;
    }
  }
}

std::vector<Component> chevalley_components(int q) {
  const QSqrt tau = QSqrt::sqrt_q(q), tinv = tau.inverse();
  const Poly e = Poly::atom("e"), f = Poly::atom("f"), k = Poly::atom("k"), ki = Poly::atom("ki");
  return {
      {"kk^-1 = 1", k * ki, Poly(1)},
      {"k^-1k = 1", ki * k, Poly(1)},
      {"ke = tau^2 ek", k * e, (tau * tau) * (e * k)},
      {"kf = tau^-2 fk", k * f, (tinv * tinv) * (f * k)},
      {"ef - fe = (k - k^-1)/(tau - tau^-1)", e * f - f * e, (tau - tinv).inverse() * (k - ki)},
  };
}

}  // namespace

bool in_psi(const ModuleType& t, const InstanceParams& p) {
  const int N = p.N, M = p.M, r = t.r, d = t.d;
  return r >= 0 && d >= 0 && r <= N && d <= N && N - 2 * r <= d && d <= N - r && d <= N + M - 2 * r;
}

std::vector<ModuleType> enumerate_types(const InstanceParams& p) {
  std::vector<ModuleType> out;
  for (int r = 0; r <= p.N; ++r) {
    for (int d = 0; d <= p.N; ++d) {
      if (in_psi({r, d}, p)) out.push_back({r, d});
    }
  }
  return out;
}

QSqrt x_coeff(int r, int d, int i, const InstanceParams& p) {
  if (i < 1 || i > d) throw std::out_of_range("x_coeff: need 1 <= i <= d, got i=" + std::to_string(i) + ", d=" + std::to_string(d));
  const int q = p.q;
  const Rational q1(q - 1);
  return QSqrt(qpow(q, p.N + p.M - r - d) * (qpow(q, i) - 1) * (qpow(q, d + 1 - i) - 1) / (q1 * q1));
}

ModuleModel module_model(const ModuleType& t, const InstanceParams& p) {
  if (!in_psi(t, p)) throw std::invalid_argument("type " + type_label(t) + " is not realizable at " + p.label());
  const std::size_t n = static_cast<std::size_t>(t.d) + 1;
  ModuleModel m{t, DenseMat(n, n), DenseMat(n, n), DenseMat(n, n), DenseMat(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    const Rational k = qpow(p.q, p.N + p.M - t.r - static_cast<int>(i));
    m.Km(i, i) = QSqrt(k);
    m.Kim(i, i) = QSqrt(k.inverse());
    if (i + 1 < n) m.Rm(i + 1, i) = QSqrt(1);
    if (i >= 1) m.Lm(i - 1, i) = x_coeff(t.r, t.d, static_cast<int>(i), p);
  }
  return m;
}

Binding module_binding(const ModuleModel& m, const InstanceParams& p) {
  const std::size_t n = m.Rm.rows();
  Binding b(n);
  b.set("R", m.Rm.to_sparse());
  b.set("L", m.Lm.to_sparse());
  b.set("K", m.Km.to_sparse());
  b.set("Ki", m.Kim.to_sparse());
  const Rational inv = Rational(p.q - 1).inverse();
  const DenseMat S = m.Rm * m.Lm - m.Lm * m.Rm +
                     (m.Km - m.Kim.scaled(QSqrt(qpow(p.q, p.N + p.M))) + DenseMat::identity(n).scaled(QSqrt(1 - qpow(p.q, p.M))))
                         .scaled(QSqrt(inv));
  b.set("S", S.to_sparse());
  for (int j = 0; j <= p.N; ++j) {
    std::vector<QSqrt> diag(n);
    const int i = j - m.type.r;
    if (i >= 0 && i < static_cast<int>(n)) diag[static_cast<std::size_t>(i)] = QSqrt(1);
    b.set("F" + std::to_string(j), SparseMat::diagonal(diag));
  }
  return b;
}

QSqrt c1_scalar(const ModuleType& t, const InstanceParams& p) {
  return QSqrt(Rational(p.q - 1).inverse() * qpow(p.q, p.N + p.M - t.r) * (1 + qpow(p.q, -t.d - 1)));
}

QSqrt c2_scalar(const ModuleType& t, const InstanceParams& p) {
  return QSqrt(qpow(p.q, 2 * p.N + 2 * p.M - 2 * t.r - t.d));
}

CentralPack build_central(const GeneratorSet& g) {
  Binding b = Binding::standard(g);
  Evaluator ev(b);
  CentralPack pack;
  pack.C1 = ev.matrix(algebra::c1_poly(g.params));
  pack.C2 = ev.matrix(algebra::c2_poly(g.params));
  for (const auto& t : enumerate_types(g.params)) {
    TypeSpectrum s;
    s.type = t;
    s.c1 = c1_scalar(t, g.params);
    s.c2 = c2_scalar(t, g.params);
    pack.types.push_back(s);
  }
  return pack;
}

void spectral_decompose(const GeneratorSet& g, CentralPack& pack, std::size_t dense_cap) {
  const std::size_t n = g.size();
  if (n > dense_cap) {
    throw algebra::CapExceeded("spectral decomposition of |P| = " + std::to_string(n) + " exceeds the dense cap " +
                               std::to_string(dense_cap));
  }
  // C1 and C2 commute with K, so they preserve grades and the joint
  // eigenspaces split grade by grade.
  auto block_of = [&](const SparseMat& m, int i) {
    const std::size_t lo = g.offsets[static_cast<std::size_t>(i)], w = g.grade_count(i);
    DenseMat b(w, w);
    for (std::size_t r = 0; r < w; ++r) {
      auto cs = m.row_cols(lo + r);
      auto vs = m.row_vals(lo + r);
      for (std::size_t k = 0; k < cs.size(); ++k) {
        if (cs[k] < lo || cs[k] >= lo + w) throw std::logic_error("central element does not preserve grades");
        b(r, cs[k] - lo) = vs[k];
      }
    }
    return b;
  };
  std::vector<DenseMat> c1b, c2b;
  for (int i = 0; i <= g.params.N; ++i) {
    c1b.push_back(block_of(pack.C1, i));
    c2b.push_back(block_of(pack.C2, i));
  }
  pack.projections.clear();
  for (auto& s : pack.types) {
    s.eigenspace_dim = 0;
    std::vector<SparseMat::Triplet> trips;
    // Grades outside r..r+d are skipped; anything the skipped kernels could
    // hold would show up as a shortfall in the total dimension.
    for (int i = s.type.r; i <= s.type.r + s.type.d; ++i) {
      const std::size_t lo = g.offsets[static_cast<std::size_t>(i)], w = g.grade_count(i);
      const DenseMat I = DenseMat::identity(w);
      const auto basis = exact::dense_kernel_basis((c1b[i] - I.scaled(s.c1)).stacked(c2b[i] - I.scaled(s.c2)));
      const std::size_t m = basis.size();
      s.eigenspace_dim += m;
      if (m == 0) continue;
      // C1 and C2 are symmetric, so distinct joint eigenspaces are orthogonal
      // and the projection is V(V^tV)^{-1}V^t.
      DenseMat V(w, m);
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t r = 0; r < w; ++r) V(r, j) = basis[j][r];
      }
      const DenseMat Vt = V.transpose();
      const DenseMat e = V * exact::dense_inverse(Vt * V) * Vt;
      for (std::size_t r = 0; r < w; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
          if (!e(r, c).is_zero()) {
            trips.push_back({static_cast<std::uint32_t>(lo + r), static_cast<std::uint32_t>(lo + c), e(r, c)});
          }
        }
      }
    }
    const std::size_t block = static_cast<std::size_t>(s.type.d) + 1;
    if (s.eigenspace_dim % block != 0) {
      throw std::logic_error("joint eigenspace of type " + type_label(s.type) + " has dimension " +
                             std::to_string(s.eigenspace_dim) + ", not a multiple of " + std::to_string(block));
    }
    s.multiplicity = s.eigenspace_dim / block;
    pack.projections[s.type] = SparseMat::from_triplets(n, n, std::move(trips));
  }
  const int q = g.params.q;
  pack.Phi = central_element(pack, [&](const ModuleType& t) { return QSqrt(qpow(q, t.r)); });
  pack.PhiInv = central_element(pack, [&](const ModuleType& t) { return QSqrt(qpow(q, -t.r)); });
  pack.Omega = central_element(pack, [&](const ModuleType& t) { return QSqrt::q_power(q, t.d); });
  pack.OmegaInv = central_element(pack, [&](const ModuleType& t) { return QSqrt::q_power(q, -t.d); });
  pack.decomposed = true;
}

SparseMat central_element(const CentralPack& pack, const std::function<QSqrt(const ModuleType&)>& f) {
  if (!pack.decomposed && pack.projections.empty()) throw std::logic_error("central_element needs a decomposed pack");
  SparseMat sum(pack.C1.rows(), pack.C1.cols());
  for (const auto& [t, e] : pack.projections) sum = sum + e.scaled(f(t));
  return sum;
}

std::map<ModuleType, std::size_t> counted_multiplicities(const GeneratorSet& g) {
  const int N = g.params.N;
  const std::size_t n = g.size();
  std::map<ModuleType, std::size_t> out;
  for (int r = 0; r <= N; ++r) {
    const std::size_t lo = g.offsets[static_cast<std::size_t>(r)], width = g.grade_count(r);
    // Kernel of L on grade r, as full-length vectors.
    std::vector<std::vector<QSqrt>> kern;
    if (r == 0) {
      kern.assign(1, std::vector<QSqrt>(n));
      kern[0][lo] = QSqrt(1);
    } else {
      const std::size_t below = g.offsets[static_cast<std::size_t>(r) - 1];
      DenseMat Lr(g.grade_count(r - 1), width);
      for (std::size_t i = 0; i < Lr.rows(); ++i) {
        auto cs = g.L.row_cols(below + i);
        auto vs = g.L.row_vals(below + i);
        for (std::size_t k = 0; k < cs.size(); ++k) Lr(i, cs[k] - lo) = vs[k];
      }
      for (auto& v : exact::dense_kernel_basis(Lr)) {
        std::vector<QSqrt> full(n);
        for (std::size_t i = 0; i < width; ++i) full[lo + i] = std::move(v[i]);
        kern.push_back(std::move(full));
      }
    }
    std::vector<std::size_t> ranks;
    for (int d = 0; d <= N - r; ++d) {
      const int grade = r + d;
      const std::size_t glo = g.offsets[static_cast<std::size_t>(grade)], gw = g.grade_count(grade);
      DenseMat rows(kern.size(), gw);
      for (std::size_t k = 0; k < kern.size(); ++k) {
        for (std::size_t i = 0; i < gw; ++i) rows(k, i) = kern[k][glo + i];
      }
      ranks.push_back(kern.empty() ? 0 : exact::dense_rank(rows));
      for (auto& v : kern) v = g.R.apply(v);
    }
    ranks.push_back(0);
    for (int d = 0; d <= N - r; ++d) {
      const std::size_t m = ranks[static_cast<std::size_t>(d)] - ranks[static_cast<std::size_t>(d) + 1];
      if (m != 0) out[{r, d}] = m;
    }
  }
  return out;
}

CheckResult verify_spectrum(const GeneratorSet& g, CentralPack& pack, std::size_t dense_cap) {
  Stopwatch sw;
  CheckResult res;
  res.id = "SPEC";
  res.mode = "dense";
  res.pass = true;
  auto fail = [&](const std::string& component, const std::string& note) {
    if (!res.pass) return;
    res.pass = false;
    Witness w;
    w.component = component;
    w.note = note;
    res.witness = std::move(w);
  };
  spectral_decompose(g, pack, dense_cap);
  const auto counted = counted_multiplicities(g);
  const std::size_t n = g.size();
  const auto& P = g.params;

  // Separation of joint eigenvalues.
  ++res.components;
  for (std::size_t a = 0; a < pack.types.size(); ++a) {
    for (std::size_t b = a + 1; b < pack.types.size(); ++b) {
      if (pack.types[a].c1 == pack.types[b].c1 && pack.types[a].c2 == pack.types[b].c2) {
        fail("separation", "types " + type_label(pack.types[a].type) + " and " + type_label(pack.types[b].type) +
                               " share (c1, c2)");
      }
    }
  }
  // Total dimension: nothing outside the predicted spectrum.
  ++res.components;
  std::size_t total = 0;
  for (const auto& s : pack.types) total += s.eigenspace_dim;
  if (total != n) fail("total dimension", "joint eigenspaces span " + std::to_string(total) + " of " + std::to_string(n));
  // Two multiplicity methods.
  ++res.components;
  for (auto& s : pack.types) {
    auto it = counted.find(s.type);
    s.counted_multiplicity = it == counted.end() ? 0 : it->second;
    if (s.counted_multiplicity != s.multiplicity) {
      fail("multiplicity " + type_label(s.type), "eigenspace gives " + std::to_string(s.multiplicity) +
                                                     ", lowering kernels give " + std::to_string(s.counted_multiplicity));
    }
  }
  for (const auto& [t, m] : counted) {
    if (!in_psi(t, P)) fail("multiplicity " + type_label(t), "module type outside the realizable set");
  }
  // Graded dimensions.
  ++res.components;
  for (int i = 0; i <= P.N; ++i) {
    std::size_t dim = 0;
    for (const auto& s : pack.types) {
      if (s.type.r <= i && i <= s.type.r + s.type.d) dim += s.multiplicity;
    }
    if (dim != g.grade_count(i)) {
      fail("graded dimension " + std::to_string(i), "types account for " + std::to_string(dim) + " of " +
                                                        std::to_string(g.grade_count(i)));
    }
  }
  // Idempotents: orthogonal, summing to I, central, with the predicted C1, C2 action.
  ++res.components;
  SparseMat sum(n, n);
  for (const auto& [t, e] : pack.projections) {
    sum = sum + e;
    const auto c1 = c1_scalar(t, P), c2 = c2_scalar(t, P);
    if (!(e * e == e)) fail("e" + type_label(t), "not idempotent");
    if (!(g.R * e == e * g.R) || !(g.L * e == e * g.L)) fail("e" + type_label(t), "does not commute with R, L");
    if (!(pack.C1 * e == e.scaled(c1)) || !(pack.C2 * e == e.scaled(c2))) fail("e" + type_label(t), "wrong C1/C2 action");
    for (const auto& [u, f] : pack.projections) {
      if (u != t && !(e * f).equals_zero()) fail("e" + type_label(t) + "e" + type_label(u), "not orthogonal");
    }
  }
  if (!(sum == SparseMat::identity(n))) fail("sum of e", "does not equal I");

  nlohmann::ordered_json rep;
  rep["instance"] = {{"q", P.q}, {"N", P.N}, {"M", P.M}};
  rep["types"] = nlohmann::ordered_json::array();
  for (const auto& s : pack.types) {
    rep["types"].push_back({{"r", s.type.r},
                            {"d", s.type.d},
                            {"c1", s.c1.a().str()},
                            {"c2", s.c2.a().str()},
                            {"multiplicity", s.multiplicity},
                            {"counted_multiplicity", s.counted_multiplicity}});
  }
  rep["total_dim"] = total;
  rep["pass"] = res.pass;
  res.data = std::move(rep);
  res.elapsed_ms = sw.ms();
  return res;
}

CheckResult verify_module_relations(const ModuleType& t, const InstanceParams& p) {
  Stopwatch sw;
  CheckResult res;
  res.id = "MOD-REL";
  res.mode = "dense";
  res.pass = true;
  const auto model = module_model(t, p);
  Binding b = module_binding(model, p);
  Evaluator ev(b);
  for (const auto& id : algebra::relation_ids()) {
    if (id == "REL-18" || id == "REL-19" || id == "REL-25") continue;
    run_components(res, ev, algebra::relation_components(id, p), type_label(t) + " " + id + ": ");
    if (!res.pass) break;
  }
  if (res.pass) {
    run_components(res, ev,
                   {{"C1 = c1 I", algebra::c1_poly(p), Poly(c1_scalar(t, p))},
                    {"C2 = c2 I", algebra::c2_poly(p), Poly(c2_scalar(t, p))}},
                   type_label(t) + " ");
  }
  res.elapsed_ms = sw.ms();
  return res;
}

CheckResult verify_uqsl2(const ModuleType& t, const InstanceParams& p, int a, int b) {
  Stopwatch sw;
  CheckResult res;
  res.id = "UQSL2-" + type_label(t);
  res.mode = "dense";
  res.pass = true;
  const auto m = module_model(t, p);
  const int q = p.q;
  const QSqrt tau = QSqrt::sqrt_q(q);
  const QSqrt phi(qpow(q, t.r)), omega = QSqrt::q_power(q, t.d);
  const QSqrt theta = pow(phi, a) * pow(omega, b);
  const QSqrt s = QSqrt(qpow(q, -p.N - p.M));
  Binding bind(m.Rm.rows());
  bind.set("e", m.Lm.scaled(theta).to_sparse());
  bind.set("f", m.Rm.scaled(s * tau * theta.inverse() * phi * omega).to_sparse());
  bind.set("k", m.Km.scaled(s * phi * omega).to_sparse());
  bind.set("ki", m.Kim.scaled((s * phi * omega).inverse()).to_sparse());
  Evaluator ev(bind);
  run_components(res, ev, chevalley_components(q));
  res.elapsed_ms = sw.ms();
  return res;
}

CheckResult verify_uqsl2_global(const GeneratorSet& g, const CentralPack& pack, int a, int b) {
  Stopwatch sw;
  CheckResult res;
  res.id = "UQSL2-GLOBAL";
  res.mode = "dense";
  res.pass = true;
  if (!pack.decomposed) throw std::logic_error("verify_uqsl2_global needs a decomposed pack");
  const int q = g.params.q;
  const QSqrt tau = QSqrt::sqrt_q(q);
  auto theta_of = [&](const ModuleType& t, int sign) {
    return pow(QSqrt(qpow(q, t.r)), sign * a) * pow(QSqrt::q_power(q, t.d), sign * b);
  };
  const SparseMat Theta = central_element(pack, [&](const ModuleType& t) { return theta_of(t, 1); });
  const SparseMat ThetaInv = central_element(pack, [&](const ModuleType& t) { return theta_of(t, -1); });
  const QSqrt s(qpow(q, -g.params.N - g.params.M));
  const SparseMat PO = pack.Phi * pack.Omega, POinv = pack.PhiInv * pack.OmegaInv;
  Binding bind(g.size());
  bind.set("e", Theta * g.L);
  bind.set("f", (ThetaInv * PO * g.R).scaled(s * tau));
  bind.set("k", (PO * g.K).scaled(s));
  bind.set("ki", (POinv * g.Kinv).scaled(s.inverse()));
  Evaluator ev(bind);
  run_components(res, ev, chevalley_components(q));
  res.detail = "Theta = Phi^" + std::to_string(a) + " Omega^" + std::to_string(b);
  res.elapsed_ms = sw.ms();
  return res;
}

CheckResult verify_phi_omega(const GeneratorSet& g, const CentralPack& pack) {
  Stopwatch sw;
  CheckResult res;
  res.id = "PHI-OMEGA";
  res.mode = "dense";
  res.pass = true;
  if (!pack.decomposed) throw std::logic_error("verify_phi_omega needs a decomposed pack");
  const auto& P = g.params;
  const int q = P.q;
  const QSqrt tau = QSqrt::sqrt_q(q), tinv = tau.inverse();
  Binding bind = Binding::standard(g);
  bind.set("C1", pack.C1);
  bind.set("C2", pack.C2);
  bind.set("Phi", pack.Phi);
  bind.set("Phii", pack.PhiInv);
  bind.set("Om", pack.Omega);
  bind.set("Omi", pack.OmegaInv);
  Evaluator ev(bind);
  const Poly C1 = Poly::atom("C1"), C2 = Poly::atom("C2"), Phi = Poly::atom("Phi"), Phii = Poly::atom("Phii"),
             Om = Poly::atom("Om"), Omi = Poly::atom("Omi"), R = Poly::atom("R"), L = Poly::atom("L"),
             K = Poly::atom("K");
  const QSqrt c = QSqrt(qpow(q, P.N + P.M - 1)) / (tau - tinv);
  std::vector<Component> comps = {
      {"Phi Phi^-1 = I", Phi * Phii, Poly(1)},
      {"Omega Omega^-1 = I", Om * Omi, Poly(1)},
      {"C1 = q^{N+M-1} Phi^-1 Omega^-1 (tau Omega + tau^-1 Omega^-1)/(tau - tau^-1)", C1,
       (c * tau) * Phii + (c * tinv) * (Phii * Omi * Omi)},
      {"C2 = q^{2N+2M} Phi^-2 Omega^-2", C2, QSqrt(qpow(q, 2 * P.N + 2 * P.M)) * (Phii * Phii * Omi * Omi)},
  };
  for (const auto& [n, X] : std::vector<std::pair<std::string, Poly>>{{"R", R}, {"L", L}, {"K", K}}) {
    comps.push_back({"[Phi," + n + "] = 0", algebra::commutator(Phi, X), Poly()});
    comps.push_back({"[Omega," + n + "] = 0", algebra::commutator(Om, X), Poly()});
  }
  run_components(res, ev, comps);
  res.elapsed_ms = sw.ms();
  return res;
}

}  // namespace attposet::specdec
