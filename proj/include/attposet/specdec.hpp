#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <vector>

#include "attposet/check.hpp"
#include "attposet/dense.hpp"
#include "attposet/evaluate.hpp"
#include "attposet/generators.hpp"

namespace attposet::specdec {

using algebra::GeneratorSet;
using exact::DenseMat;
using exact::QSqrt;
using exact::Rational;
using exact::SparseMat;
using poset::InstanceParams;

// Isomorphism class of an irreducible T-module: endpoint r, diameter d.
struct ModuleType {
  int r = 0;
  int d = 0;
  auto operator<=>(const ModuleType&) const = default;
};

bool in_psi(const ModuleType& t, const InstanceParams& p);
// All (r, d) with N−2r ≤ d ≤ N−r and d ≤ N+M−2r, ordered by r then d.
std::vector<ModuleType> enumerate_types(const InstanceParams& p);

// x_{r+i}(r,d) = q^{N+M−r−d}(q^i−1)(q^{d+1−i}−1)/(q−1)², for 1 ≤ i ≤ d.
QSqrt x_coeff(int r, int d, int i, const InstanceParams& p);

// Action of R, L, K on the basis w_0..w_d of a module of type t.
struct ModuleModel {
  ModuleType type;
  DenseMat Rm, Lm, Km, Kim;
};

ModuleModel module_model(const ModuleType& t, const InstanceParams& p);

// R, L, K, Ki, F0..FN and S = RL − LR + (K − q^{N+M}Ki + (1−q^M)I)/(q−1)
// acting on the model.
algebra::Binding module_binding(const ModuleModel& m, const InstanceParams& p);

// Scalars by which C1 and C2 act on a module of type t.
QSqrt c1_scalar(const ModuleType& t, const InstanceParams& p);
QSqrt c2_scalar(const ModuleType& t, const InstanceParams& p);

struct TypeSpectrum {
  ModuleType type;
  QSqrt c1, c2;
  std::size_t eigenspace_dim = 0;
  std::size_t multiplicity = 0;          // eigenspace_dim / (d+1)
  std::size_t counted_multiplicity = 0;  // from lowering kernels and raising ranks
};

struct CentralPack {
  SparseMat C1, C2;
  std::vector<TypeSpectrum> types;
  // Filled by spectral_decompose.
  bool decomposed = false;
  std::map<ModuleType, SparseMat> projections;
  SparseMat Phi, PhiInv, Omega, OmegaInv;
};

CentralPack build_central(const GeneratorSet& g);

// Joint eigenspaces of (C1, C2) as exact kernels, primitive central
// idempotents, Φ = Σ q^r e_λ and Ω = Σ q^{d/2} e_λ. Throws CapExceeded when
// |P| > dense_cap and std::logic_error when an eigenspace dimension is not a
// multiple of d+1.
void spectral_decompose(const GeneratorSet& g, CentralPack& pack, std::size_t dense_cap);

// Multiplicity of each type without using C1, C2: with K_r the kernel of L on
// grade r, m(r,d) = rank R^d K_r − rank R^{d+1} K_r. Types outside Ψ are
// included when nonzero.
std::map<ModuleType, std::size_t> counted_multiplicities(const GeneratorSet& g);

// Σ_λ f(λ) e_λ.
SparseMat central_element(const CentralPack& pack, const std::function<QSqrt(const ModuleType&)>& f);

// Runs the decomposition and checks separation, total dimension, graded
// dimensions, agreement of both multiplicity methods and the idempotent
// identities. data holds the spectrum report.
CheckResult verify_spectrum(const GeneratorSet& g, CentralPack& pack, std::size_t dense_cap);

// REL-01..REL-17 (excluding REL-18's support pattern) and C1, C2 scalar action on one model.
CheckResult verify_module_relations(const ModuleType& t, const InstanceParams& p);

// Chevalley relations for e = ΘL, f = q^{−N−M+1/2}Θ⁻¹ΦΩR, k = q^{−N−M}ΦΩK
// with Θ = Φ^aΩ^b; per-module form substitutes Φ = q^r, Ω = q^{d/2}.
CheckResult verify_uqsl2(const ModuleType& t, const InstanceParams& p, int a = 0, int b = 0);
CheckResult verify_uqsl2_global(const GeneratorSet& g, const CentralPack& pack, int a = 0, int b = 0);

// C1 and C2 written through Φ and Ω, as matrix identities on the standard module.
CheckResult verify_phi_omega(const GeneratorSet& g, const CentralPack& pack);

}  // namespace attposet::specdec
