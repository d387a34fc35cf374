#include "attposet/generators.hpp"

#include <algorithm>

namespace attposet::algebra {

using exact::QSqrt;
using exact::Rational;

int GeneratorSet::grade_of(std::size_t index) const {
  auto it = std::upper_bound(offsets.begin(), offsets.end(), index);
  return static_cast<int>(it - offsets.begin()) - 1;
}

GeneratorSet build_generators(const poset::Poset& p) {
  GeneratorSet g;
  g.params = p.params();
  const int N = g.params.N, M = g.params.M, q = g.params.q;
  for (int i = 0; i <= N + 1; ++i) g.offsets.push_back(p.offset(i));
  const std::size_t n = p.size();

  SparseMat::RowBuilder r(n, n), s(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    for (auto y : poset::lower_covers(p, x)) r.add(static_cast<std::uint32_t>(y), QSqrt(1));
    r.end_row();
    for (auto y : poset::tilde_neighbors(p, x)) s.add(static_cast<std::uint32_t>(y), QSqrt(1));
    s.end_row();
  }
  g.R = r.finish();
  g.S = s.finish();
  g.L = g.R.transpose();

  std::vector<QSqrt> k(n), kinv(n);
  for (int i = 0; i <= N; ++i) {
    const Rational w = Rational::pow(Rational(q), N + M - i);
    const Rational winv = w.inverse();
    std::vector<QSqrt> f(n);
    for (std::size_t x = p.offset(i); x < p.offset(i + 1); ++x) {
      k[x] = QSqrt(w);
      kinv[x] = QSqrt(winv);
      f[x] = QSqrt(1);
    }
    g.F.push_back(SparseMat::diagonal(f));
  }
  g.K = SparseMat::diagonal(k);
  g.Kinv = SparseMat::diagonal(kinv);
  return g;
}

}  // namespace attposet::algebra
