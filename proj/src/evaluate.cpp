#include "attposet/evaluate.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <random>

namespace attposet::algebra {

namespace {

using i128 = __int128;

struct Overflow {};

mpz_class to_mpz(i128 v) { return mpz_class(int128_to_string(v)); }

QSqrt from_parts(i128 a, i128 b, int q, const Rational& G) {
  return QSqrt(Rational(to_mpz(a)) / G, Rational(to_mpz(b)) / G, b == 0 ? 0 : q);
}

i128 mul_add(i128 acc, i128 x, i128 y) {
  i128 p;
  if (__builtin_mul_overflow(x, y, &p)) throw Overflow{};
  if (__builtin_add_overflow(acc, p, &acc)) throw Overflow{};
  return acc;
}

bool fits_i64(const Rational& r) { return r.is_small() && r.small_den() == 1; }

int radicand_of(const std::vector<Term>& a, const std::vector<Term>& b) {
  for (const auto* side : {&a, &b}) {
    for (const auto& t : *side) {
      if (t.coef.radicand() != 0) return t.coef.radicand();
    }
  }
  return 0;
}

Word suffix(const Word& w, std::size_t from) { return Word(w.begin() + static_cast<std::ptrdiff_t>(from), w.end()); }

}  // namespace

std::string int128_to_string(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

Binding Binding::standard(const GeneratorSet& g) {
  Binding b(g.size());
  b.set("R", g.R);
  b.set("L", g.L);
  b.set("K", g.K);
  b.set("Ki", g.Kinv);
  b.set("S", g.S);
  for (std::size_t i = 0; i < g.F.size(); ++i) b.set("F" + std::to_string(i), g.F[i]);
  return b;
}

void Binding::set(const std::string& name, SparseMat m) { set(name, std::make_shared<const SparseMat>(std::move(m))); }

void Binding::set(const std::string& name, std::shared_ptr<const SparseMat> m) {
  if (m->rows() != n_ || m->cols() != n_) throw std::invalid_argument("binding '" + name + "' has the wrong shape");
  mats_[name] = std::move(m);
}

bool Binding::has(const std::string& name) const {
  if (mats_.count(name)) return true;
  const std::string base = transpose_name(name);
  return name.size() > 2 && name.compare(name.size() - 2, 2, "^t") == 0 && mats_.count(base);
}

std::shared_ptr<const SparseMat> Binding::share(const std::string& name) const {
  auto it = mats_.find(name);
  if (it != mats_.end()) return it->second;
  if (name.size() > 2 && name.compare(name.size() - 2, 2, "^t") == 0) {
    auto base = mats_.find(transpose_name(name));
    if (base != mats_.end()) {
      auto t = std::make_shared<const SparseMat>(base->second->transpose());
      mats_[name] = t;
      return t;
    }
  }
  throw std::invalid_argument("unbound atom '" + name + "'");
}

const SparseMat& Binding::get(const std::string& name) const { return *share(name); }

Evaluator::Atom& Evaluator::atom(const std::string& name) {
  auto it = atoms_.find(name);
  if (it != atoms_.end()) return it->second;
  auto base = b_.share(name);
  Atom a;
  mpz_class l = 1;
  for (std::size_t r = 0; r < base->rows(); ++r) {
    for (const auto& v : base->row_vals(r)) {
      if (!v.a().is_integer()) l = exact::lcm(l, v.a().denominator());
      if (!v.b().is_integer()) l = exact::lcm(l, v.b().denominator());
    }
  }
  a.delta = Rational(l);
  a.scaled = l == 1 ? base : std::make_shared<const SparseMat>(base->scaled(QSqrt(a.delta)));
  a.int_ok = true;
  a.ptr.push_back(0);
  for (std::size_t r = 0; r < a.scaled->rows() && a.int_ok; ++r) {
    auto cs = a.scaled->row_cols(r);
    auto vs = a.scaled->row_vals(r);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if (!vs[k].is_rational() || !fits_i64(vs[k].a())) {
        a.int_ok = false;
        break;
      }
      a.col.push_back(cs[k]);
      a.val.push_back(vs[k].a().small_num());
    }
    a.ptr.push_back(a.col.size());
  }
  if (!a.int_ok) {
    a.ptr.clear();
    a.col.clear();
    a.val.clear();
  }
  return atoms_.emplace(name, std::move(a)).first->second;
}

Evaluator::Prepared Evaluator::prepare(const Component& c) {
  Prepared p;
  auto rescale = [&](const Poly& side, std::vector<Term>& out) {
    for (const auto& t : side.terms()) {
      Rational d(1);
      for (const auto& name : t.word) d *= atom(name).delta;
      out.push_back({d.is_one() ? t.coef : t.coef / QSqrt(d), t.word});
    }
  };
  rescale(c.lhs, p.lhs);
  rescale(c.rhs, p.rhs);
  mpz_class g = 1;
  for (const auto* side : {&p.lhs, &p.rhs}) {
    for (const auto& t : *side) {
      g = exact::lcm(g, t.coef.a().denominator());
      g = exact::lcm(g, t.coef.b().denominator());
    }
  }
  p.G = Rational(g);
  if (g != 1) {
    for (auto* side : {&p.lhs, &p.rhs}) {
      for (auto& t : *side) t.coef = t.coef * QSqrt(p.G);
    }
  }
  return p;
}

const SparseMat& Evaluator::product(const Word& w, std::size_t from) {
  Word key = suffix(w, from);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  SparseMat m = from == w.size() ? SparseMat::identity(b_.dim()) : *atom(w[from]).scaled * product(w, from + 1);
  return memo_.emplace(std::move(key), std::move(m)).first->second;
}

void Evaluator::clear_memo() { memo_.clear(); }

SparseMat Evaluator::matrix(const Poly& p) {
  Prepared pr = prepare({"", p, Poly()});
  SparseMat sum(b_.dim(), b_.dim());
  for (const auto& t : pr.lhs) sum = sum + product(t.word, 0).scaled(t.coef);
  return pr.G.is_one() ? sum : sum.scaled(QSqrt(pr.G.inverse()));
}

Outcome Evaluator::dense(const Component& c, std::size_t dense_cap) {
  if (b_.dim() > dense_cap) {
    throw CapExceeded("dense evaluation of a " + std::to_string(b_.dim()) + "-dimensional identity exceeds the dense cap of " +
                      std::to_string(dense_cap));
  }
  Prepared pr = prepare(c);
  auto side = [&](const std::vector<Term>& terms) {
    SparseMat sum(b_.dim(), b_.dim());
    for (const auto& t : terms) sum = sum + product(t.word, 0).scaled(t.coef);
    return sum;
  };
  SparseMat l = side(pr.lhs), r = side(pr.rhs);
  Outcome out;
  if (l == r) return out;
  out.pass = false;
  auto [row, col, v] = (l - r).first_entry();
  (void)v;
  Witness w;
  w.component = c.label;
  w.row = row;
  w.col = col;
  const QSqrt ginv(pr.G.inverse());
  w.lhs = l.at(row, col) * ginv;
  w.rhs = r.at(row, col) * ginv;
  out.witness = std::move(w);
  return out;
}

Outcome Evaluator::matrix_free(const Component& c, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("matrix-free verification needs at least one trial");
  Prepared pr = prepare(c);
  const std::size_t n = b_.dim();
  const int q = radicand_of(pr.lhs, pr.rhs);
  auto random_vector = [&](int trial) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(trial));
    std::uniform_int_distribution<std::int64_t> dist(0, 1'000'000);
    std::vector<std::int64_t> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
  };

  bool int_path = true;
  for (const auto* side : {&pr.lhs, &pr.rhs}) {
    for (const auto& t : *side) {
      if (!fits_i64(t.coef.a()) || !fits_i64(t.coef.b())) int_path = false;
      for (const auto& name : t.word) int_path = int_path && atom(name).int_ok;
    }
  }

  Outcome out;
  if (int_path) {
    try {
      out.engine = "int128";
      for (int trial = 0; trial < trials; ++trial) {
        const auto v0 = random_vector(trial);
        std::map<Word, std::vector<i128>> memo;
        memo[Word{}] = std::vector<i128>(v0.begin(), v0.end());
        std::function<const std::vector<i128>&(const Word&, std::size_t)> prod =
            [&](const Word& w, std::size_t from) -> const std::vector<i128>& {
          Word key = suffix(w, from);
          auto it = memo.find(key);
          if (it != memo.end()) return it->second;
          const auto& x = prod(w, from + 1);
          const Atom& a = atom(w[from]);
          std::vector<i128> y(n, 0);
          for (std::size_t r = 0; r < n; ++r) {
            i128 acc = 0;
            for (std::size_t k = a.ptr[r]; k < a.ptr[r + 1]; ++k) {
              const i128 xv = x[a.col[k]];
              if (xv != 0) acc = mul_add(acc, a.val[k], xv);
            }
            y[r] = acc;
          }
          return memo.emplace(std::move(key), std::move(y)).first->second;
        };
        auto side = [&](const std::vector<Term>& terms, std::vector<i128>& A, std::vector<i128>& B) {
          A.assign(n, 0);
          B.assign(n, 0);
          for (const auto& t : terms) {
            const auto& x = prod(t.word, 0);
            const i128 ca = t.coef.a().small_num(), cb = t.coef.b().small_num();
            for (std::size_t r = 0; r < n; ++r) {
              if (x[r] == 0) continue;
              if (ca != 0) A[r] = mul_add(A[r], ca, x[r]);
              if (cb != 0) B[r] = mul_add(B[r], cb, x[r]);
            }
          }
        };
        std::vector<i128> la, lb, ra, rb;
        side(pr.lhs, la, lb);
        side(pr.rhs, ra, rb);
        for (std::size_t r = 0; r < n; ++r) {
          if (la[r] != ra[r] || lb[r] != rb[r]) {
            out.pass = false;
            Witness w;
            w.component = c.label;
            w.trial = trial;
            w.index = r;
            w.lhs = from_parts(la[r], lb[r], q, pr.G);
            w.rhs = from_parts(ra[r], rb[r], q, pr.G);
            out.witness = std::move(w);
            return out;
          }
        }
      }
      return out;
    } catch (const Overflow&) {
      out = Outcome{};
    }
  }

  out.engine = "qsqrt";
  for (int trial = 0; trial < trials; ++trial) {
    const auto v0 = random_vector(trial);
    std::map<Word, std::vector<QSqrt>> memo;
    {
      std::vector<QSqrt> v(n);
      for (std::size_t r = 0; r < n; ++r) v[r] = QSqrt(static_cast<long long>(v0[r]));
      memo[Word{}] = std::move(v);
    }
    std::function<const std::vector<QSqrt>&(const Word&, std::size_t)> prod =
        [&](const Word& w, std::size_t from) -> const std::vector<QSqrt>& {
      Word key = suffix(w, from);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
      const auto& x = prod(w, from + 1);
      auto y = atom(w[from]).scaled->apply(x);
      return memo.emplace(std::move(key), std::move(y)).first->second;
    };
    auto side = [&](const std::vector<Term>& terms) {
      std::vector<QSqrt> acc(n);
      for (const auto& t : terms) {
        const auto& x = prod(t.word, 0);
        for (std::size_t r = 0; r < n; ++r) {
          if (!x[r].is_zero()) acc[r].add_product(t.coef, x[r]);
        }
      }
      return acc;
    };
    const auto l = side(pr.lhs), r = side(pr.rhs);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(l[i] == r[i])) {
        out.pass = false;
        Witness w;
        w.component = c.label;
        w.trial = trial;
        w.index = i;
        const QSqrt ginv(pr.G.inverse());
        w.lhs = l[i] * ginv;
        w.rhs = r[i] * ginv;
        out.witness = std::move(w);
        return out;
      }
    }
  }
  return out;
}

namespace {

// Scatter-based product of a matrix (given by its transpose) with a sparse vector.
SparseVec scatter(const SparseMat& xt, const SparseVec& v, std::vector<QSqrt>& acc, std::vector<std::uint8_t>& mark,
                  std::vector<std::uint32_t>& touched) {
  touched.clear();
  for (const auto& [c, val] : v) {
    auto rs = xt.row_cols(c);
    auto xs = xt.row_vals(c);
    for (std::size_t k = 0; k < rs.size(); ++k) {
      const auto r = rs[k];
      if (!mark[r]) {
        mark[r] = 1;
        acc[r] = xs[k] * val;
        touched.push_back(r);
      } else {
        acc[r].add_product(xs[k], val);
      }
    }
  }
  std::sort(touched.begin(), touched.end());
  SparseVec out;
  out.reserve(touched.size());
  for (auto r : touched) {
    mark[r] = 0;
    if (!acc[r].is_zero()) out.emplace_back(r, std::move(acc[r]));
    acc[r] = QSqrt();
  }
  return out;
}

SparseVec axpy_merge(const SparseVec& x, const QSqrt& c, const SparseVec& y) {
  SparseVec out;
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, c * y[j].second);
      ++j;
    } else {
      QSqrt v = x[i].second;
      v.add_product(c, y[j].second);
      if (!v.is_zero()) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Outcome Evaluator::columns(const Component& c, const std::vector<std::size_t>& cols) {
  Prepared pr = prepare(c);
  const std::size_t n = b_.dim();
  std::vector<QSqrt> acc(n);
  std::vector<std::uint8_t> mark(n, 0);
  std::vector<std::uint32_t> touched;
  Outcome out;
  for (std::size_t col : cols) {
    std::map<Word, SparseVec> memo;
    memo[Word{}] = SparseVec{{static_cast<std::uint32_t>(col), QSqrt(1)}};
    std::function<const SparseVec&(const Word&, std::size_t)> prod = [&](const Word& w,
                                                                         std::size_t from) -> const SparseVec& {
      Word key = suffix(w, from);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
      const SparseVec& x = prod(w, from + 1);
      Atom& a = atom(w[from]);
      if (!a.scaled_t) a.scaled_t = std::make_shared<const SparseMat>(a.scaled->transpose());
      SparseVec y = scatter(*a.scaled_t, x, acc, mark, touched);
      return memo.emplace(std::move(key), std::move(y)).first->second;
    };
    auto side = [&](const std::vector<Term>& terms) {
      SparseVec sum;
      for (const auto& t : terms) sum = axpy_merge(sum, t.coef, prod(t.word, 0));
      return sum;
    };
    const SparseVec l = side(pr.lhs), r = side(pr.rhs);
    if (l == r) continue;
    // First differing row.
    std::size_t i = 0, j = 0;
    while (i < l.size() && j < r.size() && l[i] == r[j]) {
      ++i;
      ++j;
    }
    std::uint32_t row;
    QSqrt lv, rv;
    if (j == r.size() || (i < l.size() && l[i].first < r[j].first)) {
      row = l[i].first;
      lv = l[i].second;
    } else if (i == l.size() || r[j].first < l[i].first) {
      row = r[j].first;
      rv = r[j].second;
    } else {
      row = l[i].first;
      lv = l[i].second;
      rv = r[j].second;
    }
    out.pass = false;
    Witness w;
    w.component = c.label;
    w.row = row;
    w.col = col;
    const QSqrt ginv(pr.G.inverse());
    w.lhs = lv * ginv;
    w.rhs = rv * ginv;
    out.witness = std::move(w);
    return out;
  }
  return out;
}

SparseVec Evaluator::apply_to_basis(const Poly& p, std::size_t col) {
  Component c{"", p, Poly()};
  Prepared pr = prepare(c);
  const std::size_t n = b_.dim();
  std::vector<QSqrt> acc(n);
  std::vector<std::uint8_t> mark(n, 0);
  std::vector<std::uint32_t> touched;
  std::map<Word, SparseVec> memo;
  memo[Word{}] = SparseVec{{static_cast<std::uint32_t>(col), QSqrt(1)}};
  std::function<const SparseVec&(const Word&, std::size_t)> prod = [&](const Word& w,
                                                                       std::size_t from) -> const SparseVec& {
    Word key = suffix(w, from);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const SparseVec& x = prod(w, from + 1);
    Atom& a = atom(w[from]);
    if (!a.scaled_t) a.scaled_t = std::make_shared<const SparseMat>(a.scaled->transpose());
    SparseVec y = scatter(*a.scaled_t, x, acc, mark, touched);
    return memo.emplace(std::move(key), std::move(y)).first->second;
  };
  SparseVec sum;
  for (const auto& t : pr.lhs) sum = axpy_merge(sum, t.coef, prod(t.word, 0));
  if (!pr.G.is_one()) {
    const QSqrt ginv(pr.G.inverse());
    for (auto& [r, v] : sum) v = v * ginv;
  }
  return sum;
}

}  // namespace attposet::algebra
