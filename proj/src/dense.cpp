#include "attposet/dense.hpp"

#include <map>
#include <stdexcept>

namespace attposet::exact {

namespace {

void require_shape(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("shape mismatch in ") + what);
}

struct Echelon {
  DenseMat m;
  std::vector<std::size_t> pivots;
};

// Gauss-Jordan to reduced row echelon form over Q(√q). Pivot entries become
// 1; only nonzero entries of the pivot row are touched, which keeps the
// structured sparse matrices met here cheap.
Echelon rref(DenseMat m) {
  Echelon e;
  std::size_t k = 0;
  std::vector<std::size_t> nz;
  for (std::size_t c = 0; c < m.cols() && k < m.rows(); ++c) {
    std::size_t p = k;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != k) {
      for (std::size_t j = c; j < m.cols(); ++j) std::swap(m(p, j), m(k, j));
    }
    const QSqrt inv = m(k, c).inverse();
    nz.clear();
    for (std::size_t j = c; j < m.cols(); ++j) {
      if (m(k, j).is_zero()) continue;
      m(k, j) = m(k, j) * inv;
      nz.push_back(j);
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == k || m(i, c).is_zero()) continue;
      const QSqrt f = -m(i, c);
      for (auto j : nz) m(i, j).add_product(f, m(k, j));
    }
    e.pivots.push_back(c);
    ++k;
  }
  e.m = std::move(m);
  return e;
}

}  // namespace

DenseMat DenseMat::identity(std::size_t n) {
  DenseMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = QSqrt(1);
  return m;
}

DenseMat DenseMat::diagonal(const std::vector<QSqrt>& diag) {
  DenseMat m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

DenseMat DenseMat::from_sparse(const SparseMat& s) {
  DenseMat m(s.rows(), s.cols());
  for (std::size_t r = 0; r < s.rows(); ++r) {
    auto cs = s.row_cols(r);
    auto vs = s.row_vals(r);
    for (std::size_t k = 0; k < cs.size(); ++k) m(r, cs[k]) = vs[k];
  }
  return m;
}

DenseMat DenseMat::from_rows(const std::vector<std::vector<QSqrt>>& rows) {
  DenseMat m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require_shape(rows[r].size() == m.cols(), "from_rows");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

bool DenseMat::is_zero() const {
  for (const auto& v : data_) {
    if (!v.is_zero()) return false;
  }
  return true;
}

DenseMat DenseMat::transpose() const {
  DenseMat t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

DenseMat DenseMat::scaled(const QSqrt& s) const {
  DenseMat out = *this;
  for (auto& v : out.data_) v *= s;
  return out;
}

SparseMat DenseMat::to_sparse() const {
  SparseMat::RowBuilder b(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) b.add(static_cast<std::uint32_t>(c), (*this)(r, c));
    b.end_row();
  }
  return b.finish();
}

DenseMat DenseMat::stacked(const DenseMat& below) const {
  require_shape(cols_ == below.cols_, "stacked");
  DenseMat out(rows_ + below.rows_, cols_);
  std::copy(data_.begin(), data_.end(), out.data_.begin());
  std::copy(below.data_.begin(), below.data_.end(), out.data_.begin() + static_cast<std::ptrdiff_t>(data_.size()));
  return out;
}

DenseMat operator+(const DenseMat& x, const DenseMat& y) {
  require_shape(x.rows_ == y.rows_ && x.cols_ == y.cols_, "add");
  DenseMat out = x;
  for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] += y.data_[k];
  return out;
}

DenseMat operator-(const DenseMat& x, const DenseMat& y) {
  require_shape(x.rows_ == y.rows_ && x.cols_ == y.cols_, "sub");
  DenseMat out = x;
  for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] -= y.data_[k];
  return out;
}

DenseMat operator*(const DenseMat& x, const DenseMat& y) {
  require_shape(x.cols_ == y.rows_, "mul");
  DenseMat out(x.rows_, y.cols_);
  for (std::size_t i = 0; i < x.rows_; ++i) {
    for (std::size_t k = 0; k < x.cols_; ++k) {
      const QSqrt& a = x(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < y.cols_; ++j) {
        if (!y(k, j).is_zero()) out(i, j).add_product(a, y(k, j));
      }
    }
  }
  return out;
}

std::vector<QSqrt> DenseMat::apply(std::span<const QSqrt> v) const {
  require_shape(v.size() == cols_, "apply");
  std::vector<QSqrt> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (!v[c].is_zero() && !(*this)(r, c).is_zero()) out[r].add_product((*this)(r, c), v[c]);
    }
  }
  return out;
}

std::vector<std::vector<QSqrt>> dense_kernel_basis(const DenseMat& m) {
  const Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::vector<QSqrt>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<QSqrt> x(m.cols());
    x[f] = QSqrt(1);
    for (std::size_t k = 0; k < e.pivots.size(); ++k) x[e.pivots[k]] = -e.m(k, f);
    for (const auto& v : x) {
      if (v.is_zero()) continue;
      if (v.sign() < 0) {
        for (auto& w : x) w = -w;
      }
      break;
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

std::size_t dense_rank(const DenseMat& m) { return rref(m).pivots.size(); }

DenseMat dense_inverse(const DenseMat& m) {
  require_shape(m.rows() == m.cols(), "inverse");
  const std::size_t n = m.rows();
  DenseMat a = m;
  DenseMat inv = DenseMat::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c).is_zero()) ++p;
    if (p == n) throw std::domain_error("singular matrix");
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    }
    const QSqrt pinv = a(c, c).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      if (!a(c, j).is_zero()) a(c, j) *= pinv;
      if (!inv(c, j).is_zero()) inv(c, j) *= pinv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c).is_zero()) continue;
      const QSqrt f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        if (!a(c, j).is_zero()) a(i, j) -= f * a(c, j);
        if (!inv(c, j).is_zero()) inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

bool linear_independence(const std::vector<std::vector<std::pair<std::size_t, QSqrt>>>& vecs) {
  using Vec = std::map<std::size_t, QSqrt>;
  std::map<std::size_t, Vec> basis;  // keyed by leading index
  for (const auto& in : vecs) {
    Vec v(in.begin(), in.end());
    for (auto it = v.begin(); it != v.end();) {
      if (it->second.is_zero()) {
        it = v.erase(it);
      } else {
        ++it;
      }
    }
    while (!v.empty()) {
      auto b = basis.find(v.begin()->first);
      if (b == basis.end()) break;
      const QSqrt f = v.begin()->second / b->second.begin()->second;
      for (const auto& [k, val] : b->second) {
        QSqrt& slot = v[k];
        slot -= f * val;
        if (slot.is_zero()) v.erase(k);
      }
    }
    if (v.empty()) return false;
    const std::size_t lead = v.begin()->first;
    basis.emplace(lead, std::move(v));
  }
  return true;
}

bool linear_independence(const std::vector<SparseMat>& mats) {
  std::vector<std::vector<std::pair<std::size_t, QSqrt>>> vecs;
  for (const auto& m : mats) {
    require_shape(m.rows() == mats[0].rows() && m.cols() == mats[0].cols(), "linear_independence");
    std::vector<std::pair<std::size_t, QSqrt>> v;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      auto cs = m.row_cols(r);
      auto vs = m.row_vals(r);
      for (std::size_t k = 0; k < cs.size(); ++k) v.emplace_back(r * m.cols() + cs[k], vs[k]);
    }
    vecs.push_back(std::move(v));
  }
  return linear_independence(vecs);
}

}  // namespace attposet::exact
