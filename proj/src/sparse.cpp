#include "attposet/sparse.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace attposet::exact {

namespace {

void require_shape(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("shape mismatch in ") + what);
}

}  // namespace

SparseMat::SparseMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), ptr_(rows + 1, 0) {
  if (cols > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("too many columns");
}

SparseMat::RowBuilder::RowBuilder(std::size_t rows, std::size_t cols) : m_(rows, cols) { m_.ptr_.assign(1, 0); }

void SparseMat::RowBuilder::add(std::uint32_t col, QSqrt value) {
  if (value.is_zero()) return;
  m_.cols_idx_.push_back(col);
  m_.vals_.push_back(std::move(value));
}

void SparseMat::RowBuilder::end_row() {
  m_.ptr_.push_back(m_.vals_.size());
  ++current_;
}

SparseMat SparseMat::RowBuilder::finish() {
  while (current_ < m_.rows_) end_row();
  return std::move(m_);
}

SparseMat SparseMat::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
  RowBuilder b(rows, cols);
  std::size_t row = 0, k = 0;
  while (k < triplets.size()) {
    const auto r = triplets[k].row;
    if (r >= rows || triplets[k].col >= cols) throw std::out_of_range("triplet outside matrix");
    while (row < r) {
      b.end_row();
      ++row;
    }
    QSqrt sum = triplets[k].value;
    const auto c = triplets[k].col;
    ++k;
    while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c) sum += triplets[k++].value;
    b.add(c, std::move(sum));
  }
  return b.finish();
}

SparseMat SparseMat::identity(std::size_t n) {
  RowBuilder b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    b.add(static_cast<std::uint32_t>(i), QSqrt(1));
    b.end_row();
  }
  return b.finish();
}

SparseMat SparseMat::diagonal(const std::vector<QSqrt>& diag) {
  RowBuilder b(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    b.add(static_cast<std::uint32_t>(i), diag[i]);
    b.end_row();
  }
  return b.finish();
}

QSqrt SparseMat::at(std::size_t r, std::size_t c) const {
  auto cs = row_cols(r);
  auto it = std::lower_bound(cs.begin(), cs.end(), static_cast<std::uint32_t>(c));
  if (it == cs.end() || *it != c) return QSqrt();
  return vals_[ptr_[r] + static_cast<std::size_t>(it - cs.begin())];
}

SparseMat SparseMat::transpose() const {
  SparseMat t(cols_, rows_);
  std::vector<std::size_t> count(cols_ + 1, 0);
  for (auto c : cols_idx_) ++count[c + 1];
  for (std::size_t c = 0; c < cols_; ++c) count[c + 1] += count[c];
  t.ptr_ = count;
  t.cols_idx_.resize(nnz());
  t.vals_.resize(nnz());
  std::vector<std::size_t> next(count.begin(), count.end() - 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = ptr_[r]; k < ptr_[r + 1]; ++k) {
      const std::size_t pos = next[cols_idx_[k]]++;
      t.cols_idx_[pos] = static_cast<std::uint32_t>(r);
      t.vals_[pos] = vals_[k];
    }
  }
  return t;
}

SparseMat SparseMat::scaled(const QSqrt& s) const {
  if (s.is_zero()) return SparseMat(rows_, cols_);
  SparseMat out = *this;
  if (s.is_one()) return out;
  for (auto& v : out.vals_) v = v * s;
  return out;
}

SparseMat SparseMat::column_masked(const std::vector<bool>& keep) const {
  require_shape(keep.size() == cols_, "column_masked");
  RowBuilder b(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = ptr_[r]; k < ptr_[r + 1]; ++k) {
      if (keep[cols_idx_[k]]) b.add(cols_idx_[k], vals_[k]);
    }
    b.end_row();
  }
  return b.finish();
}

static SparseMat combine(const SparseMat& x, const SparseMat& y, bool subtract) {
  require_shape(x.rows() == y.rows() && x.cols() == y.cols(), "add");
  SparseMat::RowBuilder b(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto xc = x.row_cols(r), yc = y.row_cols(r);
    auto xv = x.row_vals(r), yv = y.row_vals(r);
    std::size_t i = 0, j = 0;
    while (i < xc.size() || j < yc.size()) {
      if (j == yc.size() || (i < xc.size() && xc[i] < yc[j])) {
        b.add(xc[i], xv[i]);
        ++i;
      } else if (i == xc.size() || yc[j] < xc[i]) {
        b.add(yc[j], subtract ? -yv[j] : yv[j]);
        ++j;
      } else {
        b.add(xc[i], subtract ? xv[i] - yv[j] : xv[i] + yv[j]);
        ++i;
        ++j;
      }
    }
    b.end_row();
  }
  return b.finish();
}

SparseMat operator+(const SparseMat& x, const SparseMat& y) { return combine(x, y, false); }

SparseMat operator-(const SparseMat& x, const SparseMat& y) { return combine(x, y, true); }

SparseMat operator*(const SparseMat& x, const SparseMat& y) {
  require_shape(x.cols() == y.rows(), "mul");
  SparseMat::RowBuilder b(x.rows(), y.cols());
  std::vector<QSqrt> acc(y.cols());
  std::vector<std::size_t> mark(y.cols(), std::numeric_limits<std::size_t>::max());
  std::vector<std::uint32_t> touched;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    touched.clear();
    auto xc = x.row_cols(r);
    auto xv = x.row_vals(r);
    for (std::size_t k = 0; k < xc.size(); ++k) {
      auto yc = y.row_cols(xc[k]);
      auto yv = y.row_vals(xc[k]);
      for (std::size_t t = 0; t < yc.size(); ++t) {
        const auto c = yc[t];
        if (mark[c] != r) {
          mark[c] = r;
          acc[c] = xv[k] * yv[t];
          touched.push_back(c);
        } else {
          acc[c].add_product(xv[k], yv[t]);
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto c : touched) b.add(c, std::move(acc[c]));
    b.end_row();
  }
  return b.finish();
}

bool operator==(const SparseMat& x, const SparseMat& y) {
  return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.ptr_ == y.ptr_ && x.cols_idx_ == y.cols_idx_ &&
         x.vals_ == y.vals_;
}

std::vector<QSqrt> SparseMat::apply(std::span<const QSqrt> v) const {
  require_shape(v.size() == cols_, "apply");
  std::vector<QSqrt> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    QSqrt s;
    for (std::size_t k = ptr_[r]; k < ptr_[r + 1]; ++k) {
      if (!v[cols_idx_[k]].is_zero()) s.add_product(vals_[k], v[cols_idx_[k]]);
    }
    out[r] = std::move(s);
  }
  return out;
}

std::tuple<std::size_t, std::size_t, QSqrt> SparseMat::first_entry() const {
  for (std::size_t r = 0; r < rows_; ++r) {
    if (ptr_[r + 1] > ptr_[r]) return {r, cols_idx_[ptr_[r]], vals_[ptr_[r]]};
  }
  throw std::logic_error("first_entry of zero matrix");
}

SparseMat scale(const SparseMat& m, const QSqrt& s) { return m.scaled(s); }
SparseMat mul(const SparseMat& x, const SparseMat& y) { return x * y; }
SparseMat add(const SparseMat& x, const SparseMat& y) { return x + y; }

}  // namespace attposet::exact
