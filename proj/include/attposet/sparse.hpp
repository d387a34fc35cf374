#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

#include "attposet/qsqrt.hpp"

namespace attposet::exact {

// Compressed sparse rows. Stored values are nonzero and columns strictly
// increase inside each row.
class SparseMat {
 public:
  struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    QSqrt value;
  };

  SparseMat() = default;
  SparseMat(std::size_t rows, std::size_t cols);

  // Duplicate (row, col) pairs are summed; zero sums are dropped.
  static SparseMat from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);
  static SparseMat identity(std::size_t n);
  static SparseMat diagonal(const std::vector<QSqrt>& diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return vals_.size(); }

  std::span<const std::uint32_t> row_cols(std::size_t r) const {
    return {cols_idx_.data() + ptr_[r], ptr_[r + 1] - ptr_[r]};
  }
  std::span<const QSqrt> row_vals(std::size_t r) const { return {vals_.data() + ptr_[r], ptr_[r + 1] - ptr_[r]}; }
  QSqrt at(std::size_t r, std::size_t c) const;

  bool equals_zero() const { return vals_.empty(); }
  SparseMat transpose() const;
  SparseMat scaled(const QSqrt& s) const;
  // Keeps only the columns with keep[c] true.
  SparseMat column_masked(const std::vector<bool>& keep) const;

  friend SparseMat operator+(const SparseMat& x, const SparseMat& y);
  friend SparseMat operator-(const SparseMat& x, const SparseMat& y);
  friend SparseMat operator*(const SparseMat& x, const SparseMat& y);
  friend bool operator==(const SparseMat& x, const SparseMat& y);

  std::vector<QSqrt> apply(std::span<const QSqrt> v) const;

  // First stored entry, if any, as (row, col, value).
  std::tuple<std::size_t, std::size_t, QSqrt> first_entry() const;

  // Builder for row-ordered assembly: call push_row in order.
  class RowBuilder;

 private:
  friend class RowBuilder;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> ptr_{0};
  std::vector<std::uint32_t> cols_idx_;
  std::vector<QSqrt> vals_;
};

class SparseMat::RowBuilder {
 public:
  RowBuilder(std::size_t rows, std::size_t cols);
  // Entries must have strictly increasing columns; zeros are skipped.
  void add(std::uint32_t col, QSqrt value);
  void end_row();
  SparseMat finish();

 private:
  SparseMat m_;
  std::size_t current_ = 0;
};

SparseMat scale(const SparseMat& m, const QSqrt& s);
SparseMat mul(const SparseMat& x, const SparseMat& y);
SparseMat add(const SparseMat& x, const SparseMat& y);

}  // namespace attposet::exact
