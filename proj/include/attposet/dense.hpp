#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "attposet/qsqrt.hpp"
#include "attposet/sparse.hpp"

namespace attposet::exact {

class DenseMat {
 public:
  DenseMat() = default;
  DenseMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static DenseMat identity(std::size_t n);
  static DenseMat diagonal(const std::vector<QSqrt>& diag);
  static DenseMat from_sparse(const SparseMat& m);
  static DenseMat from_rows(const std::vector<std::vector<QSqrt>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  QSqrt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const QSqrt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_zero() const;
  DenseMat transpose() const;
  DenseMat scaled(const QSqrt& s) const;
  SparseMat to_sparse() const;
  // Vertical concatenation.
  DenseMat stacked(const DenseMat& below) const;

  friend DenseMat operator+(const DenseMat& x, const DenseMat& y);
  friend DenseMat operator-(const DenseMat& x, const DenseMat& y);
  friend DenseMat operator*(const DenseMat& x, const DenseMat& y);
  friend bool operator==(const DenseMat& x, const DenseMat& y) = default;

  std::vector<QSqrt> apply(std::span<const QSqrt> v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<QSqrt> data_;
};

// Right kernel read off the reduced row echelon form. Each basis vector is ±1 in its
// own free column, 0 in the other free columns, and its first nonzero entry is
// positive.
std::vector<std::vector<QSqrt>> dense_kernel_basis(const DenseMat& m);
std::size_t dense_rank(const DenseMat& m);
// Throws std::domain_error when m is singular.
DenseMat dense_inverse(const DenseMat& m);

// Flattens each matrix and tests the family for linear independence.
bool linear_independence(const std::vector<SparseMat>& mats);
// Same test on sparse vectors given as sorted (index, value) lists.
bool linear_independence(const std::vector<std::vector<std::pair<std::size_t, QSqrt>>>& vecs);

}  // namespace attposet::exact
