#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace attposet::gfq {

bool is_prime(std::uint32_t n);

// Residue class modulo a prime p.
class FieldScalar {
 public:
  FieldScalar(std::uint32_t value, std::uint32_t modulus);

  std::uint32_t value() const { return value_; }
  std::uint32_t modulus() const { return modulus_; }

  FieldScalar operator+(const FieldScalar& o) const;
  FieldScalar operator-(const FieldScalar& o) const;
  FieldScalar operator*(const FieldScalar& o) const;
  FieldScalar operator-() const;
  FieldScalar inverse() const;
  bool operator==(const FieldScalar& o) const = default;

 private:
  std::uint32_t value_;
  std::uint32_t modulus_;
};

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p);

// Dense row-major matrix over F_p. Entries are stored as reduced residues.
class GFMatrix {
 public:
  GFMatrix() = default;
  GFMatrix(std::size_t rows, std::size_t cols, std::uint32_t p);
  static GFMatrix from_rows(std::uint32_t p, std::initializer_list<std::initializer_list<std::uint32_t>> rows);
  static GFMatrix from_rows(std::uint32_t p, std::size_t cols, const std::vector<std::vector<std::uint32_t>>& rows);
  static GFMatrix identity(std::size_t n, std::uint32_t p);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t modulus() const { return p_; }

  std::uint32_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::uint32_t v) { data_[r * cols_ + c] = v % p_; }
  FieldScalar scalar(std::size_t r, std::size_t c) const { return FieldScalar(at(r, c), p_); }

  std::span<const std::uint8_t> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<std::uint8_t> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  const std::vector<std::uint8_t>& data() const { return data_; }

  GFMatrix stacked(const GFMatrix& below) const;
  bool operator==(const GFMatrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint32_t p_ = 2;
  std::vector<std::uint8_t> data_;
};

struct RrefResult {
  GFMatrix reduced;
  std::vector<std::size_t> pivots;  // 0-based columns
  std::size_t rank = 0;

  std::vector<std::size_t> pivots_one_based() const;
};

RrefResult rref(const GFMatrix& m);

bool row_space_contains(const GFMatrix& basis, std::span<const std::uint8_t> v);
bool row_space_contains(const GFMatrix& basis, std::span<const FieldScalar> v);

std::size_t stack_rank(const GFMatrix& a, const GFMatrix& b);

}  // namespace attposet::gfq
