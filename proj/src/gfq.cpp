#include "attposet/gfq.hpp"

#include <string>

namespace attposet::gfq {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  a %= p;
  if (a == 0) throw std::domain_error("inverse of zero in F_p");
  std::uint64_t result = 1, base = a;
  for (std::uint32_t e = p - 2; e; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

FieldScalar::FieldScalar(std::uint32_t value, std::uint32_t modulus) : value_(0), modulus_(modulus) {
  if (!is_prime(modulus)) throw std::invalid_argument("modulus " + std::to_string(modulus) + " is not prime");
  value_ = value % modulus;
}

FieldScalar FieldScalar::operator+(const FieldScalar& o) const {
  if (o.modulus_ != modulus_) throw std::invalid_argument("modulus mismatch");
  return {(value_ + o.value_) % modulus_, modulus_};
}

FieldScalar FieldScalar::operator-(const FieldScalar& o) const {
  if (o.modulus_ != modulus_) throw std::invalid_argument("modulus mismatch");
  return {(value_ + modulus_ - o.value_) % modulus_, modulus_};
}

FieldScalar FieldScalar::operator*(const FieldScalar& o) const {
  if (o.modulus_ != modulus_) throw std::invalid_argument("modulus mismatch");
  return {static_cast<std::uint32_t>(std::uint64_t(value_) * o.value_ % modulus_), modulus_};
}

FieldScalar FieldScalar::operator-() const { return {(modulus_ - value_) % modulus_, modulus_}; }

FieldScalar FieldScalar::inverse() const { return {inverse_mod(value_, modulus_), modulus_}; }

GFMatrix::GFMatrix(std::size_t rows, std::size_t cols, std::uint32_t p)
    : rows_(rows), cols_(cols), p_(p), data_(rows * cols, 0) {
  if (!is_prime(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
  if (p > 255) throw std::invalid_argument("modulus too large for byte storage");
}

GFMatrix GFMatrix::from_rows(std::uint32_t p, std::initializer_list<std::initializer_list<std::uint32_t>> rows) {
  std::vector<std::vector<std::uint32_t>> v;
  for (const auto& r : rows) v.emplace_back(r);
  return from_rows(p, v.empty() ? 0 : v.front().size(), v);
}

GFMatrix GFMatrix::from_rows(std::uint32_t p, std::size_t cols, const std::vector<std::vector<std::uint32_t>>& rows) {
  GFMatrix m(rows.size(), cols, p);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

GFMatrix GFMatrix::identity(std::size_t n, std::uint32_t p) {
  GFMatrix m(n, n, p);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

GFMatrix GFMatrix::stacked(const GFMatrix& below) const {
  if (below.cols_ != cols_) throw std::invalid_argument("stack: width mismatch");
  if (below.p_ != p_) throw std::invalid_argument("stack: modulus mismatch");
  GFMatrix m(rows_ + below.rows_, cols_, p_);
  std::copy(data_.begin(), data_.end(), m.data_.begin());
  std::copy(below.data_.begin(), below.data_.end(), m.data_.begin() + data_.size());
  return m;
}

std::vector<std::size_t> RrefResult::pivots_one_based() const {
  std::vector<std::size_t> out;
  for (auto p : pivots) out.push_back(p + 1);
  return out;
}

RrefResult rref(const GFMatrix& m) {
  const std::uint32_t p = m.modulus();
  GFMatrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < a.cols() && lead < a.rows(); ++c) {
    std::size_t r = lead;
    while (r < a.rows() && a.at(r, c) == 0) ++r;
    if (r == a.rows()) continue;
    if (r != lead) {
      auto x = a.row(r), y = a.row(lead);
      std::swap_ranges(x.begin(), x.end(), y.begin());
    }
    const std::uint32_t inv = inverse_mod(a.at(lead, c), p);
    auto pr = a.row(lead);
    for (auto& e : pr) e = static_cast<std::uint8_t>(e * inv % p);
    for (std::size_t o = 0; o < a.rows(); ++o) {
      if (o == lead) continue;
      const std::uint32_t f = a.at(o, c);
      if (f == 0) continue;
      auto orow = a.row(o);
      for (std::size_t k = c; k < a.cols(); ++k) {
        orow[k] = static_cast<std::uint8_t>((orow[k] + p * p - f * pr[k]) % p);
      }
    }
    pivots.push_back(c);
    ++lead;
  }
  GFMatrix reduced(lead, a.cols(), p);
  for (std::size_t r = 0; r < lead; ++r) {
    auto src = a.row(r);
    std::copy(src.begin(), src.end(), reduced.row(r).begin());
  }
  return {std::move(reduced), std::move(pivots), lead};
}

bool row_space_contains(const GFMatrix& basis, std::span<const std::uint8_t> v) {
  if (v.size() != basis.cols()) throw std::invalid_argument("row_space_contains: dimension mismatch");
  const std::uint32_t p = basis.modulus();
  std::vector<std::uint32_t> w(v.begin(), v.end());
  for (std::size_t r = 0; r < basis.rows(); ++r) {
    std::size_t piv = 0;
    while (piv < basis.cols() && basis.at(r, piv) == 0) ++piv;
    if (piv == basis.cols()) continue;
    const std::uint32_t f = w[piv] % p;
    if (f == 0) continue;
    for (std::size_t c = 0; c < basis.cols(); ++c) w[c] = (w[c] + p * p - f * basis.at(r, c)) % p;
  }
  for (auto x : w) {
    if (x % p != 0) return false;
  }
  return true;
}

bool row_space_contains(const GFMatrix& basis, std::span<const FieldScalar> v) {
  std::vector<std::uint8_t> raw;
  raw.reserve(v.size());
  for (const auto& s : v) {
    if (s.modulus() != basis.modulus()) throw std::invalid_argument("row_space_contains: modulus mismatch");
    raw.push_back(static_cast<std::uint8_t>(s.value()));
  }
  return row_space_contains(basis, std::span<const std::uint8_t>(raw));
}

std::size_t stack_rank(const GFMatrix& a, const GFMatrix& b) { return rref(a.stacked(b)).rank; }

}  // namespace attposet::gfq
