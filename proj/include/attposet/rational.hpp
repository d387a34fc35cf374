#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace attposet::exact {

// Exact rational number. Values whose reduced numerator and denominator fit in
// int64 are stored inline; anything larger lives in a heap-allocated mpq. The
// representation is canonical: a value that fits inline is never stored big.
class Rational {
 public:
  Rational() noexcept : num_(0), den_(1) {}
  Rational(int n) noexcept : num_(n), den_(1) {}
  Rational(long n);
  Rational(long long n);
  Rational(long long n, long long d);
  explicit Rational(const mpq_class& q);
  explicit Rational(const mpz_class& z);

  Rational(const Rational& o);
  Rational(Rational&& o) noexcept;
  Rational& operator=(const Rational& o);
  Rational& operator=(Rational&& o) noexcept;
  ~Rational();

  // Accepts "p/q" or "p", optional leading sign on p.
  static Rational parse(std::string_view text);
  static Rational pow(const Rational& base, int exponent);

  // Always "p/q", with q = 1 written out.
  std::string str() const;
  mpq_class to_mpq() const;
  mpz_class numerator() const;
  mpz_class denominator() const;
  double to_double() const;

  bool is_zero() const { return den_ != 0 && num_ == 0; }
  bool is_one() const { return den_ == 1 && num_ == 1; }
  bool is_integer() const;
  bool is_small() const { return den_ != 0; }
  int sign() const;
  // Inline parts; only valid when is_small().
  std::int64_t small_num() const { return num_; }
  std::int64_t small_den() const { return den_; }

  Rational inverse() const;
  Rational abs() const { return sign() < 0 ? -*this : *this; }

  Rational operator-() const;
  friend Rational operator+(const Rational& x, const Rational& y);
  friend Rational operator-(const Rational& x, const Rational& y);
  friend Rational operator*(const Rational& x, const Rational& y);
  friend Rational operator/(const Rational& x, const Rational& y);
  Rational& operator+=(const Rational& y) { return *this = *this + y; }
  Rational& operator-=(const Rational& y) { return *this = *this - y; }
  Rational& operator*=(const Rational& y) { return *this = *this * y; }
  Rational& operator/=(const Rational& y) { return *this = *this / y; }

  friend bool operator==(const Rational& x, const Rational& y);
  friend std::strong_ordering operator<=>(const Rational& x, const Rational& y);

 private:
  struct BigTag {};
  Rational(BigTag, mpq_class* big) noexcept : big_(big), den_(0) {}
  static Rational from_mpq(mpq_class&& q);
  static Rational from_i128(__int128 num, __int128 den);

  union {
    std::int64_t num_;
    mpq_class* big_;
  };
  std::int64_t den_;  // 0 marks the big representation
};

mpz_class lcm(const mpz_class& a, const mpz_class& b);

}  // namespace attposet::exact
