#pragma once

#include "json.hpp"

#include <optional>
#include <string>

#include "attposet/rational.hpp"

namespace attposet::exact {

// Element a + b·s of Q(s) with s² = q. A radicand of 0 means "not yet tied to a
// field"; such values always have b = 0 and combine with any radicand.
class QSqrt {
 public:
  QSqrt() = default;
  QSqrt(int v) : a_(v) {}
  QSqrt(long long v) : a_(v) {}
  QSqrt(Rational a) : a_(std::move(a)) {}
  QSqrt(Rational a, Rational b, int radicand);

  // s itself.
  static QSqrt sqrt_q(int q);
  // q^{k/2}.
  static QSqrt q_power(int q, int k);
  // [n]_τ = (τⁿ − τ⁻ⁿ)/(τ − τ⁻¹) with τ = s.
  static QSqrt bracket(int q, int n);

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  int radicand() const { return q_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_rational() const { return b_.is_zero(); }
  bool is_one() const { return a_.is_one() && b_.is_zero(); }

  // Exact sign of the real number a + b·√q.
  int sign() const;
  QSqrt conj() const;
  Rational norm() const;
  QSqrt inverse() const;
  double to_double() const;
  std::optional<QSqrt> sqrt() const;

  QSqrt operator-() const;
  friend QSqrt operator+(const QSqrt& x, const QSqrt& y);
  friend QSqrt operator-(const QSqrt& x, const QSqrt& y);
  friend QSqrt operator*(const QSqrt& x, const QSqrt& y);
  friend QSqrt operator/(const QSqrt& x, const QSqrt& y);
  QSqrt& operator+=(const QSqrt& y);
  QSqrt& operator-=(const QSqrt& y);
  QSqrt& operator*=(const QSqrt& y) { return *this = *this * y; }
  QSqrt& operator/=(const QSqrt& y) { return *this = *this / y; }
  // *this += x*y without building the intermediate product when b parts vanish.
  void add_product(const QSqrt& x, const QSqrt& y);

  friend bool operator==(const QSqrt& x, const QSqrt& y);

  std::string str() const;
  nlohmann::ordered_json to_json() const;
  static QSqrt from_json(const nlohmann::json& j, int radicand);

 private:
  static int join(int p, int q);

  Rational a_;
  Rational b_;
  int q_ = 0;
};

QSqrt pow(const QSqrt& x, int exponent);

}  // namespace attposet::exact
