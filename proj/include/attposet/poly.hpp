#pragma once

#include <string>
#include <vector>

#include "attposet/qsqrt.hpp"

namespace attposet::algebra {

using exact::QSqrt;

using Word = std::vector<std::string>;

struct Term {
  QSqrt coef;
  Word word;  // empty word is the identity
};

// Noncommutative polynomial in named atoms. Terms are kept merged, nonzero and
// sorted by word.
class Poly {
 public:
  Poly() = default;
  Poly(const QSqrt& scalar);
  Poly(int scalar) : Poly(QSqrt(scalar)) {}
  static Poly atom(const std::string& name);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t degree() const;
  std::vector<std::string> atoms() const;

  // Reverses every word and maps X to X^t (and X^t back to X).
  Poly transpose() const;
  std::string str() const;

  friend Poly operator+(const Poly& x, const Poly& y);
  friend Poly operator-(const Poly& x, const Poly& y);
  friend Poly operator*(const Poly& x, const Poly& y);
  friend Poly operator*(const QSqrt& c, const Poly& x);
  Poly operator-() const;
  Poly& operator+=(const Poly& y) { return *this = *this + y; }
  Poly& operator-=(const Poly& y) { return *this = *this - y; }
  friend bool operator==(const Poly& x, const Poly& y);

 private:
  void normalize();
  std::vector<Term> terms_;
};

Poly pow(const Poly& x, int k);
Poly commutator(const Poly& x, const Poly& y);
std::string transpose_name(const std::string& name);

}  // namespace attposet::algebra
