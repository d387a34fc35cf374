#include "attposet/poly.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace attposet::algebra {

std::string transpose_name(const std::string& name) {
  if (name.size() > 2 && name.compare(name.size() - 2, 2, "^t") == 0) return name.substr(0, name.size() - 2);
  return name + "^t";
}

Poly::Poly(const QSqrt& scalar) {
  if (!scalar.is_zero()) terms_.push_back({scalar, {}});
}

Poly Poly::atom(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("empty atom name");
  Poly p;
  p.terms_.push_back({QSqrt(1), {name}});
  return p;
}

void Poly::normalize() {
  std::stable_sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.word < b.word; });
  std::vector<Term> out;
  for (auto& t : terms_) {
    if (!out.empty() && out.back().word == t.word) {
      out.back().coef += t.coef;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const Term& t) { return t.coef.is_zero(); });
  terms_ = std::move(out);
}

std::size_t Poly::degree() const {
  std::size_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.word.size());
  return d;
}

std::vector<std::string> Poly::atoms() const {
  std::set<std::string> s;
  for (const auto& t : terms_) s.insert(t.word.begin(), t.word.end());
  return {s.begin(), s.end()};
}

Poly Poly::transpose() const {
  Poly p;
  for (const auto& t : terms_) {
    Word w;
    for (auto it = t.word.rbegin(); it != t.word.rend(); ++it) w.push_back(transpose_name(*it));
    p.terms_.push_back({t.coef, std::move(w)});
  }
  p.normalize();
  return p;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    if (k) s += " + ";
    s += "(" + terms_[k].coef.str() + ")";
    if (terms_[k].word.empty()) s += "I";
    for (const auto& a : terms_[k].word) s += "·" + a;
  }
  return s;
}

Poly operator+(const Poly& x, const Poly& y) {
  Poly p = x;
  p.terms_.insert(p.terms_.end(), y.terms_.begin(), y.terms_.end());
  p.normalize();
  return p;
}

Poly operator-(const Poly& x, const Poly& y) { return x + (-y); }

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& t : p.terms_) t.coef = -t.coef;
  return p;
}

Poly operator*(const Poly& x, const Poly& y) {
  Poly p;
  for (const auto& a : x.terms_) {
    for (const auto& b : y.terms_) {
      Word w = a.word;
      w.insert(w.end(), b.word.begin(), b.word.end());
      p.terms_.push_back({a.coef * b.coef, std::move(w)});
    }
  }
  p.normalize();
  return p;
}

Poly operator*(const QSqrt& c, const Poly& x) {
  Poly p = x;
  for (auto& t : p.terms_) t.coef = c * t.coef;
  p.normalize();
  return p;
}

bool operator==(const Poly& x, const Poly& y) {
  if (x.terms_.size() != y.terms_.size()) return false;
  for (std::size_t k = 0; k < x.terms_.size(); ++k) {
    if (x.terms_[k].word != y.terms_[k].word || !(x.terms_[k].coef == y.terms_[k].coef)) return false;
  }
  return true;
}

Poly pow(const Poly& x, int k) {
  if (k < 0) throw std::invalid_argument("negative power of a polynomial");
  Poly r(1);
  for (int i = 0; i < k; ++i) r = r * x;
  return r;
}

Poly commutator(const Poly& x, const Poly& y) { return x * y - y * x; }

}  // namespace attposet::algebra
