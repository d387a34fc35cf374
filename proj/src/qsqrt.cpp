#include "attposet/qsqrt.hpp"

#include <cmath>
#include <stdexcept>

namespace attposet::exact {

namespace {

std::optional<Rational> rational_sqrt(const Rational& x) {
  if (x.sign() < 0) return std::nullopt;
  if (x.is_zero()) return Rational();
  mpz_class n = x.numerator(), d = x.denominator();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return Rational(mpq_class(rn, rd));
}

}  // namespace

QSqrt::QSqrt(Rational a, Rational b, int radicand) : a_(std::move(a)), b_(std::move(b)), q_(radicand) {
  if (q_ < 0) throw std::invalid_argument("negative radicand");
  if (q_ == 0 && !b_.is_zero()) throw std::invalid_argument("irrational part without radicand");
}

int QSqrt::join(int p, int q) {
  if (p == 0) return q;
  if (q == 0 || p == q) return p;
  throw std::invalid_argument("mixing Q(sqrt " + std::to_string(p) + ") with Q(sqrt " + std::to_string(q) + ")");
}

QSqrt QSqrt::sqrt_q(int q) { return QSqrt(Rational(0), Rational(1), q); }

QSqrt QSqrt::q_power(int q, int k) {
  // k = 2m or k = 2m + 1 with floor division, so q^{k/2} = q^m or q^m·s.
  const int m = k >= 0 ? k / 2 : -((-k + 1) / 2);
  Rational qm = Rational::pow(Rational(q), m);
  if (k - 2 * m == 0) return QSqrt(qm, Rational(0), q);
  return QSqrt(Rational(0), qm, q);
}

QSqrt QSqrt::bracket(int q, int n) {
  const QSqrt tau = sqrt_q(q);
  const QSqrt tinv = tau.inverse();
  return (pow(tau, n) - pow(tinv, n)) / (tau - tinv);
}

int QSqrt::sign() const {
  const int sa = a_.sign(), sb = b_.sign();
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  return a_ * a_ > Rational(q_) * b_ * b_ ? sa : sb;
}

QSqrt QSqrt::conj() const { return QSqrt(a_, -b_, q_); }

Rational QSqrt::norm() const {
  if (b_.is_zero()) return a_ * a_;
  return a_ * a_ - Rational(q_) * b_ * b_;
}

QSqrt QSqrt::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero");
  if (b_.is_zero()) return QSqrt(a_.inverse(), Rational(0), q_);
  const Rational n = norm();
  if (n.is_zero()) throw std::domain_error("zero divisor in Q(s): radicand is a square");
  const Rational ni = n.inverse();
  return QSqrt(a_ * ni, -b_ * ni, q_);
}

double QSqrt::to_double() const {
  if (b_.is_zero()) return a_.to_double();
  return a_.to_double() + b_.to_double() * std::sqrt(static_cast<double>(q_));
}

std::optional<QSqrt> QSqrt::sqrt() const {
  if (b_.is_zero()) {
    if (auto r = rational_sqrt(a_)) return QSqrt(*r, Rational(0), q_);
    if (q_ == 0) return std::nullopt;
    if (auto r = rational_sqrt(a_ / Rational(q_))) return QSqrt(Rational(0), *r, q_);
    return std::nullopt;
  }
  auto root_norm = rational_sqrt(norm());
  if (!root_norm) return std::nullopt;
  for (const Rational& c2 : {(a_ + *root_norm) / Rational(2), (a_ - *root_norm) / Rational(2)}) {
    auto c = rational_sqrt(c2);
    if (!c || c->is_zero()) continue;
    const Rational d = b_ / (Rational(2) * *c);
    QSqrt cand(*c, d, q_);
    if (cand * cand == *this) return cand;
  }
  return std::nullopt;
}

QSqrt QSqrt::operator-() const {
  QSqrt r;
  r.a_ = -a_;
  if (!b_.is_zero()) r.b_ = -b_;
  r.q_ = q_;
  return r;
}

QSqrt operator+(const QSqrt& x, const QSqrt& y) {
  QSqrt r = x;
  r += y;
  return r;
}

QSqrt operator-(const QSqrt& x, const QSqrt& y) {
  QSqrt r = x;
  r -= y;
  return r;
}

QSqrt& QSqrt::operator+=(const QSqrt& y) {
  q_ = join(q_, y.q_);
  a_ += y.a_;
  if (!y.b_.is_zero()) b_ += y.b_;
  return *this;
}

QSqrt& QSqrt::operator-=(const QSqrt& y) {
  q_ = join(q_, y.q_);
  a_ -= y.a_;
  if (!y.b_.is_zero()) b_ -= y.b_;
  return *this;
}

QSqrt operator*(const QSqrt& x, const QSqrt& y) {
  QSqrt r;
  r.q_ = QSqrt::join(x.q_, y.q_);
  const bool xb = !x.b_.is_zero(), yb = !y.b_.is_zero();
  if (!xb && !yb) {
    r.a_ = x.a_ * y.a_;
  } else if (!xb) {
    r.a_ = x.a_ * y.a_;
    r.b_ = x.a_ * y.b_;
  } else if (!yb) {
    r.a_ = x.a_ * y.a_;
    r.b_ = x.b_ * y.a_;
  } else {
    r.a_ = x.a_ * y.a_ + Rational(r.q_) * x.b_ * y.b_;
    r.b_ = x.a_ * y.b_ + x.b_ * y.a_;
  }
  return r;
}

void QSqrt::add_product(const QSqrt& x, const QSqrt& y) {
  if (x.b_.is_zero() && y.b_.is_zero()) {
    q_ = join(q_, join(x.q_, y.q_));
    a_ += x.a_ * y.a_;
    return;
  }
  *this += x * y;
}

QSqrt operator/(const QSqrt& x, const QSqrt& y) {
  if (y.b_.is_zero()) {
    if (y.a_.is_zero()) throw std::domain_error("division by zero");
    QSqrt r;
    r.q_ = QSqrt::join(x.q_, y.q_);
    r.a_ = x.a_ / y.a_;
    if (!x.b_.is_zero()) r.b_ = x.b_ / y.a_;
    return r;
  }
  return x * y.inverse();
}

bool operator==(const QSqrt& x, const QSqrt& y) {
  if (!(x.a_ == y.a_) || !(x.b_ == y.b_)) return false;
  return x.b_.is_zero() || x.q_ == y.q_;
}

std::string QSqrt::str() const {
  if (b_.is_zero()) return a_.str();
  return a_.str() + " + " + b_.str() + "*sqrt(" + std::to_string(q_) + ")";
}

nlohmann::ordered_json QSqrt::to_json() const {
  nlohmann::ordered_json j;
  j["a"] = a_.str();
  j["b"] = b_.str();
  return j;
}

QSqrt QSqrt::from_json(const nlohmann::json& j, int radicand) {
  if (j.is_string()) return QSqrt(Rational::parse(j.get<std::string>()), Rational(0), radicand);
  if (j.is_number_integer()) return QSqrt(Rational(j.get<long long>()), Rational(0), radicand);
  if (j.is_object() && j.contains("a")) {
    Rational a = Rational::parse(j.at("a").get<std::string>());
    Rational b = j.contains("b") ? Rational::parse(j.at("b").get<std::string>()) : Rational(0);
    return QSqrt(a, b, radicand);
  }
  throw std::invalid_argument("expected a rational string or {\"a\",\"b\"} object");
}

QSqrt pow(const QSqrt& x, int exponent) {
  if (exponent < 0) return pow(x.inverse(), -exponent);
  QSqrt result(1), b = x;
  for (int e = exponent; e; e >>= 1) {
    if (e & 1) result *= b;
    if (e > 1) b *= b;
  }
  return result;
}

}  // namespace attposet::exact
