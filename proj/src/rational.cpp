#include "attposet/rational.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace attposet::exact {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

bool fits(i128 v) { return v >= -i128(kMax) && v <= i128(kMax); }

u128 uabs(i128 v) { return v < 0 ? u128(-v) : u128(v); }

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    if (a <= std::numeric_limits<std::uint64_t>::max() && b <= std::numeric_limits<std::uint64_t>::max()) {
      return gcd_u64(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
    }
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class mpz_from_i128(i128 v) {
  const bool neg = v < 0;
  u128 u = uabs(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

bool small_fit(const mpz_class& z) {
  return mpz_fits_slong_p(z.get_mpz_t()) && z != mpz_class(std::numeric_limits<long>::min());
}

}  // namespace

Rational::Rational(long n) : Rational(static_cast<long long>(n)) {}

Rational::Rational(long long n) : num_(0), den_(1) {
  if (n == std::numeric_limits<long long>::min()) {
    *this = from_mpq(mpq_class(mpz_from_i128(n)));
  } else {
    num_ = n;
  }
}

Rational::Rational(long long n, long long d) : num_(0), den_(1) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  *this = from_i128(n, d);
}

Rational::Rational(const mpq_class& q) : num_(0), den_(1) {
  mpq_class c(q);
  c.canonicalize();
  *this = from_mpq(std::move(c));
}

Rational::Rational(const mpz_class& z) : num_(0), den_(1) { *this = from_mpq(mpq_class(z)); }

Rational::Rational(const Rational& o) : num_(0), den_(o.den_) {
  if (o.den_ == 0) {
    big_ = new mpq_class(*o.big_);
  } else {
    num_ = o.num_;
  }
}

Rational::Rational(Rational&& o) noexcept : num_(0), den_(o.den_) {
  if (o.den_ == 0) {
    big_ = o.big_;
    o.den_ = 1;
    o.num_ = 0;
  } else {
    num_ = o.num_;
  }
}

Rational& Rational::operator=(const Rational& o) {
  if (this == &o) return *this;
  if (o.den_ == 0) {
    if (den_ == 0) {
      *big_ = *o.big_;
    } else {
      big_ = new mpq_class(*o.big_);
      den_ = 0;
    }
  } else {
    if (den_ == 0) delete big_;
    num_ = o.num_;
    den_ = o.den_;
  }
  return *this;
}

Rational& Rational::operator=(Rational&& o) noexcept {
  if (this == &o) return *this;
  if (den_ == 0) delete big_;
  den_ = o.den_;
  if (o.den_ == 0) {
    big_ = o.big_;
    o.den_ = 1;
    o.num_ = 0;
  } else {
    num_ = o.num_;
  }
  return *this;
}

Rational::~Rational() {
  if (den_ == 0) delete big_;
}

Rational Rational::from_mpq(mpq_class&& q) {
  if (small_fit(q.get_num()) && small_fit(q.get_den())) {
    Rational r;
    r.num_ = q.get_num().get_si();
    r.den_ = q.get_den().get_si();
    return r;
  }
  return Rational(BigTag{}, new mpq_class(std::move(q)));
}

Rational Rational::from_i128(i128 num, i128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return Rational();
  u128 g = gcd_u128(uabs(num), u128(den));
  if (g > 1) {
    num /= i128(g);
    den /= i128(g);
  }
  if (fits(num) && fits(den)) {
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }
  mpq_class q(mpz_from_i128(num), mpz_from_i128(den));
  return Rational(BigTag{}, new mpq_class(std::move(q)));
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto valid_int = [](const std::string& t, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && i < t.size() && (t[i] == '-' || t[i] == '+')) ++i;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') return false;
    }
    return true;
  };
  auto slash = s.find('/');
  std::string n = s.substr(0, slash);
  std::string d = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(n, true) || !valid_int(d, false)) throw std::invalid_argument("malformed rational '" + s + "'");
  if (!n.empty() && n[0] == '+') n.erase(0, 1);
  mpz_class zn(n), zd(d);
  if (zd == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  return Rational(mpq_class(zn, zd));
}

Rational Rational::pow(const Rational& base, int exponent) {
  if (exponent < 0) return pow(base.inverse(), -exponent);
  Rational result(1), b = base;
  for (int e = exponent; e; e >>= 1) {
    if (e & 1) result *= b;
    if (e > 1) b *= b;
  }
  return result;
}

std::string Rational::str() const {
  if (den_ != 0) return std::to_string(num_) + "/" + std::to_string(den_);
  return big_->get_num().get_str() + "/" + big_->get_den().get_str();
}

mpq_class Rational::to_mpq() const {
  if (den_ == 0) return *big_;
  return mpq_class(mpz_from_i128(num_), mpz_from_i128(den_));
}

mpz_class Rational::numerator() const { return den_ == 0 ? mpz_class(big_->get_num()) : mpz_from_i128(num_); }

mpz_class Rational::denominator() const { return den_ == 0 ? mpz_class(big_->get_den()) : mpz_from_i128(den_); }

double Rational::to_double() const {
  if (den_ != 0) return static_cast<double>(num_) / static_cast<double>(den_);
  return big_->get_d();
}

bool Rational::is_integer() const { return den_ == 1; }

int Rational::sign() const {
  if (den_ != 0) return (num_ > 0) - (num_ < 0);
  return sgn(*big_);
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero");
  if (den_ != 0) return num_ < 0 ? from_i128(-i128(den_), -i128(num_)) : from_i128(den_, num_);
  mpq_class q = 1 / *big_;
  return from_mpq(std::move(q));
}

Rational Rational::operator-() const {
  if (den_ != 0) {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  return from_mpq(mpq_class(-*big_));
}

Rational operator+(const Rational& x, const Rational& y) {
  if (x.den_ != 0 && y.den_ != 0) {
    if (x.den_ == 1 && y.den_ == 1) {
      i128 s = i128(x.num_) + y.num_;
      if (fits(s)) return Rational(static_cast<long long>(s));
      return Rational::from_i128(s, 1);
    }
    const std::uint64_t g = gcd_u64(static_cast<std::uint64_t>(x.den_), static_cast<std::uint64_t>(y.den_));
    const i128 t = i128(x.num_) * (y.den_ / std::int64_t(g)) + i128(y.num_) * (x.den_ / std::int64_t(g));
    if (t == 0) return Rational();
    const i128 rem = t % i128(g);
    const std::uint64_t g2 = gcd_u64(static_cast<std::uint64_t>(rem < 0 ? -rem : rem), g);
    const i128 num = t / i128(g2);
    const i128 den = i128(x.den_ / std::int64_t(g)) * (y.den_ / std::int64_t(g2));
    if (fits(num) && fits(den)) {
      Rational r;
      r.num_ = static_cast<std::int64_t>(num);
      r.den_ = static_cast<std::int64_t>(den);
      return r;
    }
    return Rational::from_i128(num, den);
  }
  return Rational::from_mpq(mpq_class(x.to_mpq() + y.to_mpq()));
}

Rational operator-(const Rational& x, const Rational& y) { return x + (-y); }

Rational operator*(const Rational& x, const Rational& y) {
  if (x.den_ != 0 && y.den_ != 0) {
    if (x.num_ == 0 || y.num_ == 0) return Rational();
    if (x.den_ == 1 && y.den_ == 1) {
      i128 p = i128(x.num_) * y.num_;
      if (fits(p)) return Rational(static_cast<long long>(p));
      return Rational::from_i128(p, 1);
    }
    const std::uint64_t g1 = gcd_u64(static_cast<std::uint64_t>(x.num_ < 0 ? -x.num_ : x.num_),
                                     static_cast<std::uint64_t>(y.den_));
    const std::uint64_t g2 = gcd_u64(static_cast<std::uint64_t>(y.num_ < 0 ? -y.num_ : y.num_),
                                     static_cast<std::uint64_t>(x.den_));
    const i128 num = i128(x.num_ / std::int64_t(g1)) * (y.num_ / std::int64_t(g2));
    const i128 den = i128(x.den_ / std::int64_t(g2)) * (y.den_ / std::int64_t(g1));
    if (fits(num) && fits(den)) {
      Rational r;
      r.num_ = static_cast<std::int64_t>(num);
      r.den_ = static_cast<std::int64_t>(den);
      return r;
    }
    return Rational::from_i128(num, den);
  }
  return Rational::from_mpq(mpq_class(x.to_mpq() * y.to_mpq()));
}

Rational operator/(const Rational& x, const Rational& y) { return x * y.inverse(); }

bool operator==(const Rational& x, const Rational& y) {
  if (x.den_ != 0 && y.den_ != 0) return x.num_ == y.num_ && x.den_ == y.den_;
  if (x.den_ != 0 || y.den_ != 0) return false;
  return *x.big_ == *y.big_;
}

std::strong_ordering operator<=>(const Rational& x, const Rational& y) {
  if (x.den_ != 0 && y.den_ != 0) {
    const i128 l = i128(x.num_) * y.den_, r = i128(y.num_) * x.den_;
    return l <=> r;
  }
  const int c = cmp(x.to_mpq(), y.to_mpq());
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

mpz_class lcm(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace attposet::exact
