#include "padic/padic_number.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

namespace padic {

namespace {

std::atomic<int> g_precision{32};

BigInt mod_pos(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
  BigInt g = m, x = 0, x1 = 1, a1 = mod_pos(a, m);
  BigInt b = a1;
  while (b != 0) {
    BigInt q = g / b;
    BigInt t = g - q * b;
    g = b;
    b = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) throw DivisionByZero("element is not a unit");
  return mod_pos(x, m);
}

constexpr char kAlphabet[] = "0123456789abcdefghijklmnopqrstuvwxyz";

unsigned digit_value(char c) {
  if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
  if (c >= 'a' && c <= 'z') return static_cast<unsigned>(c - 'a' + 10);
  if (c >= 'A' && c <= 'Z') return static_cast<unsigned>(c - 'A' + 10);
  throw std::invalid_argument(std::string("bad p-adic digit '") + c + "'");
}

long long parse_ll(std::string_view s) {
  std::size_t pos = 0;
  std::string tmp(s);
  long long v = std::stoll(tmp, &pos);
  if (pos != tmp.size()) throw std::invalid_argument("bad integer '" + tmp + "'");
  return v;
}

}  // namespace

int default_precision() { return g_precision.load(); }

void set_default_precision(int digits) {
  if (digits < 1 || digits > 4096) throw std::invalid_argument("precision out of range");
  g_precision.store(digits);
}

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

BigInt ipow(unsigned p, int e) {
  BigInt r = 1;
  BigInt b = p;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

int valuation_of(const BigInt& n, unsigned p) {
  int v = 0;
  BigInt m = n;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

PAdicNumber::PAdicNumber(unsigned p, int precision) : p_(p), prec_(precision) {
  if (!is_prime(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
  if (precision < 1) throw std::invalid_argument("precision must be positive");
  sig_ = precision;
}

PAdicNumber PAdicNumber::make(unsigned p, int prec, int val, int sig, BigInt unit) {
  PAdicNumber x;
  x.p_ = p;
  x.prec_ = prec;
  x.val_ = val;
  x.sig_ = std::min(sig, prec);
  x.unit_ = mod_pos(unit, ipow(p, x.sig_));
  return x;
}

PAdicNumber PAdicNumber::from_bigint(unsigned p, const BigInt& v, int precision) {
  PAdicNumber z(p, precision);
  if (v == 0) return z;
  int k = valuation_of(v, p);
  return make(p, precision, k, precision, v / ipow(p, k));
}

PAdicNumber PAdicNumber::from_int(unsigned p, long long v, int precision) {
  return from_bigint(p, BigInt(v), precision);
}

PAdicNumber PAdicNumber::from_rational(unsigned p, const Rational& r, int precision) {
  PAdicNumber z(p, precision);
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (num == 0) return z;
  int vn = valuation_of(num, p);
  int vd = valuation_of(den, p);
  num /= ipow(p, vn);
  den /= ipow(p, vd);
  BigInt m = ipow(p, precision);
  return make(p, precision, vn - vd, precision, mod_pos(num, m) * mod_inverse(den, m));
}

PAdicNumber PAdicNumber::from_digits(unsigned p, int valuation, const std::vector<unsigned>& digits, int precision) {
  PAdicNumber z(p, precision);
  BigInt u = 0;
  BigInt place = 1;
  int n = std::min<int>(static_cast<int>(digits.size()), precision);
  for (int i = 0; i < n; ++i) {
    if (digits[i] >= p) throw std::invalid_argument("digit out of range for prime");
    u += place * digits[i];
    place *= p;
  }
  if (u == 0) return z;
  int k = valuation_of(u, p);
  if (k != 0) throw std::invalid_argument("leading unit digit must be nonzero");
  return make(p, precision, valuation, precision, u);
}

PAdicNumber PAdicNumber::power_of_p(unsigned p, int e, int precision) {
  return make(p, precision, e, precision, 1);
}

PAdicNumber PAdicNumber::parse(std::string_view lit, int precision) {
  auto c1 = lit.find(':');
  if (c1 == std::string_view::npos) throw std::invalid_argument("p-adic literal needs 'p:'");
  long long pl = parse_ll(lit.substr(0, c1));
  if (pl < 2 || pl > 36) throw std::invalid_argument("literal prime must lie in [2,36]");
  auto p = static_cast<unsigned>(pl);
  std::string_view rest = lit.substr(c1 + 1);
  auto c2 = rest.find(':');
  if (c2 == std::string_view::npos) {
    auto slash = rest.find('/');
    if (slash == std::string_view::npos) return from_int(p, parse_ll(rest), precision);
    long long num = parse_ll(rest.substr(0, slash));
    long long den = parse_ll(rest.substr(slash + 1));
    if (den == 0) throw DivisionByZero("zero denominator in literal");
    return from_rational(p, Rational(num, den), precision);
  }
  std::string_view vs = rest.substr(0, c2);
  std::string_view ds = rest.substr(c2 + 1);
  if (vs == "inf") {
    if (!ds.empty() && ds.find_first_not_of('0') != std::string_view::npos)
      throw std::invalid_argument("zero literal carries digits");
    return PAdicNumber(p, precision);
  }
  std::vector<unsigned> digits;
  for (char c : ds) digits.push_back(digit_value(c));
  if (digits.empty() || digits[0] == 0) throw std::invalid_argument("leading unit digit must be nonzero");
  return from_digits(p, static_cast<int>(parse_ll(vs)), digits, precision);
}

std::string PAdicNumber::to_string() const {
  std::ostringstream os;
  os << p_ << ':';
  if (is_zero()) {
    os << "inf:";
    return os.str();
  }
  os << val_ << ':';
  auto d = unit_digits();
  std::size_t n = d.size();
  while (n > 1 && d[n - 1] == 0) --n;
  for (std::size_t i = 0; i < n; ++i) os << kAlphabet[d[i]];
  return os.str();
}

double PAdicNumber::norm() const {
  if (is_zero()) return 0.0;
  return std::pow(static_cast<double>(p_), -static_cast<double>(val_));
}

std::vector<unsigned> PAdicNumber::unit_digits() const {
  std::vector<unsigned> d(prec_, 0);
  BigInt u = unit_;
  for (int i = 0; i < prec_ && u != 0; ++i) {
    d[i] = static_cast<unsigned>(u % p_);
    u /= p_;
  }
  return d;
}

unsigned PAdicNumber::digit(int l) const {
  if (is_zero() || l < val_ || l >= val_ + sig_) return 0;
  BigInt u = unit_ / ipow(p_, l - val_);
  return static_cast<unsigned>(u % p_);
}

void PAdicNumber::check_same_prime(const PAdicNumber& o) const {
  if (p_ != o.p_)
    throw PrimeMismatch("operands over Q_" + std::to_string(p_) + " and Q_" + std::to_string(o.p_));
}

PAdicNumber PAdicNumber::operator+(const PAdicNumber& o) const {
  check_same_prime(o);
  int prec = std::min(prec_, o.prec_);
  const PAdicNumber* x = this;
  const PAdicNumber* y = &o;
  if (y->is_zero()) std::swap(x, y);
  if (x->is_zero()) {
    if (y->is_zero()) {
      PAdicNumber z(p_, prec);
      z.abs_ = std::min(x->abs_, y->abs_);
      return z;
    }
    if (x->abs_ == kInfinite) return make(p_, prec, y->val_, y->sig_, y->unit_);
    if (y->val_ >= x->abs_) return *x;
    return make(p_, prec, y->val_, std::min(y->sig_, x->abs_ - y->val_), y->unit_);
  }
  if (y->val_ < x->val_) std::swap(x, y);
  long long abs_prec = std::min<long long>(static_cast<long long>(x->val_) + x->sig_,
                                           static_cast<long long>(y->val_) + y->sig_);
  int window = static_cast<int>(std::min<long long>(abs_prec - x->val_, prec));
  if (y->val_ - x->val_ >= window) return make(p_, prec, x->val_, window, x->unit_);
  BigInt m = ipow(p_, window);
  BigInt s = mod_pos(x->unit_ + y->unit_ * ipow(p_, y->val_ - x->val_), m);
  if (s == 0) {
    // every known digit cancelled; the result is O(p^abs_prec) and carries no unit
    PAdicNumber z(p_, prec);
    z.abs_ = static_cast<int>(abs_prec);
    return z;
  }
  int k = valuation_of(s, p_);
  return make(p_, prec, x->val_ + k, window - k, s / ipow(p_, k));
}

PAdicNumber PAdicNumber::operator-() const {
  if (is_zero()) return *this;
  return make(p_, prec_, val_, sig_, ipow(p_, sig_) - unit_);
}

PAdicNumber PAdicNumber::operator-(const PAdicNumber& o) const { return *this + (-o); }

PAdicNumber PAdicNumber::operator*(const PAdicNumber& o) const {
  check_same_prime(o);
  int prec = std::min(prec_, o.prec_);
  if (is_zero() || o.is_zero()) {
    PAdicNumber z(p_, prec);
    const PAdicNumber& a = is_zero() ? *this : o;
    const PAdicNumber& b = is_zero() ? o : *this;
    if (a.abs_ == kInfinite || (b.is_zero() && b.abs_ == kInfinite)) return z;
    long long bv = b.is_zero() ? b.abs_ : b.val_;
    z.abs_ = static_cast<int>(std::min<long long>(static_cast<long long>(a.abs_) + bv, kInfinite - 1));
    return z;
  }
  int sig = std::min(sig_, o.sig_);
  return make(p_, prec, val_ + o.val_, sig, unit_ * o.unit_);
}

PAdicNumber PAdicNumber::inv() const {
  if (is_zero()) {
    if (abs_ != kInfinite) throw PrecisionExhausted("inverting a value with no significant digits");
    throw DivisionByZero("inverse of zero");
  }
  return make(p_, prec_, -val_, sig_, mod_inverse(unit_, ipow(p_, sig_)));
}

PAdicNumber PAdicNumber::operator/(const PAdicNumber& o) const {
  check_same_prime(o);
  return *this * o.inv();
}

PAdicNumber PAdicNumber::mul_p_power(int e) const {
  if (is_zero()) {
    PAdicNumber z = *this;
    if (abs_ != kInfinite) z.abs_ += e;
    return z;
  }
  return make(p_, prec_, val_ + e, sig_, unit_);
}

bool PAdicNumber::operator==(const PAdicNumber& o) const {
  if (p_ != o.p_) return false;
  if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
  if (val_ != o.val_) return false;
  int s = std::min(sig_, o.sig_);
  BigInt m = ipow(p_, s);
  return mod_pos(unit_, m) == mod_pos(o.unit_, m);
}

bool PAdicNumber::agrees_to(const PAdicNumber& o, int k) const {
  PAdicNumber d = *this - o;
  if (d.is_zero()) return d.abs_ >= k;
  return d.val_ >= k;
}

Rational PAdicNumber::truncated(int k) const {
  if (is_zero() || k <= val_) return Rational(0);
  int n = std::min(k - val_, sig_);
  BigInt low = mod_pos(unit_, ipow(p_, n));
  if (val_ >= 0) return Rational(low * ipow(p_, val_));
  return Rational(low, ipow(p_, -val_));
}

Rational PAdicNumber::to_rational() const {
  if (is_zero()) return Rational(0);
  return truncated(val_ + sig_);
}

BigInt PAdicNumber::coset_index(int shift, int k) const {
  if (is_zero()) return 0;
  if (val_ < -shift) throw std::out_of_range("value lies outside the grid support");
  int n = std::min(k - (val_ + shift), sig_);
  if (n <= 0) return 0;
  return mod_pos(unit_, ipow(p_, n)) * ipow(p_, val_ + shift);
}

Rational frac_part(const PAdicNumber& y) {
  if (y.is_zero() || y.valuation() >= 0) return Rational(0);
  return y.truncated(0);
}

std::complex<double> unit_phase(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  num = mod_pos(num, den);
  if (num == 0) return {1.0, 0.0};
  if (den == 2) return {-1.0, 0.0};
  if (den == 4) return num == 1 ? std::complex<double>{0.0, 1.0} : std::complex<double>{0.0, -1.0};
  // reduce to a ratio of 64-bit values before converting
  while (den > BigInt(1) << 62) {
    num >>= 1;
    den >>= 1;
  }
  long double t = static_cast<long double>(static_cast<unsigned long long>(num)) /
                  static_cast<long double>(static_cast<unsigned long long>(den));
  long double ang = 2.0L * std::numbers::pi_v<long double> * t;
  return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
}

std::complex<double> char_chi(const PAdicNumber& y) { return unit_phase(frac_part(y)); }

unsigned primitive_root(unsigned p) {
  if (p == 2) return 1;
  for (unsigned g = 2; g < p; ++g) {
    unsigned long long x = 1;
    unsigned order = 0;
    do {
      x = x * g % p;
      ++order;
    } while (x != 1);
    if (order == p - 1) return g;
  }
  return 1;
}

std::complex<double> mult_character(std::complex<double> a, const UnitCharacter& pi0, const PAdicNumber& x) {
  if (pi0.conductor_exponent > 1)
    throw std::invalid_argument("only tame unit characters are supported");
  if (x.is_zero()) return {0.0, 0.0};
  double lnp = std::log(static_cast<double>(x.prime()));
  std::complex<double> mag = std::exp((a - 1.0) * (-static_cast<double>(x.valuation()) * lnp));
  unsigned p = x.prime();
  long long k = pi0.k % static_cast<long long>(p - 1);
  if (p == 2 || k == 0) return mag;
  unsigned u0 = static_cast<unsigned>(x.unit() % p);
  unsigned g = primitive_root(p);
  unsigned long long acc = 1;
  unsigned ind = 0;
  while (acc != u0) {
    acc = acc * g % p;
    ++ind;
  }
  return mag * unit_phase(Rational(BigInt(k) * ind, BigInt(p - 1)));
}

Ball::Ball(std::vector<PAdicNumber> center, int radius_exponent) : center_(std::move(center)), k_(radius_exponent) {
  if (center_.empty()) throw std::invalid_argument("ball needs a center");
}

double Ball::radius() const {
  return std::pow(static_cast<double>(center_[0].prime()), static_cast<double>(k_));
}

bool Ball::contains(const std::vector<PAdicNumber>& x) const {
  if (x.size() != center_.size()) throw std::invalid_argument("dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].agrees_to(center_[i], -k_)) return false;
  return true;
}

bool Ball::intersects(const Ball& o) const {
  int k = std::max(k_, o.k_);
  for (std::size_t i = 0; i < center_.size(); ++i)
    if (!center_[i].agrees_to(o.center_[i], -k)) return false;
  return true;
}

bool Ball::contains(const Ball& o) const { return o.k_ <= k_ && contains(o.center_); }

}  // namespace padic
