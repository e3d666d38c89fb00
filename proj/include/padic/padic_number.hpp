#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace padic {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct PrimeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DivisionByZero : std::domain_error {
  using std::domain_error::domain_error;
};
struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Working precision (number of p-adic digits) used when none is given.
int default_precision();
void set_default_precision(int digits);

bool is_prime(unsigned n);
BigInt ipow(unsigned p, int e);
int valuation_of(const BigInt& n, unsigned p);  // n != 0

// Element of Q_p stored as p^valuation * unit with the unit known modulo p^sig.
// sig counts trustworthy digits and never exceeds the working precision W.
class PAdicNumber {
 public:
  static constexpr int kInfinite = std::numeric_limits<int>::max();

  PAdicNumber() = default;
  explicit PAdicNumber(unsigned p, int precision = default_precision());

  static PAdicNumber from_int(unsigned p, long long v, int precision = default_precision());
  static PAdicNumber from_bigint(unsigned p, const BigInt& v, int precision = default_precision());
  static PAdicNumber from_rational(unsigned p, const Rational& r, int precision = default_precision());
  static PAdicNumber from_digits(unsigned p, int valuation, const std::vector<unsigned>& digits,
                                 int precision = default_precision());
  // p^e as an exact element
  static PAdicNumber power_of_p(unsigned p, int e, int precision = default_precision());

  // "p:val:d0d1d2..." (little-endian digits, base-36 alphabet) or "p:num/den"
  static PAdicNumber parse(std::string_view literal, int precision = default_precision());
  std::string to_string() const;

  unsigned prime() const { return p_; }
  int precision() const { return prec_; }
  int significant_digits() const { return is_zero() ? prec_ : sig_; }
  bool is_zero() const { return val_ == kInfinite; }
  // zero known only modulo p^k, k = zero_precision(); kInfinite for an exact zero
  int zero_precision() const { return abs_; }
  int valuation() const { return val_; }
  double norm() const;
  const BigInt& unit() const { return unit_; }
  // W digits, d0 first; digits beyond the significant ones are reported as 0
  std::vector<unsigned> unit_digits() const;
  // coefficient a_l of p^l
  unsigned digit(int l) const;

  PAdicNumber operator+(const PAdicNumber& o) const;
  PAdicNumber operator-(const PAdicNumber& o) const;
  PAdicNumber operator*(const PAdicNumber& o) const;
  PAdicNumber operator/(const PAdicNumber& o) const;
  PAdicNumber operator-() const;
  PAdicNumber& operator+=(const PAdicNumber& o) { return *this = *this + o; }
  PAdicNumber& operator-=(const PAdicNumber& o) { return *this = *this - o; }
  PAdicNumber& operator*=(const PAdicNumber& o) { return *this = *this * o; }
  PAdicNumber inv() const;
  PAdicNumber mul_p_power(int e) const;  // x * p^e, exact

  // equality on the digits both operands know
  bool operator==(const PAdicNumber& o) const;
  bool operator!=(const PAdicNumber& o) const { return !(*this == o); }
  // |x - y| <= p^-k
  bool agrees_to(const PAdicNumber& o, int k) const;

  // truncation x mod p^k as an exact rational (digits a_l, l < k)
  Rational truncated(int k) const;
  Rational to_rational() const;  // all known digits
  // x reduced modulo p^k Z_p as a non-negative integer times p^-shift; requires val >= -shift
  BigInt coset_index(int shift, int k) const;

 private:
  void check_same_prime(const PAdicNumber& o) const;
  static PAdicNumber make(unsigned p, int prec, int val, int sig, BigInt unit);

  unsigned p_ = 2;
  int prec_ = 32;
  int val_ = kInfinite;
  int sig_ = 0;
  int abs_ = kInfinite;  // absolute precision of a zero produced by cancellation
  BigInt unit_ = 0;
};

// {y}_p = sum_{l<0} a_l p^l, an exact rational in [0,1)
Rational frac_part(const PAdicNumber& y);
// exp(2 pi i r) for rational r
std::complex<double> unit_phase(const Rational& r);
std::complex<double> char_chi(const PAdicNumber& y);

// Tame characters of the unit sphere: u -> exp(2 pi i k ind(u mod p) / (p-1)).
// conductor_exponent > 1 describes wilder characters, which are rejected.
struct UnitCharacter {
  long long k = 0;
  int conductor_exponent = 0;
  static UnitCharacter trivial() { return {}; }
};

unsigned primitive_root(unsigned p);
std::complex<double> mult_character(std::complex<double> a, const UnitCharacter& pi0, const PAdicNumber& x);

class Ball {
 public:
  Ball(std::vector<PAdicNumber> center, int radius_exponent);
  Ball(PAdicNumber center, int radius_exponent) : Ball(std::vector<PAdicNumber>{std::move(center)}, radius_exponent) {}

  const std::vector<PAdicNumber>& center() const { return center_; }
  int radius_exponent() const { return k_; }
  double radius() const;
  int dimension() const { return static_cast<int>(center_.size()); }
  bool contains(const std::vector<PAdicNumber>& x) const;
  bool contains(const PAdicNumber& x) const { return contains(std::vector<PAdicNumber>{x}); }
  bool intersects(const Ball& o) const;
  bool contains(const Ball& o) const;

 private:
  std::vector<PAdicNumber> center_;
  int k_;
};

}  // namespace padic
