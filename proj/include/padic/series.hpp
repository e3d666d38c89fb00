#pragma once

#include "padic/padic_number.hpp"

#include <map>
#include <vector>

namespace padic {

// Multivariate polynomial with Q_p coefficients.
class Poly {
 public:
  using Exponent = std::vector<int>;

  Poly() = default;
  Poly(unsigned p, int nvars, int precision = default_precision());
  static Poly constant(unsigned p, int nvars, const PAdicNumber& c);
  static Poly variable(unsigned p, int nvars, int i, int precision = default_precision());

  unsigned prime() const { return p_; }
  int nvars() const { return n_; }
  int precision() const { return prec_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponent, PAdicNumber>& terms() const { return terms_; }

  Poly& add_term(const Exponent& e, const PAdicNumber& c);
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly scaled(const PAdicNumber& c) const;

  PAdicNumber eval(const std::vector<PAdicNumber>& x) const;
  Poly derivative(int var) const;
  // substitute variable i by g[i]; all g share an arity
  Poly compose(const std::vector<Poly>& g) const;
  // max |c_e| p^(r |e|): a bound for sup |f| on the polydisc |x_i| <= p^r
  double gauss_norm(int radius_exponent = 0) const;

 private:
  void check(const Poly& o) const;
  unsigned p_ = 2;
  int n_ = 1;
  int prec_ = 32;
  std::map<Exponent, PAdicNumber> terms_;
};

using PolyMap = std::vector<Poly>;  // Q_p^n -> Q_p^m, one polynomial per output
std::vector<PAdicNumber> eval(const PolyMap& f, const std::vector<PAdicNumber>& x);
PolyMap compose(const PolyMap& f, const PolyMap& g);  // f o g
PolyMap identity_map(unsigned p, int n, int precision = default_precision());
// Jacobian rows: J[i][j] = d f_i / d x_j at x
std::vector<std::vector<PAdicNumber>> jacobian(const PolyMap& f, const std::vector<PAdicNumber>& x);

// Functions of one variable b in Z_p, truncated after `cap` coefficients, in
// either the power basis b^n or the Mahler basis binom(b, n).
enum class Basis { power, mahler };

class Series {
 public:
  Series() = default;
  Series(unsigned p, Basis basis, int cap, int precision = default_precision());
  static Series constant(const PAdicNumber& c, Basis basis, int cap);
  // b itself
  static Series identity(unsigned p, Basis basis, int cap, int precision = default_precision());

  unsigned prime() const { return p_; }
  Basis basis() const { return basis_; }
  int cap() const { return cap_; }
  int precision() const { return prec_; }
  const std::vector<PAdicNumber>& coeffs() const { return c_; }
  PAdicNumber& operator[](int n) { return c_.at(n); }
  const PAdicNumber& operator[](int n) const { return c_.at(n); }

  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator*(const Series& o) const;
  Series scaled(const PAdicNumber& c) const;

  PAdicNumber eval(const PAdicNumber& b) const;
  // right inverse of d/db (power) or of the forward difference (Mahler); vanishes at 0
  Series antiderive() const;
  Series derivative() const;  // power basis only
  Series forward_difference() const;  // f(b+1) - f(b), Mahler basis only
  // max |c_n|; equals the sup norm on Z_p in the Mahler basis
  double norm() const;
  int min_valuation() const;  // over nonzero coefficients, kInfinite for 0

  // Mahler coefficients <-> values at b = 0..cap-1
  std::vector<PAdicNumber> values() const;
  static Series from_values(const std::vector<PAdicNumber>& v);

 private:
  void check(const Series& o) const;
  unsigned p_ = 2;
  Basis basis_ = Basis::power;
  int cap_ = 1;
  int prec_ = 32;
  std::vector<PAdicNumber> c_;
};

// Evaluate a polynomial at a point whose coordinates are series.
Series eval(const Poly& f, const std::vector<Series>& x);

// binom(b, n) for b in Z_p, the known digits of b taken as exact
PAdicNumber binomial(const PAdicNumber& b, int n);

}  // namespace padic
