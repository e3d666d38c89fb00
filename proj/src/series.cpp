#include "padic/series.hpp"

#include <algorithm>
#include <stdexcept>

namespace padic {

namespace {

PAdicNumber zero_like(unsigned p, int prec) { return PAdicNumber(p, prec); }

bool exact_zero(const PAdicNumber& x) { return x.is_zero(); }

template <class T, class Mul>
T power_of(std::vector<std::vector<T>>& cache, int var, int e, const T& one, Mul mul) {
  auto& row = cache[var];
  if (row.empty()) row.push_back(one);
  while (static_cast<int>(row.size()) <= e) row.push_back(mul(row.back(), row[1]));
  return row[e];
}

}  // namespace

Poly::Poly(unsigned p, int nvars, int precision) : p_(p), n_(nvars), prec_(precision) {
  if (nvars < 0) throw std::invalid_argument("negative arity");
}

Poly Poly::constant(unsigned p, int nvars, const PAdicNumber& c) {
  Poly r(p, nvars, c.precision());
  r.add_term(Exponent(nvars, 0), c);
  return r;
}

Poly Poly::variable(unsigned p, int nvars, int i, int precision) {
  Poly r(p, nvars, precision);
  Exponent e(nvars, 0);
  e.at(i) = 1;
  r.add_term(e, PAdicNumber::from_int(p, 1, precision));
  return r;
}

int Poly::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

Poly& Poly::add_term(const Exponent& e, const PAdicNumber& c) {
  if (static_cast<int>(e.size()) != n_) throw std::invalid_argument("exponent has the wrong arity");
  if (c.prime() != p_) throw PrimeMismatch("coefficient prime differs from polynomial prime");
  for (int k : e)
    if (k < 0) throw std::invalid_argument("negative exponent");
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    if (!exact_zero(c)) terms_.emplace(e, c);
    return *this;
  }
  it->second += c;
  if (exact_zero(it->second)) terms_.erase(it);
  return *this;
}

void Poly::check(const Poly& o) const {
  if (p_ != o.p_) throw PrimeMismatch("polynomials over different primes");
  if (n_ != o.n_) throw std::invalid_argument("polynomials of different arity");
}

Poly Poly::operator+(const Poly& o) const {
  check(o);
  Poly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Poly Poly::operator-() const {
  Poly r(p_, n_, prec_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  check(o);
  Poly r(p_, n_, std::min(prec_, o.prec_));
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exponent e(n_);
      for (int k = 0; k < n_; ++k) e[k] = e1[k] + e2[k];
      r.add_term(e, c1 * c2);
    }
  return r;
}

Poly Poly::scaled(const PAdicNumber& c) const {
  Poly r(p_, n_, prec_);
  for (const auto& [e, v] : terms_) r.add_term(e, v * c);
  return r;
}

PAdicNumber Poly::eval(const std::vector<PAdicNumber>& x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("point has the wrong arity");
  std::vector<std::vector<PAdicNumber>> cache(n_);
  PAdicNumber one = PAdicNumber::from_int(p_, 1, prec_);
  PAdicNumber acc = zero_like(p_, prec_);
  for (const auto& [e, c] : terms_) {
    PAdicNumber m = c;
    for (int k = 0; k < n_; ++k) {
      if (e[k] == 0) continue;
      if (cache[k].empty()) cache[k] = {one, x[k]};
      m *= power_of(cache, k, e[k], one, [](const PAdicNumber& a, const PAdicNumber& b) { return a * b; });
    }
    acc += m;
  }
  return acc;
}

Poly Poly::derivative(int var) const {
  if (var < 0 || var >= n_) throw std::invalid_argument("variable out of range");
  Poly r(p_, n_, prec_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent f = e;
    --f[var];
    r.add_term(f, c * PAdicNumber::from_int(p_, e[var], prec_));
  }
  return r;
}

Poly Poly::compose(const std::vector<Poly>& g) const {
  if (static_cast<int>(g.size()) != n_) throw std::invalid_argument("substitution has the wrong arity");
  if (g.empty()) return *this;
  const int m = g[0].nvars();
  for (const auto& gi : g)
    if (gi.nvars() != m || gi.prime() != p_) throw std::invalid_argument("substitutions must share prime and arity");
  Poly one = Poly::constant(p_, m, PAdicNumber::from_int(p_, 1, prec_));
  std::vector<std::vector<Poly>> cache(n_);
  Poly acc(p_, m, prec_);
  for (const auto& [e, c] : terms_) {
    Poly term = Poly::constant(p_, m, c);
    for (int k = 0; k < n_; ++k) {
      if (e[k] == 0) continue;
      if (cache[k].empty()) cache[k] = {one, g[k]};
      term = term * power_of(cache, k, e[k], one, [](const Poly& a, const Poly& b) { return a * b; });
    }
    acc = acc + term;
  }
  return acc;
}

double Poly::gauss_norm(int radius_exponent) const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    m = std::max(m, c.norm() * std::pow(static_cast<double>(p_), static_cast<double>(radius_exponent) * s));
  }
  return m;
}

std::vector<PAdicNumber> eval(const PolyMap& f, const std::vector<PAdicNumber>& x) {
  std::vector<PAdicNumber> y;
  y.reserve(f.size());
  for (const auto& fi : f) y.push_back(fi.eval(x));
  return y;
}

PolyMap compose(const PolyMap& f, const PolyMap& g) {
  PolyMap r;
  r.reserve(f.size());
  for (const auto& fi : f) r.push_back(fi.compose(g));
  return r;
}

PolyMap identity_map(unsigned p, int n, int precision) {
  PolyMap r;
  for (int i = 0; i < n; ++i) r.push_back(Poly::variable(p, n, i, precision));
  return r;
}

std::vector<std::vector<PAdicNumber>> jacobian(const PolyMap& f, const std::vector<PAdicNumber>& x) {
  std::vector<std::vector<PAdicNumber>> J;
  for (const auto& fi : f) {
    std::vector<PAdicNumber> row;
    for (int j = 0; j < fi.nvars(); ++j) row.push_back(fi.derivative(j).eval(x));
    J.push_back(std::move(row));
  }
  return J;
}

PAdicNumber binomial(const PAdicNumber& b, int n) {
  if (n < 0) throw std::invalid_argument("negative binomial index");
  Rational x = b.is_zero() ? Rational(0) : b.to_rational();
  Rational acc(1);
  for (int k = 0; k < n; ++k) acc = acc * (x - k) / (k + 1);
  return PAdicNumber::from_rational(b.prime(), acc, b.precision());
}

Series::Series(unsigned p, Basis basis, int cap, int precision)
    : p_(p), basis_(basis), cap_(cap), prec_(precision), c_(static_cast<std::size_t>(cap), PAdicNumber(p, precision)) {
  if (cap < 1) throw std::invalid_argument("series needs at least one coefficient");
}

Series Series::constant(const PAdicNumber& c, Basis basis, int cap) {
  Series s(c.prime(), basis, cap, c.precision());
  s.c_[0] = c;
  return s;
}

Series Series::identity(unsigned p, Basis basis, int cap, int precision) {
  Series s(p, basis, cap, precision);
  if (cap > 1) s.c_[1] = PAdicNumber::from_int(p, 1, precision);
  return s;
}

void Series::check(const Series& o) const {
  if (p_ != o.p_) throw PrimeMismatch("series over different primes");
  if (basis_ != o.basis_ || cap_ != o.cap_) throw std::invalid_argument("series of different shape");
}

Series Series::operator+(const Series& o) const {
  check(o);
  Series r = *this;
  for (int n = 0; n < cap_; ++n) r.c_[n] += o.c_[n];
  return r;
}

Series Series::operator-(const Series& o) const {
  check(o);
  Series r = *this;
  for (int n = 0; n < cap_; ++n) r.c_[n] -= o.c_[n];
  return r;
}

Series Series::scaled(const PAdicNumber& c) const {
  Series r = *this;
  for (auto& v : r.c_) v *= c;
  return r;
}

Series Series::operator*(const Series& o) const {
  check(o);
  if (basis_ == Basis::power) {
    Series r(p_, basis_, cap_, std::min(prec_, o.prec_));
    for (int i = 0; i < cap_; ++i) {
      if (c_[i].is_zero()) continue;
      for (int j = 0; i + j < cap_; ++j) {
        if (o.c_[j].is_zero()) continue;
        r.c_[i + j] += c_[i] * o.c_[j];
      }
    }
    return r;
  }
  // Mahler: the first cap coefficients of a product depend only on the values at 0..cap-1
  auto a = values();
  auto b = o.values();
  for (int k = 0; k < cap_; ++k) a[k] *= b[k];
  return from_values(a);
}

std::vector<PAdicNumber> Series::values() const {
  if (basis_ != Basis::mahler) throw std::logic_error("values() needs the Mahler basis");
  std::vector<PAdicNumber> v(cap_, PAdicNumber(p_, prec_));
  for (int k = 0; k < cap_; ++k) {
    BigInt binom = 1;  // binom(k, n)
    for (int n = 0; n <= k; ++n) {
      if (!c_[n].is_zero()) v[k] += c_[n] * PAdicNumber::from_bigint(p_, binom, prec_);
      binom = binom * (k - n) / (n + 1);
    }
  }
  return v;
}

Series Series::from_values(const std::vector<PAdicNumber>& v) {
  if (v.empty()) throw std::invalid_argument("no values");
  const unsigned p = v[0].prime();
  int prec = v[0].precision();
  Series s(p, Basis::mahler, static_cast<int>(v.size()), prec);
  for (int n = 0; n < s.cap_; ++n) {
    BigInt binom = 1;  // binom(n, k)
    PAdicNumber acc(p, prec);
    for (int k = 0; k <= n; ++k) {
      PAdicNumber term = v[k] * PAdicNumber::from_bigint(p, binom, prec);
      if ((n - k) % 2 == 0)
        acc += term;
      else
        acc -= term;
      binom = binom * (n - k) / (k + 1);
    }
    s.c_[n] = acc;
  }
  return s;
}

PAdicNumber Series::eval(const PAdicNumber& b) const {
  if (b.prime() != p_) throw PrimeMismatch("evaluation point over a different prime");
  PAdicNumber acc(p_, prec_);
  if (basis_ == Basis::power) {
    for (int n = cap_ - 1; n >= 0; --n) acc = acc * b + c_[n];
    return acc;
  }
  Rational x = b.is_zero() ? Rational(0) : b.to_rational();
  Rational binom(1);
  for (int n = 0; n < cap_; ++n) {
    if (!c_[n].is_zero()) acc += c_[n] * PAdicNumber::from_rational(p_, binom, prec_);
    binom = binom * (x - n) / (n + 1);
  }
  return acc;
}

Series Series::antiderive() const {
  Series r(p_, basis_, cap_, prec_);
  for (int n = 0; n + 1 < cap_; ++n) {
    if (c_[n].is_zero()) {
      r.c_[n + 1] = c_[n];
      continue;
    }
    r.c_[n + 1] = basis_ == Basis::mahler ? c_[n] : c_[n] / PAdicNumber::from_int(p_, n + 1, prec_);
  }
  return r;
}

Series Series::derivative() const {
  if (basis_ != Basis::power) throw std::logic_error("derivative() needs the power basis");
  Series r(p_, basis_, cap_, prec_);
  for (int n = 1; n < cap_; ++n) r.c_[n - 1] = c_[n] * PAdicNumber::from_int(p_, n, prec_);
  return r;
}

Series Series::forward_difference() const {
  if (basis_ != Basis::mahler) throw std::logic_error("forward_difference() needs the Mahler basis");
  Series r(p_, basis_, cap_, prec_);
  for (int n = 1; n < cap_; ++n) r.c_[n - 1] = c_[n];
  return r;
}

double Series::norm() const {
  double m = 0.0;
  for (const auto& v : c_) m = std::max(m, v.norm());
  return m;
}

int Series::min_valuation() const {
  int v = PAdicNumber::kInfinite;
  for (const auto& c : c_)
    if (!c.is_zero()) v = std::min(v, c.valuation());
  return v;
}

Series eval(const Poly& f, const std::vector<Series>& x) {
  if (static_cast<int>(x.size()) != f.nvars()) throw std::invalid_argument("point has the wrong arity");
  if (x.empty()) throw std::invalid_argument("series evaluation needs at least one variable");
  const Series& ref = x[0];
  Series one = Series::constant(PAdicNumber::from_int(f.prime(), 1, ref.precision()), ref.basis(), ref.cap());
  std::vector<std::vector<Series>> cache(f.nvars());
  Series acc(f.prime(), ref.basis(), ref.cap(), ref.precision());
  for (const auto& [e, c] : f.terms()) {
    Series term = one.scaled(c);
    for (int k = 0; k < f.nvars(); ++k) {
      if (e[k] == 0) continue;
      if (cache[k].empty()) cache[k] = {one, x[k]};
      term = term * power_of(cache, k, e[k], one, [](const Series& a, const Series& b) { return a * b; });
    }
    acc = acc + term;
  }
  return acc;
}

}  // namespace padic
