#include "doctest.h"
#include "support/gen.hpp"

#include "padic/padic_number.hpp"

#include <cmath>

using namespace padic;

namespace {

Rational mod1(Rational r) {
  BigInt n = numerator(r), d = denominator(r);
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return r - Rational(q);
}

}  // namespace

TEST_CASE("arithmetic examples") {
  CHECK(PAdicNumber::from_int(2, 12).norm() == doctest::Approx(0.25));
  CHECK(PAdicNumber::from_int(5, 2).inv() * PAdicNumber::from_int(5, 2) == PAdicNumber::from_int(5, 1));
  CHECK((PAdicNumber::from_int(3, 9) + PAdicNumber::from_int(3, 18)).valuation() == 3);
  CHECK(PAdicNumber(7).norm() == 0.0);
}

TEST_CASE("arithmetic errors") {
  CHECK_THROWS_AS(PAdicNumber::from_int(2, 1) + PAdicNumber::from_int(3, 1), PrimeMismatch);
  CHECK_THROWS_AS(PAdicNumber(5).inv(), DivisionByZero);
  auto x = PAdicNumber::from_int(2, 5, 8);
  auto lost = x - x;  // every digit cancels
  CHECK(lost.is_zero());
  CHECK(lost.zero_precision() == 8);
  CHECK_THROWS_AS(lost.inv(), PrecisionExhausted);
}

TEST_CASE("frac_part and char_chi examples") {
  CHECK(frac_part(PAdicNumber::from_rational(2, Rational(7, 4))) == Rational(3, 4));
  CHECK(frac_part(PAdicNumber::from_int(5, 3)) == Rational(0));
  CHECK(frac_part(PAdicNumber::from_rational(3, Rational(1, 9))) == Rational(1, 9));
  auto c = char_chi(PAdicNumber::from_rational(2, Rational(1, 2)));
  CHECK(c.real() == doctest::Approx(-1.0));
  CHECK(std::abs(c.imag()) < 1e-15);
  CHECK(std::abs(char_chi(PAdicNumber::from_int(3, 2)) - std::complex<double>(1, 0)) < 1e-15);
  CHECK(std::abs(char_chi(PAdicNumber::from_rational(2, Rational(1, 4))) - std::complex<double>(0, 1)) < 1e-15);
}

TEST_CASE("mult_character examples") {
  for (unsigned p : {2u, 3u, 5u})
    CHECK(mult_character(2.0, UnitCharacter::trivial(), PAdicNumber::from_int(p, p)).real() ==
          doctest::Approx(1.0 / p));
  CHECK(mult_character({0.3, 1.7}, UnitCharacter::trivial(), PAdicNumber(3)) == std::complex<double>(0, 0));
  CHECK(mult_character(1.0, UnitCharacter::trivial(), PAdicNumber::from_int(2, 17)).real() == doctest::Approx(1.0));
  CHECK_THROWS(mult_character(2.0, UnitCharacter{1, 2}, PAdicNumber::from_int(5, 3)));
}

TEST_CASE("literal round trip") {
  Engine rng = make_stream(1, 0);
  for (int i = 0; i < 500; ++i) {
    unsigned p = gen::prime(rng);
    auto x = gen::padic(rng, p, -5, 5);
    auto s = x.to_string();
    CHECK(PAdicNumber::parse(s).to_string() == s);
    CHECK(PAdicNumber::parse(s) == x);
  }
  CHECK(PAdicNumber::parse("3:1/9") == PAdicNumber::from_rational(3, Rational(1, 9)));
}

TEST_CASE("ultrametric inequality on random pairs") {
  Engine rng = make_stream(2, 0);
  int equal_cases = 0;
  for (int i = 0; i < 10000; ++i) {
    unsigned p = gen::prime(rng);
    auto x = gen::padic(rng, p, -4, 4), y = gen::padic(rng, p, -4, 4);
    double s = (x + y).norm();
    REQUIRE(s <= std::max(x.norm(), y.norm()));
    if (x.valuation() != y.valuation()) {
      REQUIRE(s == std::max(x.norm(), y.norm()));
      ++equal_cases;
    }
    REQUIRE((x * y).valuation() == x.valuation() + y.valuation());
  }
  CHECK(equal_cases > 5000);
}

TEST_CASE("field laws on random elements") {
  Engine rng = make_stream(3, 0);
  for (int i = 0; i < 2000; ++i) {
    unsigned p = gen::prime(rng);
    auto x = gen::padic(rng, p, -3, 3), y = gen::padic(rng, p, -3, 3), z = gen::padic(rng, p, -3, 3);
    REQUIRE(x * x.inv() == PAdicNumber::from_int(p, 1));
    REQUIRE((x + y) * z == x * z + y * z);
    REQUIRE((x - y) + y == x);
    REQUIRE((x / y) * y == x);
  }
}

TEST_CASE("char_chi is an additive homomorphism") {
  Engine rng = make_stream(4, 0);
  for (int i = 0; i < 10000; ++i) {
    unsigned p = gen::prime(rng);
    auto x = gen::padic(rng, p, -6, 3), y = gen::padic(rng, p, -6, 3);
    // exact phase comparison
    REQUIRE(mod1(frac_part(x) + frac_part(y)) == frac_part(x + y));
    REQUIRE(std::abs(char_chi(x + y) - char_chi(x) * char_chi(y)) < 1e-12);
  }
}

TEST_CASE("mult_character is multiplicative") {
  Engine rng = make_stream(5, 0);
  for (int i = 0; i < 10000; ++i) {
    unsigned p = gen::prime(rng);
    std::complex<double> a(gen::uniform(rng, 0.5, 3.0), gen::uniform(rng, -2.0, 2.0));
    UnitCharacter pi0{gen::uniform_int(rng, 0, static_cast<int>(p) - 2), 1};
    auto x = gen::padic(rng, p, -3, 3), y = gen::padic(rng, p, -3, 3);
    auto lhs = mult_character(a, pi0, x * y);
    auto rhs = mult_character(a, pi0, x) * mult_character(a, pi0, y);
    REQUIRE(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("balls are nested or disjoint and every point is a centre") {
  Engine rng = make_stream(6, 0);
  for (int i = 0; i < 3000; ++i) {
    unsigned p = gen::prime(rng);
    Ball a(gen::padic_or_zero(rng, p, -2, 2), gen::uniform_int(rng, -3, 3));
    Ball b(gen::padic_or_zero(rng, p, -2, 2), gen::uniform_int(rng, -3, 3));
    if (a.intersects(b)) REQUIRE((a.contains(b) || b.contains(a)));
    auto y = a.center()[0] + gen::padic_or_zero(rng, p, -a.radius_exponent(), -a.radius_exponent() + 3);
    REQUIRE(a.contains(y));
    Ball moved(y, a.radius_exponent());
    REQUIRE(moved.contains(a));
    REQUIRE(a.contains(moved));
  }
}
