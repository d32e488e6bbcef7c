#include "doctest.h"

#include <cmath>

#include "ncd/rational.hpp"

using ncd::Rational;

TEST_CASE("parse_rational accepts integers, fractions and decimals") {
  CHECK(ncd::parse_rational("7") == 7);
  CHECK(ncd::parse_rational(" -3/4 ") == Rational(-3, 4));
  CHECK(ncd::parse_rational("6/8") == Rational(3, 4));
  CHECK(ncd::parse_rational("0.125") == Rational(1, 8));
  CHECK(ncd::parse_rational("-2.5e-1") == Rational(-1, 4));
  CHECK(ncd::parse_rational("1e3") == 1000);
}

TEST_CASE("parse_rational rejects garbage") {
  CHECK_THROWS_AS(ncd::parse_rational(""), ncd::InputError);
  CHECK_THROWS_AS(ncd::parse_rational("1/0"), ncd::InputError);
  CHECK_THROWS_AS(ncd::parse_rational("abc"), ncd::InputError);
  CHECK_THROWS_AS(ncd::parse_rational("1/2/3"), ncd::InputError);
}

TEST_CASE("to_string is canonical") {
  Rational r(6, -8);
  r.canonicalize();
  CHECK(ncd::to_string(r) == "-3/4");
  CHECK(ncd::to_string(Rational(5)) == "5");
  CHECK(ncd::to_string(Rational(0)) == "0");
}

TEST_CASE("rational list parsing") {
  auto v = ncd::parse_rational_list("0,1/2,3");
  REQUIRE(v.size() == 3);
  CHECK(v[1] == Rational(1, 2));
  CHECK_THROWS_AS(ncd::parse_rational_list("0,,1"), ncd::InputError);
}

TEST_CASE("exact_sqrt and sqrt_upper_bound") {
  Rational root;
  CHECK(ncd::exact_sqrt(Rational(9, 4), root));
  CHECK(root == Rational(3, 2));
  CHECK_FALSE(ncd::exact_sqrt(Rational(2), root));
  CHECK_FALSE(ncd::exact_sqrt(Rational(-1), root));

  CHECK(ncd::sqrt_upper_bound(Rational(1, 4)) == Rational(1, 2));
  for (int k = 1; k < 50; ++k) {
    Rational r(k, 7);
    r.canonicalize();
    Rational q = ncd::sqrt_upper_bound(r);
    CHECK(q >= 0);
    CHECK(q * q >= r);
    CHECK(ncd::to_double(q) < std::sqrt(ncd::to_double(r)) + 1e-3);
  }
}

TEST_CASE("approximate finds small denominators") {
  CHECK(ncd::approximate(1.0 / 3.0, 100) == Rational(1, 3));
  CHECK(ncd::approximate(-0.75, 10) == Rational(-3, 4));
  CHECK(ncd::approximate(2.0, 1) == 2);
  Rational pi = ncd::approximate(3.141592653589793, 1000);
  CHECK(pi == Rational(355, 113));
}
