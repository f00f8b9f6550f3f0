#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wpwb/rational.hpp"
#include "wpwb/real_value.hpp"

using namespace wpwb;

TEST_CASE("rationals normalize to lowest terms with positive denominator") {
  Rat a(BigInt(6), BigInt(-4));
  CHECK(a.num() == -3);
  CHECK(a.den() == 2);
  CHECK(Rat(BigInt(0), BigInt(-7)) == Rat(0));
  CHECK(Rat(BigInt(3), BigInt(2)) * Rat(BigInt(2), BigInt(3)) == Rat(1));
}

TEST_CASE("rational parsing: integer, fraction, decimal") {
  CHECK(Rat::parse("7") == Rat(7));
  CHECK(Rat::parse("-3/4") == Rat(BigInt(-3), BigInt(4)));
  CHECK(Rat::parse("1.25") == Rat(BigInt(5), BigInt(4)));
  CHECK(Rat::parse("0.1") == Rat(BigInt(1), BigInt(10)));
  CHECK_THROWS_AS(Rat::parse("1/0"), FileFormatError);
  CHECK_THROWS_AS(Rat::parse("x"), FileFormatError);
  CHECK_THROWS_AS(Rat::parse("1.5junk"), FileFormatError);
}

TEST_CASE("decimal printing is exact for dyadic-and-five denominators") {
  CHECK(Rat(BigInt(21), BigInt(8)).to_decimal_string() == "2.625");
  CHECK(Rat(BigInt(6), BigInt(5)).to_decimal_string() == "1.2");
  CHECK(Rat(-3).to_decimal_string() == "-3");
  CHECK(Rat(BigInt(1), BigInt(3)).has_finite_decimal() == false);
}

TEST_CASE("floor and round-half-even") {
  CHECK(Rat(BigInt(7), BigInt(2)).floor() == 3);
  CHECK(Rat(BigInt(-7), BigInt(2)).floor() == -4);
  CHECK(Rat(BigInt(5), BigInt(2)).round_half_even() == 2);   // 2.5 -> 2
  CHECK(Rat(BigInt(7), BigInt(2)).round_half_even() == 4);   // 3.5 -> 4
  CHECK(Rat(BigInt(9), BigInt(4)).round_half_even() == 2);   // 2.25 -> 2
  CHECK(Rat(BigInt(11), BigInt(4)).round_half_even() == 3);  // 2.75 -> 3
}

TEST_CASE("floor_log2 brackets powers of two") {
  CHECK(Rat(1).floor_log2() == 0);
  CHECK(Rat(BigInt(9), BigInt(8)).floor_log2() == 0);
  CHECK(Rat(2).floor_log2() == 1);
  CHECK(Rat(BigInt(1), BigInt(2)).floor_log2() == -1);
  CHECK(Rat(BigInt(3), BigInt(8)).floor_log2() == -2);
  CHECK(Rat::pow2(-4) == Rat(BigInt(1), BigInt(16)));
}

TEST_CASE("err is absorbing for every operation") {
  const RealE err = RealE::error();
  const RealE five(Rat(5));
  CHECK(real_arith(ArithOp::Add, err, five).is_err());
  CHECK(real_arith(ArithOp::Add, five, err).is_err());
  CHECK(real_arith(ArithOp::Sub, err, err).is_err());
  CHECK(real_arith(ArithOp::Mul, five, err).is_err());
  CHECK(real_arith(ArithOp::Div, err, five).is_err());
  CHECK(real_arith(ArithOp::Neg, err).is_err());
}

TEST_CASE("division by zero and exact arithmetic") {
  CHECK(real_arith(ArithOp::Div, RealE(Rat(1)), RealE(Rat(0))).is_err());
  CHECK(real_arith(ArithOp::Div, RealE(Rat(0)), RealE(Rat(0))).is_err());
  const RealE r = real_arith(ArithOp::Mul, RealE(Rat(BigInt(3), BigInt(2))),
                             RealE(Rat(BigInt(2), BigInt(3))));
  CHECK(r == RealE(Rat(1)));
  CHECK(real_arith(ArithOp::Neg, RealE(Rat(2))) == RealE(Rat(-2)));
}

TEST_CASE("RealE parse and print round-trip") {
  CHECK(RealE::parse("err").is_err());
  CHECK(RealE::parse("3/2") == RealE(Rat(BigInt(3), BigInt(2))));
  CHECK(RealE::parse("-1.5").to_string() == "-3/2");
  CHECK(RealE::error().to_string() == "err");
}
