#include <doctest.h>

#include "crlp/rational.hpp"

#include <random>

using namespace crlp;

namespace {

Rational rand_rational(std::mt19937& rng) {
    std::uniform_int_distribution<long long> num(-50, 50);
    std::uniform_int_distribution<long long> den(1, 20);
    return Rational(num(rng), den(rng));
}

}  // namespace

TEST_SUITE("rational") {

TEST_CASE("canonical form") {
    Rational half(2, 4);
    CHECK(half.num() == 1);
    CHECK(half.den() == 2);

    Rational neg(1, -2);
    CHECK(neg.num() == -1);
    CHECK(neg.den() == 2);

    Rational zero(0, 7);
    CHECK(zero.num() == 0);
    CHECK(zero.den() == 1);
}

TEST_CASE("arithmetic examples") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(-2, 3) * Rational(3, 4) == Rational(-1, 2));
    CHECK_THROWS_AS(Rational(1, 8) / Rational(0), std::domain_error);
    CHECK_THROWS_AS(Rational(BigInt(1), BigInt(0)), std::domain_error);
}

TEST_CASE("pow2") {
    CHECK(Rational::pow2(-3) == Rational(1, 8));
    CHECK(Rational::pow2(4) == Rational(16));
    CHECK(Rational::pow2(0) == Rational(1));
}

TEST_CASE("parse and print") {
    CHECK(Rational::parse("7") == Rational(7));
    CHECK(Rational::parse("-4/6") == Rational(-2, 3));
    CHECK(Rational::parse("2/-3") == Rational(-2, 3));
    CHECK(!Rational::parse("1/0"));
    CHECK(!Rational::parse("abc"));
    CHECK(!Rational::parse(""));
    CHECK(!Rational::parse("1.5"));

    CHECK(Rational(5, 6).str() == "5/6");
    CHECK(Rational(-1, 2).str() == "-1/2");
    CHECK(Rational(3).str() == "3");
}

TEST_CASE("decimal rendering truncates toward zero") {
    CHECK(Rational(1, 8).decimal(3) == "0.125");
    CHECK(Rational(-1, 3).decimal(4) == "-0.3333");
    CHECK(Rational(7, 5).decimal(0) == "1");
    CHECK(Rational(9, 8).decimal(5) == "1.12500");
}

TEST_CASE("field laws, sampled") {
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        Rational a = rand_rational(rng), b = rand_rational(rng), c = rand_rational(rng);
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        if (!b.is_zero())
            CHECK(a / b * b == a);
    }
}

TEST_CASE("interval invariant and arithmetic") {
    CHECK_THROWS_AS(Interval(Rational(1), Rational(0)), std::invalid_argument);
    Interval i(Rational(-1, 2), Rational(1, 2));
    CHECK(i.width() == Rational(1));
    CHECK(i.mid() == Rational(0));
    CHECK(i.contains(Rational(1, 4)));
    CHECK(!i.contains(Rational(2, 3)));

    Interval sum = i + Interval::point(Rational(1));
    CHECK(sum.lo == Rational(1, 2));
    CHECK(sum.hi == Rational(3, 2));

    Interval scaled = i * Rational(-2);
    CHECK(scaled.lo == Rational(-1));
    CHECK(scaled.hi == Rational(1));

    CHECK(Interval::point(Rational(5)).is_point());
    CHECK(!i.is_point());
}

}  // TEST_SUITE
