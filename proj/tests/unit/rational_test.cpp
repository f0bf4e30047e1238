#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace paperfold;
using paperfold::testing::frac;

TEST_SUITE("rational") {
    TEST_CASE("parse accepts fractions, integers and finite decimals") {
        CHECK(parse_rat("3/4") == frac(3, 4));
        CHECK(parse_rat("-6/8") == frac(-3, 4));
        CHECK(parse_rat("7") == Rat(7));
        CHECK(parse_rat("0.125") == frac(1, 8));
        CHECK(parse_rat("-2.5") == frac(-5, 2));
        // leading zeros are decimal, not octal
        CHECK(parse_rat("010") == Rat(10));
        CHECK(parse_rat("3/010") == frac(3, 10));
        CHECK(parse_rat("0.0625") == frac(1, 16));
    }

    TEST_CASE("parse rejects junk") {
        Rat r;
        for (const char* bad : {"", "1/0", "abc", "1/2/3", "0.1.2", "1e5", " 1", "1/"}) {
            INFO(bad);
            CHECK_FALSE(try_parse_rat(bad, r));
            CHECK_THROWS(parse_rat(bad));
        }
    }

    TEST_CASE("rat_str is canonical") {
        CHECK(rat_str(frac(2, 4)) == "1/2");
        CHECK(rat_str(Rat(5)) == "5");
        CHECK(rat_str(frac(-9, 12)) == "-3/4");
        CHECK(parse_rat(rat_str(frac(355, 113))) == frac(355, 113));
    }

    TEST_CASE("dec12 prints twelve significant digits") {
        CHECK(dec12(1.0 / 3.0) == "0.333333333333");
        CHECK(dec12(frac(2, 3)) == "0.666666666667");
        CHECK(std::stod(dec12(std::log(22.0 / 19.0))) == doctest::Approx(std::log(22.0 / 19.0)).epsilon(1e-12));
    }

    TEST_CASE("floor_dyadic is the largest dyadic below the value") {
        for (double v : {0.1, 1.0 / 3.0, 2.718281828, 0.5}) {
            for (int bits : {4, 10, 30}) {
                Rat f = floor_dyadic(v, bits);
                Rat scale = 1;
                for (int i = 0; i < bits; ++i) scale *= 2;
                Rat n = f * scale;
                CHECK(n.get_den() == 1);
                CHECK(to_double(f) <= v);
                CHECK(to_double(f + 1 / scale) > v);
            }
        }
    }

    TEST_CASE("rat_sqrt is exact on squares only") {
        Rat out;
        CHECK(rat_sqrt(frac(9, 16), out));
        CHECK(out == frac(3, 4));
        CHECK_FALSE(rat_sqrt(frac(1, 2), out));
        CHECK_FALSE(rat_sqrt(Rat(-4), out));
    }

    TEST_CASE("min, max, abs and hashing") {
        CHECK(rat_min(frac(1, 3), frac(1, 4)) == frac(1, 4));
        CHECK(rat_max(frac(1, 3), frac(1, 4)) == frac(1, 3));
        CHECK(rat_abs(frac(-1, 7)) == frac(1, 7));
        CHECK(RatHash{}(frac(2, 4)) == RatHash{}(frac(1, 2)));
    }
}
