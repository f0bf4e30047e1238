#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>

using namespace paperfold;
using namespace paperfold::testing;

namespace {

// mantissa and decimal exponent of exp(v), independent of the library
std::pair<long double, long> exp10_split(long double v) {
    long double l = v / std::log(10.0L);
    long double e = std::floor(l);
    return {std::pow(10.0L, l - e), static_cast<long>(e)};
}

std::pair<long double, long> parse_decimal(const std::string& s) {
    auto epos = s.find('e');
    long double m = std::strtold(s.substr(0, epos).c_str(), nullptr);
    long e = epos == std::string::npos ? 0 : std::strtol(s.c_str() + epos + 1, nullptr, 10);
    while (m >= 10) {
        m /= 10;
        ++e;
    }
    while (m > 0 && m < 1) {
        m *= 10;
        --e;
    }
    return {m, e};
}

}  // namespace

TEST_SUITE("modulus") {
    TEST_CASE("delta, M and kappa") {
        auto a = modulus_params(frac(1, 6), frac(1, 4), Rat(4));
        CHECK(a.delta == frac(1, 192));
        CHECK(a.M == frac(2, 15));
        CHECK(a.log_kappa == doctest::Approx(std::log(2.0) + 48.0 * 4 * 192).epsilon(1e-15));
        auto b = modulus_params(Rat(1), Rat(1), Rat(4));
        CHECK(b.delta == frac(1, 8));
        CHECK(b.M == frac(1, 5));
        // formula evaluated directly for a spread of inputs
        for (const auto& [r, h, L] : std::vector<std::tuple<Rat, Rat, Rat>>{
                 {frac(1, 3), frac(1, 2), Rat(4)}, {frac(2, 5), frac(1, 7), Rat(12)}, {Rat(3), Rat(2), Rat(1)}}) {
            auto p = modulus_params(r, h, L);
            CHECK(p.delta == rat_min(rat_min(r, h), 2 * r * h / L) / 4);
            CHECK(p.M == rat_min(r / h, h / r) / 5);
        }
        CHECK(modulus_params(Rat(1), Rat(1), Rat(4), Rat(2)).R == Rat(2));
    }

    TEST_CASE("exp_decimal agrees with the long double exponential") {
        for (long double v : {0.0L, 1.0L, -3.5L, 10.0L, 50.0L, -42.0L}) {
            auto [m, e] = parse_decimal(exp_decimal(v));
            long double got = m * std::pow(10.0L, static_cast<long double>(e));
            CHECK(static_cast<double>(got) == doctest::Approx(static_cast<double>(std::exp(v))).epsilon(1e-11));
        }
        for (long double v : {1e5L, -1e5L, 36858.7L, 1e7L}) {
            auto [m, e] = parse_decimal(exp_decimal(v));
            auto [om, oe] = exp10_split(v);
            INFO(exp_decimal(v));
            CHECK(e == oe);
            CHECK(static_cast<double>(m) == doctest::Approx(static_cast<double>(om)).epsilon(1e-9));
        }
    }

    TEST_CASE("geometry functions and case labels") {
        auto mp = modulus_params(frac(1, 6), frac(1, 4), Rat(4));
        auto g = geometry_functions(frac(1, 1000), Rat(0), mp, frac(1, 2000));
        CHECK(g.xi >= 0);
        CHECK(g.mu >= 0);
        CHECK(rho_case(frac(1, 1000), Rat(0), mp, frac(1, 2000)).front() == 'B');
        CHECK(rho_case(Rat(0), frac(1, 10), mp, frac(1, 2000)).front() == 'A');
        for (const Rat& t : {frac(1, 400), frac(1, 4000), frac(1, 40000)})
            for (const Rat& h : {Rat(0), frac(1, 800), frac(1, 8000)})
                for (const Rat& d : {Rat(0), frac(1, 50), frac(1, 5)}) {
                    auto c = rho_case(h, d, mp, t);
                    CHECK((c.front() == 'A' || c.front() == 'B' || c.front() == 'C'));
                }
    }

    TEST_CASE("global table on cantor") {
        auto s = builtin_example("cantor");
        TruncationCache cache(s);
        auto mp = modulus_params(frac(1, 6), frac(1, 4), s.mp.boundary_length);
        GridControls gc;
        gc.t_count = 4;
        gc.max_refinements = 0;
        gc.heights = 1;
        auto p = rho_global(cache, mp, gc);
        REQUIRE(p.rows.size() == 4);
        Rat t = mp.delta / 2;
        long double prev = std::numeric_limits<long double>::infinity();
        for (const auto& r : p.rows) {
            CHECK(r.t == t);
            t /= 2;
            CHECK(r.log_rho_bar >= r.log_rho_hat);
            CHECK(r.log_rho_bar >= mp.log_kappa + std::log(to_ldouble(r.t)) - 1e-9L);
            CHECK(r.log_rho_bar < prev);  // decreasing as t shrinks
            prev = r.log_rho_bar;
            CHECK((r.branch == "local" || r.branch == "lipschitz"));
        }
        // short tables start the singular-base profiles at coarse truncations
        for (int tc : {1, 2, 3}) {
            GridControls g2 = gc;
            g2.t_count = tc;
            TruncationCache fresh(s);
            CHECK_NOTHROW(rho_global(fresh, mp, g2));
        }
        // threads do not change the table
        gc.workers = 4;
        TruncationCache cache2(s);
        auto q = rho_global(cache2, mp, gc);
        REQUIRE(q.rows.size() == p.rows.size());
        for (std::size_t i = 0; i < p.rows.size(); ++i) {
            CHECK(q.rows[i].log_rho_hat == p.rows[i].log_rho_hat);
            CHECK(q.rows[i].log_rho_bar == p.rows[i].log_rho_bar);
        }
    }
}
