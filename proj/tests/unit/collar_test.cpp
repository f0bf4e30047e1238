#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace paperfold;
using namespace paperfold::testing;

namespace {

Multipolygon unit_square() { return make_multipolygon({{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}); }

}  // namespace

TEST_SUITE("collar") {
    TEST_CASE("unit square: the automatic height sits just below 1/4") {
        auto sq = unit_square();
        // tops have length 1 - 2h, so the half-base condition binds exactly at h = 1/4
        CHECK(collar_conditions(sq, frac(1, 4)));
        CHECK_FALSE(collar_conditions(sq, frac(1, 4) + frac(1, 1 << 20)));
        auto c = build_collar(sq);
        CHECK_FALSE(c.from_override);
        CHECK(c.supremum <= frac(1, 4));
        CHECK(c.supremum >= frac(1, 4) - frac(1, 1 << 20));
        CHECK(c.hbar == c.supremum * frac(9, 10));
        CHECK(collar_conditions(sq, c.hbar));
        std::string why;
        CHECK_FALSE(collar_conditions(sq, 2 * c.supremum, &why));
        CHECK_FALSE(why.empty());
        for (const auto& tz : c.trapezoids) {
            CHECK(tz.base_length == 1);
            CHECK(tz.top_length == 1 - 2 * c.hbar);
        }
    }

    TEST_CASE("overrides") {
        auto c = build_collar(unit_square(), frac(1, 4));
        CHECK(c.from_override);
        CHECK(c.hbar == frac(1, 4));
        auto tri = load_data("triangle.pfs");
        CHECK_THROWS_AS(build_collar(tri.mp, Rat(10)), CollarError);
        CHECK_THROWS_AS(build_collar(unit_square(), Rat(0)), CollarError);
    }

    TEST_CASE("collar points") {
        auto c = build_collar(unit_square(), frac(1, 4));
        for (const Rat& t : {Rat(0), frac(1, 3), frac(5, 2), frac(7, 2)}) {
            auto p = collar_point(c, {0, t}, Rat(0));
            auto b = c.mp.polygons[0].point_at(t);
            CHECK(p.plane.x == b.x);
            CHECK(p.plane.y == b.y);
        }
        auto mid = collar_point(c, {0, frac(1, 2)}, frac(1, 8));
        CHECK(mid.plane.x == frac(1, 2));
        CHECK(mid.plane.y == frac(1, 8));
        // sliding down a leaf keeps the boundary parameter and lands on the boundary
        auto r = retract(c, {0, frac(1, 3)}, frac(1, 8), Rat(0));
        CHECK(r.t.t == frac(1, 3));
        auto b = c.mp.polygons[0].point_at(frac(1, 3));
        CHECK(r.plane.x == b.x);
        CHECK(r.plane.y == b.y);
        CHECK(c.height_at(frac(1, 6), frac(1, 6)) == frac(1, 8));
    }

    TEST_CASE("Grotzsch bound") {
        CHECK(grotzsch_bound(1, {0, 0}, {8, 0}) == doctest::Approx(0.0));
        double d = 8 * std::exp(-2 * std::numbers::pi);
        CHECK(grotzsch_bound(1, {0, 0}, {0, d}) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(grotzsch_bound(2, {1, 1}, {1, 3}) == doctest::Approx(std::log(8.0) / (2 * std::numbers::pi)));
        CHECK_THROWS_AS(grotzsch_bound(1, {1, 1}, {1, 1}), CollarError);
    }

    TEST_CASE("disk boundaries around s") {
        auto s = builtin_example("seq");
        TruncationCache cache(s);
        auto rp = resolve_params(cache, std::nullopt, std::nullopt);
        const auto& e = cache.at_items(Rat(1, 256));
        auto d1 = disk_boundary(e.free, rp.collar, true, {0, Rat(0)}, frac(1, 10), rp.cp.rbar);
        CHECK(d1.n == 1);
        CHECK(d1.closed);
        auto d2 = disk_boundary(e.free, rp.collar, true, {0, Rat(0)}, frac(1, 20), rp.cp.rbar);
        CHECK(d2.n == 2);
        CHECK(d2.closed);
        CHECK(d2.height == rp.collar.height_at(frac(1, 20), rp.cp.rbar));
        auto planar = disk_boundary(e.free, rp.collar, false, {0, frac(9, 4)}, frac(1, 100), rp.cp.rbar);
        CHECK(planar.n == 2);
        CHECK(planar.closed);
    }

    TEST_CASE("annulus module bound is the scaled window integral") {
        auto s = builtin_example("cantor");
        TruncationCache cache(s);
        Rat M = goodness_constant(frac(1, 6), frac(1, 4));
        Rat a(1, 54), b(1, 18);
        auto prof = goodness(cache, true, {0, frac(2, 3)}, a, b, M);
        long double m = annulus_module_bound(prof, a, b);
        CHECK(m == integral_lower_bound(prof, a, b));
        CHECK(m >= to_ldouble(M) * std::log(39.0L / 25.0L) / 7 - 1e-12L);
        CHECK_THROWS_AS(annulus_module_bound(prof, b, a), CollarError);
    }

    TEST_CASE("lift of planar and vertex points") {
        auto t = build_scar(truncate(builtin_example("seq"), Rat(1, 64)), TailMode::FREE);
        CHECK(lift(t, t.locate({0, frac(9, 4)})).size() == 2);
        CHECK(lift(t, t.locate({0, frac(13, 16)})).size() == 1);
    }
}
