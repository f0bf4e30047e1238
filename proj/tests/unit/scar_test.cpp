#include "../support/oracles.hpp"

#include <doctest.h>

using namespace paperfold;
using namespace paperfold::testing;

namespace {

const char* kPillowcase =
    "polygon 0 0 0 1 0 1 1 0 1\n"
    "pair 0 0 1/2 1/2 1\n"
    "pair 0 1 3/2 3/2 2\n"
    "pair 0 2 5/2 5/2 3\n"
    "pair 0 3 7/2 7/2 4\n";

Rat tree_dist(const ScarTree& t, const Rat& x, const Rat& y) {
    return scar_distance(t, t.locate({0, x}), t.locate({0, y}));
}

Rat arc_dist(const Rat& x, const Rat& y, const Rat& L) {
    Rat d = rat_abs(x - y);
    return rat_min(d, L - d);
}

}  // namespace

TEST_SUITE("scar") {
    TEST_CASE("finite schemes match the dense boundary graph exactly") {
        std::mt19937_64 rng(7);
        std::vector<FoldingScheme> schemes{load_data("single_fold.pfs"), load_data("triangle.pfs"),
                                           parse_scheme(kPillowcase)};
        for (const auto& s : schemes) {
            auto fs = truncate(s, Rat(1, 2));
            auto t = build_scar(fs, TailMode::COLLAPSE);
            REQUIRE(t.acyclic);
            REQUIRE(t.connected);
            BoundaryGraphOracle oracle(s.mp, fs.pairings, 64);
            auto pts = lattice_params(s.mp, 64, 120, rng);
            for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
                INFO(rat_str(pts[i]) << " " << rat_str(pts[i + 1]));
                CHECK(tree_dist(t, pts[i], pts[i + 1]) == oracle.distance(pts[i], pts[i + 1]));
            }
        }
    }

    TEST_CASE("single fold gives a segment of length 2") {
        auto s = load_data("single_fold.pfs");
        auto t = build_scar(truncate(s, Rat(1, 2)), TailMode::COLLAPSE);
        CHECK(tree_dist(t, Rat(0), Rat(2)) == 2);
        CHECK(tree_dist(t, frac(1, 2), frac(7, 2)) == 0);
        CHECK(tree_dist(t, Rat(0), Rat(4)) == 0);
    }

    TEST_CASE("pillowcase scar is a 4-star with arms of length 1/2") {
        auto s = parse_scheme(kPillowcase);
        auto fs = truncate(s, Rat(1, 2));
        auto t = build_scar(fs, TailMode::COLLAPSE);
        int hubs = 0, leaves = 0;
        for (std::size_t v = 0; v < t.nodes.size(); ++v) {
            if (t.degree(static_cast<int>(v)) == 4) ++hubs;
            if (t.degree(static_cast<int>(v)) == 1) ++leaves;
        }
        CHECK(hubs == 1);
        CHECK(leaves == 4);
        for (const Rat& a : {frac(1, 2), frac(3, 2), frac(5, 2), frac(7, 2)})
            for (const Rat& b : {frac(1, 2), frac(3, 2), frac(5, 2), frac(7, 2)}) CHECK(tree_dist(t, a, b) == (a == b ? 0 : 1));
        CHECK(tree_dist(t, Rat(0), Rat(3)) == 0);
        CHECK(euler_check(s, fs) == 2);
    }

    TEST_CASE("seq distances from the truncation sandwich") {
        auto s = builtin_example("seq");
        auto fs = truncate(s, Rat(1, 64));
        REQUIRE(fs.tail_measure < Rat(1, 32));
        auto c = build_scar(fs, TailMode::COLLAPSE), f = build_scar(fs, TailMode::FREE);
        auto d = distance(c, f, {0, frac(1, 2)}, {0, frac(5, 8)});
        CHECK(d.lo == frac(1, 8));
        CHECK(d.hi == frac(1, 8));
        auto e = distance(c, f, {0, frac(13, 16)}, {0, frac(3, 4)});
        CHECK(e.lo <= frac(1, 16));
        CHECK(frac(1, 16) <= e.hi);
        auto z = distance(c, f, {0, frac(3, 7)}, {0, frac(3, 7)});
        CHECK(z.lo == 0);
        CHECK(z.hi == 0);
    }

    TEST_CASE("cantor: E_0 embeds isometrically") {
        auto s = builtin_example("cantor");
        auto fs = truncate(s, Rat(1, 54));
        auto c = build_scar(fs, TailMode::COLLAPSE), f = build_scar(fs, TailMode::FREE);
        auto d = distance(c, f, {0, frac(2, 3)}, {0, Rat(1)});
        CHECK(d.lo <= frac(1, 3));
        CHECK(frac(1, 3) <= d.hi);
    }

    TEST_CASE("sandwich ordering and shrinking gap") {
        std::mt19937_64 rng(11);
        for (const char* name : {"seq", "cantor"}) {
            auto s = builtin_example(name);
            auto pts = lattice_params(s.mp, 1024, 120, rng);
            Rat prev = -1, first = 0, last = 0;
            for (const Rat& eps : {Rat(1, 16), Rat(1, 64), Rat(1, 256)}) {
                auto fs = truncate_items(s, eps);
                auto c = build_scar(fs, TailMode::COLLAPSE), f = build_scar(fs, TailMode::FREE);
                Rat gap = 0;
                for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
                    auto d = distance(c, f, {0, pts[i]}, {0, pts[i + 1]});
                    CHECK(d.lo <= d.hi);
                    gap += d.width();
                }
                INFO(name << " eps " << rat_str(eps) << " gap " << rat_str(gap));
                if (prev >= 0) CHECK(gap <= prev);
                if (prev < 0) first = gap;
                prev = last = gap;
            }
            CHECK(last < first);
        }
    }

    TEST_CASE("the free tree does not expand boundary arc length") {
        std::mt19937_64 rng(13);
        for (const char* name : {"seq", "cantor"}) {
            auto s = builtin_example(name);
            auto f = build_scar(truncate_items(s, Rat(1, 64)), TailMode::FREE);
            auto pts = lattice_params(s.mp, 512, 200, rng);
            for (std::size_t i = 0; i + 1 < pts.size(); i += 2)
                CHECK(tree_dist(f, pts[i], pts[i + 1]) <= arc_dist(pts[i], pts[i + 1], s.mp.length(0)));
        }
    }

    TEST_CASE("point classification") {
        auto seq = build_scar(truncate(builtin_example("seq"), Rat(1, 64)), TailMode::COLLAPSE);
        auto a = classify_point(seq, BoundaryParam{0, frac(13, 16)});
        CHECK(a.kind == PointKind::VERTEX);
        CHECK(a.valence == 1);
        CHECK(classify_point(seq, BoundaryParam{0, Rat(0)}).kind == PointKind::DECLARED_SINGULAR);
        auto p = classify_point(seq, BoundaryParam{0, frac(9, 4)});
        CHECK(p.kind == PointKind::PLANAR);
        CHECK(p.valence == 2);

        auto cantor = build_scar(truncate(builtin_example("cantor"), Rat(1, 54)), TailMode::COLLAPSE);
        auto z = classify_point(cantor, BoundaryParam{0, frac(5, 18)});
        CHECK(z.kind == PointKind::VERTEX);
        CHECK(z.valence == 3);
        CHECK(std::string(point_kind_name(PointKind::TRUNCATION_UNKNOWN)) == "TRUNCATION_UNKNOWN");
    }

    TEST_CASE("Euler characteristic") {
        for (const auto& f : plain_corpus()) {
            auto s = load_data(f);
            CHECK(euler_check(s, truncate_items(s, Rat(1, 32))) == 2);
        }
        CHECK(euler_check(builtin_example("cantor"), truncate_depth(builtin_example("cantor"), 3)) == 2);
        auto torus = load_data("torus.pfs");
        auto fs = truncate(torus, Rat(1, 2));
        CHECK_THROWS(euler_check(torus, fs));
        CHECK(euler_characteristic(build_scar(fs, TailMode::COLLAPSE, false)) == 0);
    }

    TEST_CASE("seq ball components at the point s") {
        auto fs = truncate(builtin_example("seq"), Rat(1, 256));
        for (TailMode m : {TailMode::COLLAPSE, TailMode::FREE}) {
            auto t = build_scar(fs, m);
            ScarPoint s = t.normalize(t.locate({0, Rat(0)}));
            auto c1 = ball_component(t, true, s, frac(1, 10));
            CHECK(c1.cm == frac(6, 5));
            CHECK(c1.cn == 1);
            auto c2 = ball_component(t, true, s, frac(1, 20));
            CHECK(c2.cm == frac(1, 2) + 4 * frac(1, 20));
            CHECK(c2.cn == 2);
        }
    }
}
