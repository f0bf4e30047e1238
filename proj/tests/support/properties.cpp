#include "properties.hpp"

#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace paperfold::testing {

namespace {

// fixed seed: every run samples the same points
constexpr std::uint64_t kSeed = 20240611;

bool same_point(const ScarTree& t, ScarPoint a, ScarPoint b) {
    a = t.normalize(a);
    b = t.normalize(b);
    if (a.at_node() || b.at_node()) return a.at_node() && b.at_node() && a.node == b.node;
    return a.edge == b.edge && a.offset == b.offset;
}

std::vector<int> lambda_nodes(const ScarTree& t) {
    std::vector<int> out;
    for (std::size_t v = 0; v < t.nodes.size(); ++v)
        if (t.nodes[v].lambda) out.push_back(static_cast<int>(v));
    return out;
}

}  // namespace

PropertyResult prop_metric_axioms() {
    PropertyResult res{"metric axioms on random triples"};
    std::mt19937_64 rng(kSeed);
    int triples = 0;
    for (const char* name : {"seq", "cantor"}) {
        auto s = builtin_example(name);
        auto fs = truncate_items(s, Rat(1, 64));
        for (TailMode m : {TailMode::COLLAPSE, TailMode::FREE}) {
            auto t = build_scar(fs, m);
            auto pts = lattice_params(s.mp, 1024, 3 * 100, rng);
            for (std::size_t i = 0; i + 2 < pts.size(); i += 3) {
                ScarPoint x = t.locate({0, pts[i]}), y = t.locate({0, pts[i + 1]}), z = t.locate({0, pts[i + 2]});
                Rat xy = scar_distance(t, x, y), yx = scar_distance(t, y, x);
                Rat xz = scar_distance(t, x, z), yz = scar_distance(t, y, z);
                ++triples;
                std::ostringstream why;
                if (scar_distance(t, x, x) != 0) why << "d(x,x) != 0";
                else if (xy != yx) why << "asymmetric";
                else if (xz > xy + yz) why << "triangle inequality";
                else if ((xy == 0) != same_point(t, x, y)) why << "d = 0 without identity";
                else if (xy < 0) why << "negative";
                if (!why.str().empty()) {
                    res.ok = false;
                    res.detail = std::string(name) + " " + tail_mode_name(m) + ": " + why.str() + " at " +
                                 rat_str(pts[i]) + ", " + rat_str(pts[i + 1]) + ", " + rat_str(pts[i + 2]);
                    return res;
                }
            }
        }
    }
    res.detail = std::to_string(triples) + " triples";
    return res;
}

PropertyResult prop_dendrite_euler() {
    PropertyResult res{"dendrite acyclicity and Euler characteristic 2"};
    int count = 0;
    for (const auto& f : plain_corpus()) {
        auto s = load_data(f);
        for (const Rat& eps : {Rat(1, 16), Rat(1, 64), Rat(1, 256)}) {
            auto fs = truncate_items(s, eps);
            auto t = build_scar(fs, TailMode::COLLAPSE);
            int chi = euler_check(s, fs);
            ++count;
            if (!t.acyclic || !t.connected || chi != 2) {
                res.ok = false;
                res.detail = f + " at item bound " + rat_str(eps) + ": acyclic=" + std::to_string(t.acyclic) +
                             " connected=" + std::to_string(t.connected) + " chi=" + std::to_string(chi);
                return res;
            }
        }
    }
    res.detail = std::to_string(count) + " truncations";
    return res;
}

PropertyResult prop_cm_lower_bound() {
    PropertyResult res{"cm >= 2r"};
    std::mt19937_64 rng(kSeed + 1);
    int checks = 0;
    for (const char* name : {"seq", "cantor"}) {
        auto s = builtin_example(name);
        auto fs = truncate_items(s, Rat(1, 256));
        auto t = build_scar(fs, TailMode::COLLAPSE);
        auto lam = lambda_nodes(t);
        auto pts = lattice_params(s.mp, 4096, 40, rng);
        std::uniform_int_distribution<long> rr(1, 512);
        auto check = [&](bool use_lambda, const ScarPoint& q, const Rat& r, const std::string& what) {
            auto ci = ball_component(t, use_lambda, q, r);
            ++checks;
            if (ci.cm < 2 * r) {
                res.ok = false;
                res.detail = std::string(name) + " " + what + " r=" + rat_str(r) + " cm=" + rat_str(ci.cm);
            }
        };
        for (std::size_t i = 0; i < lam.size() && res.ok; i += std::max<std::size_t>(1, lam.size() / 8))
            for (int k = 0; k < 8 && res.ok; ++k) check(true, {lam[i], -1, 0}, frac(rr(rng), 1024), "lambda");
        for (const auto& p : pts) {
            if (!res.ok) break;
            check(false, t.locate({0, p}), frac(rr(rng), 1024), "point " + rat_str(p));
        }
    }
    if (res.ok) res.detail = std::to_string(checks) + " balls";
    return res;
}

PropertyResult prop_iota_upper_bound() {
    PropertyResult res{"iota <= M/2r"};
    int checks = 0;
    for (const char* name : {"seq", "cantor"}) {
        auto s = builtin_example(name);
        TruncationCache cache(s);
        auto rp = resolve_params(cache, std::nullopt, std::nullopt);
        Rat a = rp.cp.rbar / 64, b = rp.cp.rbar;
        for (bool lambda_base : {true, false}) {
            // a declared singular point, or a planar point on the top side
            BoundaryParam q{0, lambda_base ? (std::string(name) == "seq" ? Rat(5, 8) : Rat(2, 3)) : Rat(9, 4)};
            auto prof = goodness(cache, lambda_base, q, a, b, rp.cp.M);
            for (int i = 1; i < 200; ++i) {
                Rat r = a + (b - a) * i / 200;
                long double io = prof.iota(r);
                long double bound = to_ldouble(rp.cp.M / (2 * r));
                ++checks;
                if (io > bound * (1 + 1e-15L)) {
                    res.ok = false;
                    res.detail = std::string(name) + " r=" + rat_str(r) + " iota=" + dec12(static_cast<double>(io)) +
                                 " bound=" + dec12(static_cast<double>(bound));
                    return res;
                }
            }
        }
    }
    res.detail = std::to_string(checks) + " samples";
    return res;
}

PropertyResult prop_ncc_nonincreasing() {
    PropertyResult res{"ncc nonincreasing in r"};
    int checks = 0;
    for (const char* name : {"seq", "cantor"}) {
        auto s = builtin_example(name);
        auto fs = truncate_items(s, Rat(1, 729));
        auto mt = merge_tree(build_scar(fs, TailMode::COLLAPSE));
        int prev = std::numeric_limits<int>::max();
        for (int i = 1; i <= 2000; ++i) {
            Rat r = frac(i, 4000);
            int n = mt.ncc(r);
            ++checks;
            if (n > prev) {
                res.ok = false;
                res.detail = std::string(name) + " ncc rises at r=" + rat_str(r);
                return res;
            }
            prev = n;
        }
        for (const Rat& r : mt.radii()) {
            ++checks;
            if (mt.ncc(r) < mt.ncc(r + Rat(1, 1 << 30))) {
                res.ok = false;
                res.detail = std::string(name) + " ncc rises past merge radius " + rat_str(r);
                return res;
            }
        }
    }
    res.detail = std::to_string(checks) + " radii";
    return res;
}

namespace {

struct ModulusFixture {
    FoldingScheme s = builtin_example("cantor");
    TruncationCache cache{s};
    ModulusParams mp = modulus_params(Rat(1, 6), Rat(1, 4), s.mp.boundary_length);
};

}  // namespace

PropertyResult prop_rho_increasing() {
    PropertyResult res{"rho_q strictly increasing with rho_q(0) = 0"};
    ModulusFixture f;
    int checks = 0;
    Rat top = f.mp.delta / 2;
    Rat tmin = top / 256;
    for (const auto& [t, h] : std::vector<std::pair<Rat, Rat>>{{Rat(2, 3), Rat(0)}, {Rat(3, 2), Rat(0)},
                                                               {Rat(1, 3), top / 8}}) {
        auto g = point_geom(f.cache, Rat(1, 64), f.mp, {0, t}, h);
        LocalModulus lm(f.cache, f.mp, g, tmin);
        if (!std::isinf(lm.rho(Rat(0)).log_rho) || lm.rho(Rat(0)).log_rho > 0) {
            res.ok = false;
            res.detail = "rho(0) != 0 at t=" + rat_str(t);
            return res;
        }
        long double prev = -std::numeric_limits<long double>::infinity();
        for (int i = 0; i <= 64; ++i) {
            Rat x = tmin + (top - tmin) * i / 64;
            long double v = lm.rho(x).log_rho;
            ++checks;
            if (!(v > prev)) {
                res.ok = false;
                res.detail = "not increasing at point " + rat_str(t) + " height " + rat_str(h) + " t=" + rat_str(x);
                return res;
            }
            prev = v;
        }
    }
    res.detail = std::to_string(checks) + " samples";
    return res;
}

PropertyResult prop_rho_case_continuity() {
    PropertyResult res{"rho continuous across t = h_q"};
    // |ln rho(h(1+e)) - ln rho(h(1-e))| for e = 1e-6; rho is Lipschitz away from 0, so the jump must vanish with e
    const long double slack = 1e-4L;
    ModulusFixture f;
    Rat top = f.mp.delta / 2;
    long double worst = 0;
    for (const Rat& t : {Rat(1, 3), Rat(3, 2), Rat(5, 2), Rat(2, 3)}) {
        for (const Rat& h : {top / 4, top / 16}) {
            auto g = point_geom(f.cache, Rat(1, 64), f.mp, {0, t}, h);
            LocalModulus lm(f.cache, f.mp, g, h / 2);
            Rat e(1, 1000000);
            long double lo = lm.rho(h * (1 - e)).log_rho, mid = lm.rho(h).log_rho, hi = lm.rho(h * (1 + e)).log_rho;
            long double jump = std::max(std::fabs(mid - lo), std::fabs(hi - mid));
            worst = std::max(worst, jump);
            if (jump > slack) {
                res.ok = false;
                res.detail = "jump " + dec12(static_cast<double>(jump)) + " at point " + rat_str(t) + " height " + rat_str(h);
                return res;
            }
        }
    }
    res.detail = "largest jump " + dec12(static_cast<double>(worst)) + " (slack 1e-4)";
    return res;
}

PropertyResult prop_mcmullen_flags() {
    PropertyResult res{"McMullen conditions for cantor levels 1..5"};
    auto s = builtin_example("cantor");
    TruncationCache cache(s);
    auto rp = resolve_params(cache, std::nullopt, std::nullopt);
    auto sys = mcmullen_system(cache, rp.cp, 1, 5);
    // eps caps rechecked exactly here
    bool caps = true;
    for (const auto& l : sys.levels) {
        // cap = min(r_{k+1} / (2^{k-1} M), (r_k - r_{k+1}) / 3)
        Rat pow2 = 1;
        for (int k = 1; k < l.k; ++k) pow2 *= 2;
        Rat cap = rat_min(l.r_inner / (pow2 * rp.cp.M), (l.r_outer - l.r_inner) / 3);
        for (const auto& c : l.classes)
            if (!(c.eps_ok && c.eps > 0 && c.eps <= cap && c.inner == l.r_inner + c.eps && c.outer == l.r_outer - c.eps))
                caps = false;
    }
    res.ok = sys.cond_a && sys.cond_b && sys.cond_c && sys.caps_ok && caps;
    res.detail = std::string("a=") + (sys.cond_a ? "true" : "false") + " b=" + (sys.cond_b ? "true" : "false") +
                 " c=" + (sys.cond_c ? "true" : "false") + " caps=" + (sys.caps_ok && caps ? "true" : "false");
    return res;
}

std::vector<PropertyResult> all_properties() {
    return {prop_metric_axioms(),  prop_dendrite_euler(), prop_cm_lower_bound(), prop_iota_upper_bound(),
            prop_ncc_nonincreasing(), prop_rho_increasing(), prop_rho_case_continuity(), prop_mcmullen_flags()};
}

}  // namespace paperfold::testing
