#include "paperfold/modulus.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <thread>

namespace paperfold {

ModulusParams modulus_params(const Rat& rbar, const Rat& hbar, const Rat& boundary_length, const std::optional<Rat>& R) {
    if (rbar <= 0 || hbar <= 0 || boundary_length <= 0) throw SchemeError("modulus parameters must be positive");
    if (R && *R <= 0) throw SchemeError("R must be positive");
    ModulusParams mp;
    mp.rbar = rbar;
    mp.hbar = hbar;
    mp.boundary_length = boundary_length;
    mp.delta = rat_min(rat_min(rbar, hbar), 2 * rbar * hbar / boundary_length) / 4;
    mp.M = goodness_constant(rbar, hbar);
    mp.log_kappa = std::log(2.0L) + 48 * to_ldouble(boundary_length / mp.delta);
    mp.R = R;
    return mp;
}

PointGeom point_geom(TruncationCache& cache, const Rat& max_item, const ModulusParams& mp, const BoundaryParam& t,
                     const Rat& h) {
    if (h < 0 || h > mp.delta / 2) throw SchemeError("height " + rat_str(h) + " outside [0, delta/2]");
    const auto& e = cache.at_items(max_item);
    PointGeom g;
    g.t = t;
    g.h = h;
    g.max_item = max_item;
    g.psi = e.free.normalize(e.free.locate(t));
    // a singular point hidden inside a free gap is handled through the sandwich interval instead
    g.in_lambda = e.free.declared_singular(t) && g.psi.at_node() && e.free.nodes[g.psi.node].lambda;
    auto nearest = [&](const ScarTree& tree, int* arg) {
        ScarPoint sp = tree.normalize(tree.locate(t));
        auto dist = point_distances(tree, sp, tree.total_measure);
        std::optional<Rat> best;
        for (const auto& [n, d] : dist)
            if (tree.nodes[n].lambda && (!best || d < *best || (d == *best && arg && n < *arg))) {
                best = d;
                if (arg) *arg = n;
            }
        if (!best) throw SchemeError("singular set is unreachable from " + rat_str(t.t));
        return *best;
    };
    int pn = -1;
    g.d_lo = nearest(e.collapse, nullptr);
    g.d_hi = nearest(e.free, &pn);
    if (g.in_lambda) {
        g.d_lo = g.d_hi = 0;
        g.p = t;
        return g;
    }
    // prefer a replicated singular breakpoint: it stays a node at every finer truncation
    const auto& fiber = e.free.nodes[pn].fiber;
    g.p = fiber.front();
    bool found = false;
    for (const auto& b : fiber)
        for (const auto& sp : e.free.singular_params)
            if (!found && sp.polygon == b.polygon && sp.t == b.t) {
                g.p = b;
                found = true;
            }
    if (!found)
        for (const auto& b : fiber)
            if (!found && e.free.declared_singular(b)) {
                g.p = b;
                found = true;
            }
    return g;
}

GeometryValues geometry_functions(const Rat& h_q, const Rat& d_q, const ModulusParams& mp, const Rat& t) {
    if (t < 0 || t > mp.delta / 2) throw SchemeError("t = " + rat_str(t) + " outside [0, delta/2]");
    GeometryValues g;
    g.xi = rat_max(h_q, t);
    g.mu = mp.rbar / (2 * mp.delta) * (g.xi + h_q);
    g.lambda = rat_min(g.mu, d_q);
    g.eta = rat_max(g.mu, d_q);
    g.alpha = rat_min(2 * d_q, mp.rbar);
    g.beta = rat_max(2 * d_q, mp.rbar);
    return g;
}

std::string rho_case(const Rat& h_q, const Rat& d_q, const ModulusParams& mp, const Rat& t) {
    if (2 * d_q >= mp.rbar) return h_q <= t ? "A1" : "A2";
    if (h_q * mp.rbar <= mp.delta * d_q) {
        if (t >= 2 * mp.delta / mp.rbar * d_q - h_q) return "C1";
        return h_q <= t ? "C2" : "C3";
    }
    return h_q <= t ? "B1" : "B2";
}

long double RhoValue::value() const { return std::exp(log_rho); }

RhoValue rho_point(const Rat& h_q, const Rat& d_q, const ModulusParams& mp, const GoodnessProfile* psi_profile,
                   const GoodnessProfile* lambda_profile, const Rat& t) {
    RhoValue v;
    v.t = t;
    v.g = geometry_functions(h_q, d_q, mp, t);
    v.branch = rho_case(h_q, d_q, mp, t);
    if (t == 0) {
        v.log_rho = -std::numeric_limits<long double>::infinity();
        return v;
    }
    Rat half_alpha = v.g.alpha / 2;
    if (v.g.lambda < half_alpha && psi_profile) v.I1 = integral_lower_bound(*psi_profile, v.g.lambda, half_alpha);
    Rat lo2 = d_q + v.g.eta;
    if (lo2 < v.g.beta && lambda_profile) v.I2 = integral_lower_bound(*lambda_profile, lo2, v.g.beta);
    const long double two_pi = 2 * std::numbers::pi_v<long double>;
    v.log_rho = std::log(to_ldouble(t)) - std::log(to_ldouble(v.g.xi)) - two_pi * (v.I1 + v.I2);
    return v;
}

namespace {

// cap: coarsest truncation allowed (p is a Lambda node only from the truncation it was chosen on)
ProfileOptions clamp_options(const Rat& a, const ModulusOptions& opt, const std::optional<Rat>& cap = std::nullopt) {
    ProfileOptions po;
    Rat start = rat_max(2 * a, opt.floor_item);
    if (cap) start = rat_min(start, *cap);
    po.start_item = start;
    int steps = 0;
    for (Rat x = start / 3; x >= opt.floor_item && steps < opt.budget; x /= 3) ++steps;
    po.budget = steps;
    return po;
}

}  // namespace

LocalModulus::LocalModulus(TruncationCache& cache, const ModulusParams& mp, const PointGeom& geom, const Rat& t_min,
                           const ModulusOptions& opt)
    : mp_(mp), geom_(geom) {
    if (t_min <= 0) throw SchemeError("t_min must be positive");
    // height 0 minimises every lower integration limit
    Rat mu_min = mp.rbar / (2 * mp.delta) * t_min;
    std::optional<Rat> lo1, hi1, lo2, hi2;
    for (const Rat& d : {geom.d_lo, geom.d_hi}) {
        if (d > 0) {
            Rat l = rat_min(mu_min, d), u = rat_min(2 * d, mp.rbar) / 2;
            if (l < u) {
                lo1 = lo1 ? rat_min(*lo1, l) : l;
                hi1 = hi1 ? rat_max(*hi1, u) : u;
            }
        }
        Rat l = d + rat_max(mu_min, d), u = rat_max(2 * d, mp.rbar);
        if (l < u) {
            lo2 = lo2 ? rat_min(*lo2, l) : l;
            hi2 = hi2 ? rat_max(*hi2, u) : u;
        }
    }
    if (lo1 && !geom.in_lambda) {
        psi_profile_ = goodness(cache, false, geom.t, *lo1, *hi1, mp.M, clamp_options(*lo1, opt));
        approximate_ = approximate_ || psi_profile_->approximate;
    }
    if (lo2) {
        lambda_profile_ = goodness(cache, true, geom.p, *lo2, *hi2, mp.M, clamp_options(*lo2, opt, geom.max_item));
        approximate_ = approximate_ || lambda_profile_->approximate;
    }
}

RhoValue LocalModulus::rho(const Rat& t, const Rat& h) const {
    const GoodnessProfile* p1 = psi_profile_ ? &*psi_profile_ : nullptr;
    const GoodnessProfile* p2 = lambda_profile_ ? &*lambda_profile_ : nullptr;
    RhoValue a = rho_point(h, geom_.d_lo, mp_, p1, p2, t);
    if (geom_.d_hi == geom_.d_lo) return a;
    RhoValue b = rho_point(h, geom_.d_hi, mp_, p1, p2, t);
    return b.log_rho > a.log_rho ? b : a;
}

ModulusProfile rho_global(TruncationCache& cache, const ModulusParams& mp, const GridControls& gc) {
    ModulusProfile out;
    out.params = mp;
    std::vector<Rat> ts;
    Rat t = mp.delta / 2;
    for (int m = 0; m < gc.t_count; ++m, t /= 2) ts.push_back(t);
    std::vector<Rat> hs{Rat(0)};
    Rat h = mp.delta / 2;
    for (int i = 0; i < gc.heights; ++i, h /= 4) hs.push_back(h);

    const auto& e = cache.at_items(gc.max_item);
    const ScarTree& free = e.free;
    const long double ninf = -std::numeric_limits<long double>::infinity();
    std::vector<long double> best(ts.size(), ninf);
    std::vector<BoundaryParam> arg_t(ts.size());
    std::vector<Rat> arg_h(ts.size());
    std::map<std::pair<int, Rat>, char> done;
    std::vector<long double> prev;
    long double log_scale = std::log(2.0L);
    if (mp.R) log_scale += std::log(to_ldouble(8 * *mp.R));

    for (int ref = 0; ref <= gc.max_refinements; ++ref) {
        int per = gc.per_piece << ref;
        std::vector<BoundaryParam> qs;
        for (std::size_t p = 0; p < free.pieces.size(); ++p) {
            for (const auto& pc : free.pieces[p]) {
                if (pc.hi <= pc.lo) continue;
                for (int i = 0; i < per; ++i) {
                    BoundaryParam b{static_cast<int>(p), pc.lo + (pc.hi - pc.lo) * i / per};
                    if (done.emplace(std::make_pair(b.polygon, b.t), 1).second) qs.push_back(b);
                }
            }
        }
        if (ref == 0)
            for (const auto& b : free.singular_params)
                if (b.t < free.mp.length(b.polygon) && done.emplace(std::make_pair(b.polygon, b.t), 1).second)
                    qs.push_back(b);

        struct Local {
            std::vector<long double> v;
            std::vector<Rat> h;
        };
        std::vector<Local> results(qs.size());
        std::atomic<std::size_t> next{0};
        std::vector<std::string> errors;
        std::mutex err_mu;
        auto work = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= qs.size()) return;
                try {
                    auto g = point_geom(cache, gc.max_item, mp, qs[i], Rat(0));
                    LocalModulus lm(cache, mp, g, ts.back(), gc.profile);
                    Local loc{std::vector<long double>(ts.size(), ninf), std::vector<Rat>(ts.size())};
                    for (std::size_t k = 0; k < ts.size(); ++k)
                        for (const auto& hh : hs) {
                            long double v = lm.rho(ts[k], hh).log_rho;
                            if (v > loc.v[k]) {
                                loc.v[k] = v;
                                loc.h[k] = hh;
                            }
                        }
                    results[i] = std::move(loc);
                } catch (const std::exception& ex) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    errors.push_back(ex.what());
                }
            }
        };
        int nw = std::max(1, gc.workers);
        std::vector<std::thread> pool;
        for (int w = 1; w < nw; ++w) pool.emplace_back(work);
        work();
        for (auto& th : pool) th.join();
        if (!errors.empty()) throw SchemeError("modulus grid evaluation failed: " + errors.front());

        // deterministic reduction in sample order
        for (std::size_t i = 0; i < qs.size(); ++i)
            for (std::size_t k = 0; k < ts.size(); ++k)
                if (results[i].v[k] > best[k]) {
                    best[k] = results[i].v[k];
                    arg_t[k] = qs[i];
                    arg_h[k] = results[i].h[k];
                }
        out.grid_points += static_cast<int>(qs.size() * hs.size());
        long double worst = 0;
        if (!prev.empty())
            for (std::size_t k = 0; k < ts.size(); ++k) worst = std::max(worst, std::expm1(best[k] - prev[k]));
        char buf[160];
        std::snprintf(buf, sizeof buf, "refinement %d: %d samples per segment, %zu new points, max relative change %s",
                      ref, per, qs.size(), prev.empty() ? "n/a" : dec12(static_cast<double>(worst)).c_str());
        out.trace.push_back(buf);
        if (!prev.empty() && worst < gc.rel_tol) {
            out.converged = true;
            break;
        }
        prev = best;
    }

    for (std::size_t k = 0; k < ts.size(); ++k) {
        ModulusRow row;
        row.t = ts[k];
        row.log_rho_hat = best[k] + log_scale;
        long double lip = mp.log_kappa + std::log(to_ldouble(ts[k]));
        row.branch = lip >= row.log_rho_hat ? "lipschitz" : "local";
        row.log_rho_bar = std::max(lip, row.log_rho_hat);
        row.argmax_t = arg_t[k];
        row.argmax_h = arg_h[k];
        out.rows.push_back(row);
    }
    return out;
}

std::string exp_decimal(long double log_value) {
    if (std::isinf(log_value) && log_value < 0) return "0";
    if (std::fabs(log_value) < 650) return dec12(static_cast<double>(std::exp(log_value)));
    long double x = log_value / std::log(10.0L);
    long double ex = std::floor(x);
    long double mant = std::pow(10.0L, x - ex);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11Lf", mant);
    if (buf[0] == '1' && buf[1] == '0') {  // rounding carried into a new digit
        ex += 1;
        std::snprintf(buf, sizeof buf, "%.11Lf", mant / 10);
    }
    std::string m = buf;
    while (!m.empty() && m.back() == '0') m.pop_back();
    if (!m.empty() && m.back() == '.') m.pop_back();
    long long e10 = static_cast<long long>(ex);
    return m + (e10 < 0 ? "e-" : "e+") + std::to_string(e10 < 0 ? -e10 : e10);
}

}  // namespace paperfold
