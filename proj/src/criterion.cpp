#include "paperfold/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>

namespace paperfold {

const TruncationCache::Entry& TruncationCache::at_items(const Rat& max_item) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(max_item);
    if (it != cache_.end()) return *it->second;
    auto e = std::make_unique<Entry>();
    e->max_item = max_item;
    e->fs = truncate_items(scheme_, max_item);
    e->collapse = build_scar(e->fs, TailMode::COLLAPSE);
    e->free = build_scar(e->fs, TailMode::FREE);
    auto& ref = *e;
    cache_[max_item] = std::move(e);
    return ref;
}

Rat goodness_constant(const Rat& rbar, const Rat& hbar) {
    if (rbar <= 0 || hbar <= 0) throw SchemeError("rbar and hbar must be positive");
    return rat_min(rbar / hbar, hbar / rbar) / 5;
}

namespace {

struct QE {
    Rat d;
    int n;
    bool operator>(const QE& o) const { return d > o.d; }
};

// exact multi-source distances over the whole graph, with nearest-source labels
void voronoi(const ScarTree& t, const std::vector<int>& sources, std::vector<Rat>& dist, std::vector<int>& label,
             std::vector<char>& reached) {
    std::size_t n = t.nodes.size();
    dist.assign(n, Rat(0));
    label.assign(n, -1);
    reached.assign(n, 0);
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    for (int s : sources) {
        reached[s] = 1;
        label[s] = s;
        pq.push({Rat(0), s});
    }
    while (!pq.empty()) {
        QE top = pq.top();
        pq.pop();
        if (top.d > dist[top.n]) continue;
        for (const auto& a : t.adj[top.n]) {
            Rat nd = top.d + t.edges[a.edge].length;
            if (!reached[a.to] || nd < dist[a.to]) {
                reached[a.to] = 1;
                dist[a.to] = nd;
                label[a.to] = label[top.n];
                pq.push({nd, a.to});
            }
        }
    }
}

bool closed_vertex(const ScarTree& t, int n) {
    const auto& nd = t.nodes[n];
    return nd.fiber.size() != 2 || nd.polygon_vertex || nd.item >= 0 || nd.lambda;
}

struct DSU {
    std::map<int, int> p;
    int find(int x) {
        auto it = p.find(x);
        if (it == p.end()) {
            p[x] = x;
            return x;
        }
        if (it->second == x) return x;
        int r = find(it->second);
        p[x] = r;
        return r;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

}  // namespace

InjectivityRadius injectivity_radius(const ScarTree& t, const std::optional<Rat>& override_rbar) {
    InjectivityRadius out;
    if (override_rbar) {
        if (*override_rbar <= 0) throw SchemeError("rbar override must be positive");
        std::vector<int> lam;
        for (std::size_t i = 0; i < t.nodes.size(); ++i)
            if (t.nodes[i].lambda) lam.push_back(static_cast<int>(i));
        bool proper = lam.empty();
        if (!lam.empty()) {
            std::vector<Rat> d;
            std::vector<int> lab;
            std::vector<char> re;
            voronoi(t, lam, d, lab, re);
            for (const auto& e : t.edges)
                if ((d[e.u] + d[e.v] + e.length) / 2 >= *override_rbar) proper = true;
        }
        if (!proper)
            throw SchemeError("rbar override " + rat_str(*override_rbar) +
                              " is too large: the ball about the singular set covers the whole scar");
        out.rbar = *override_rbar;
        out.from_override = true;
        out.note = "override";
        return out;
    }
    int best = -1;
    for (std::size_t i = 0; i < t.edges.size(); ++i) {
        const auto& e = t.edges[i];
        if (e.gap) continue;
        if (best < 0 || e.length > t.edges[best].length) best = static_cast<int>(i);
    }
    if (best < 0) throw SchemeError("no certified-planar edge at this truncation");
    std::vector<int> vbar;
    for (std::size_t i = 0; i < t.nodes.size(); ++i)
        if (closed_vertex(t, static_cast<int>(i))) vbar.push_back(static_cast<int>(i));
    const auto& e = t.edges[best];
    Rat third = e.length / 3;
    Rat r = third + e.length;  // no closed vertex at all: bounded by the edge itself
    if (!vbar.empty()) {
        std::vector<Rat> d;
        std::vector<int> lab;
        std::vector<char> re;
        voronoi(t, vbar, d, lab, re);
        r = third + rat_min(d[e.u], d[e.v]);
    }
    out.rbar = r;
    out.edge = best;
    out.note = "middle third of edge " + std::to_string(best) + " (length " + rat_str(e.length) + ")";
    return out;
}

std::vector<Rat> MergeTree::radii() const {
    std::vector<Rat> out;
    for (const auto& l : links) out.push_back(l.weight / 2);
    std::sort(out.begin(), out.end(), [](const Rat& a, const Rat& b) { return a > b; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int MergeTree::ncc(const Rat& r) const {
    int n = static_cast<int>(members.size());
    for (const auto& l : links)
        if (l.weight < 2 * r) --n;
    return n;
}

std::map<int, int> MergeTree::classes(const Rat& r) const {
    DSU d;
    for (int m : members) d.find(m);
    for (const auto& l : links)
        if (l.weight < 2 * r) d.unite(l.a, l.b);
    std::map<int, int> out;
    for (int m : members) out[m] = d.find(m);
    return out;
}

MergeTree merge_tree(const ScarTree& t) {
    MergeTree mt;
    for (std::size_t i = 0; i < t.nodes.size(); ++i)
        if (t.nodes[i].lambda) mt.members.push_back(static_cast<int>(i));
    if (mt.members.size() < 2) return mt;
    std::vector<Rat> d;
    std::vector<int> lab;
    std::vector<char> re;
    voronoi(t, mt.members, d, lab, re);
    std::vector<MergeTree::Link> cand;
    for (const auto& e : t.edges) {
        if (!re[e.u] || !re[e.v] || lab[e.u] == lab[e.v]) continue;
        cand.push_back({lab[e.u], lab[e.v], d[e.u] + e.length + d[e.v]});
    }
    std::sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) {
        if (x.weight != y.weight) return x.weight < y.weight;
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    DSU dsu;
    for (const auto& c : cand)
        if (dsu.unite(c.a, c.b)) mt.links.push_back(c);
    return mt;
}

std::vector<Rat> breakpoints(const ScarTree& t, const Rat& a, const Rat& b, const Rat& rbar) {
    if (a <= 0 || b > rbar || a > b) throw SchemeError("window must lie in (0, rbar]");
    std::set<Rat> out;
    auto mt = merge_tree(t);
    for (const auto& r : mt.radii())
        if (a <= r && r <= b) out.insert(r);
    if (!mt.members.empty()) {
        std::vector<Rat> d;
        std::vector<int> lab;
        std::vector<char> re;
        voronoi(t, mt.members, d, lab, re);
        for (std::size_t i = 0; i < t.nodes.size(); ++i)
            if (re[i] && closed_vertex(t, static_cast<int>(i)) && a <= d[i] && d[i] <= b) out.insert(d[i]);
    }
    return {out.begin(), out.end()};
}

std::vector<Rat> GoodnessProfile::breakpoints() const {
    std::vector<Rat> out;
    for (const auto& s : segs) {
        if (out.empty() || out.back() != s.lo) out.push_back(s.lo);
        out.push_back(s.hi);
    }
    return out;
}

Rat GoodnessProfile::denominator(const Rat& s) const {
    for (const auto& g : segs)
        if (g.lo < s && s < g.hi) {
            Rat cm = g.cm_lo + (g.cm_hi - g.cm_lo) * (s - g.lo) / (g.hi - g.lo);
            return cm + s * g.cn;
        }
    return 0;
}

long double GoodnessProfile::iota(const Rat& s) const {
    Rat d = denominator(s);
    if (d <= 0) return 0;
    return to_ldouble(M / d);
}

namespace {

std::vector<BallSegment> raw_profile(const ScarTree& t, bool lambda_base, const BoundaryParam& q, const Rat& a,
                                     const Rat& b) {
    ScarPoint sp = t.normalize(t.locate(q));
    if (!lambda_base) {
        auto dist = point_distances(t, sp, b);
        return ball_segments(t, dist, a, b, sp);
    }
    if (!sp.at_node() || !t.nodes[sp.node].lambda)
        throw SchemeError("q = " + rat_str(q.t) + " is not a point of the singular set");
    std::vector<BallSegment> out;
    Rat hi = b;
    while (hi > a) {
        auto lc = lambda_class(t, sp.node, hi, hi);
        Rat lo = rat_max(a, lc.max_join / 2);
        auto part = ball_segments(t, lc.dist, lo, hi);
        out.insert(out.begin(), part.begin(), part.end());
        hi = lo;
    }
    return out;
}

Rat interp(const BallSegment& s, const Rat& x) {
    return s.cm_lo + (s.cm_hi - s.cm_lo) * (x - s.lo) / (s.hi - s.lo);
}

std::vector<ProfileSegment> combine(const std::vector<BallSegment>& c, const std::vector<BallSegment>& f) {
    std::set<Rat> cuts;
    for (const auto& s : c) {
        cuts.insert(s.lo);
        cuts.insert(s.hi);
    }
    for (const auto& s : f) {
        cuts.insert(s.lo);
        cuts.insert(s.hi);
    }
    std::vector<ProfileSegment> out;
    std::size_t ic = 0, jf = 0;
    for (auto it = cuts.begin(); it != cuts.end() && std::next(it) != cuts.end(); ++it) {
        const Rat& x = *it;
        const Rat& y = *std::next(it);
        while (ic < c.size() && c[ic].hi <= x) ++ic;
        while (jf < f.size() && f[jf].hi <= x) ++jf;
        if (ic >= c.size() || jf >= f.size()) break;
        const auto& sc = c[ic];
        const auto& sf = f[jf];
        ProfileSegment p;
        p.lo = x;
        p.hi = y;
        Rat cx = interp(sc, x), cy = interp(sc, y), fx = interp(sf, x), fy = interp(sf, y);
        p.exact = !sc.unknown && !sf.unknown && cx == fx && cy == fy && sc.cn == sf.cn;
        p.cm_lo = rat_max(cx, fx);
        p.cm_hi = rat_max(cy, fy);
        p.cn = std::max(sc.cn, sf.cn);
        out.push_back(p);
    }
    // merge neighbours carrying the same linear data
    std::vector<ProfileSegment> merged;
    for (const auto& p : out) {
        if (!merged.empty()) {
            auto& m = merged.back();
            if (m.hi == p.lo && m.cn == p.cn && m.exact == p.exact && m.cm_hi == p.cm_lo &&
                (m.cm_hi - m.cm_lo) * (p.hi - p.lo) == (p.cm_hi - p.cm_lo) * (m.hi - m.lo)) {
                m.hi = p.hi;
                m.cm_hi = p.cm_hi;
                continue;
            }
        }
        merged.push_back(p);
    }
    return merged;
}

}  // namespace

GoodnessProfile goodness(TruncationCache& cache, bool lambda_base, const BoundaryParam& q, const Rat& a, const Rat& b,
                         const Rat& M, const ProfileOptions& opt) {
    if (a <= 0 || b <= a) throw SchemeError("profile window must satisfy 0 < a < b");
    GoodnessProfile p;
    p.lambda_base = lambda_base;
    p.q = q;
    p.a = a;
    p.b = b;
    p.M = M;
    Rat item = opt.start_item ? *opt.start_item : Rat(2 * a);
    for (int attempt = 0;; ++attempt) {
        const auto& e = cache.at_items(item);
        auto rc = raw_profile(e.collapse, lambda_base, q, a, b);
        auto rf = raw_profile(e.free, lambda_base, q, a, b);
        p.segs = combine(rc, rf);
        p.max_item = item;
        bool exact = true;
        for (const auto& s : p.segs) exact = exact && s.exact;
        if (exact || attempt >= opt.budget || e.fs.items.empty()) {
            p.approximate = !exact;
            return p;
        }
        item /= 3;
    }
}

long double integral_unnormalized(const GoodnessProfile& p, const Rat& lo, const Rat& hi, IntegralRule rule) {
    if (hi <= lo) return 0;
    long double total = 0;
    for (const auto& s : p.segs) {
        Rat u = rat_max(lo, s.lo), v = rat_min(hi, s.hi);
        if (v <= u) continue;
        Rat slope = (s.cm_hi - s.cm_lo) / (s.hi - s.lo);
        if (rule == IntegralRule::EXACT_ENVELOPE) {
            Rat A = s.cm_lo - slope * s.lo;
            Rat B = slope + s.cn;
            Rat den_u = A + B * u;
            if (den_u <= 0) return std::numeric_limits<long double>::infinity();
            if (B == 0) {
                total += to_ldouble((v - u) / A);
            } else {
                Rat x = B * (v - u) / den_u;
                total += std::log1p(to_ldouble(x)) / to_ldouble(B);
            }
        } else {
            Rat D = s.cm_lo + slope * (v - s.lo);
            if (s.cn == 0) {
                total += to_ldouble((v - u) / D);
            } else {
                Rat den_u = D + u * s.cn;
                if (den_u <= 0) return std::numeric_limits<long double>::infinity();
                Rat x = Rat(s.cn) * (v - u) / den_u;
                total += std::log1p(to_ldouble(x)) / s.cn;
            }
        }
    }
    return total;
}

long double integral_lower_bound(const GoodnessProfile& p, const Rat& lo, const Rat& hi, IntegralRule rule) {
    return to_ldouble(p.M) * integral_unnormalized(p, lo, hi, rule);
}

const char* hypothesis_name(Hypothesis h) {
    switch (h) {
        case Hypothesis::NONE: return "none";
        case Hypothesis::CONSTANT: return "constant";
        case Hypothesis::HARMONIC: return "harmonic";
    }
    return "?";
}

Hypothesis parse_hypothesis(const std::string& s) {
    if (s == "none") return Hypothesis::NONE;
    if (s == "constant") return Hypothesis::CONSTANT;
    if (s == "harmonic") return Hypothesis::HARMONIC;
    throw std::invalid_argument("unknown hypothesis '" + s + "' (expected constant, harmonic or none)");
}

const char* verdict_name(Verdict v) {
    return v == Verdict::CERTIFIED_UNDER_HYPOTHESIS ? "CERTIFIED_UNDER_HYPOTHESIS" : "INCONCLUSIVE";
}

std::vector<Rat> window_radii(TruncationCache& cache, const Rat& rbar, int count) {
    const auto& meta = cache.scheme().meta;
    std::vector<Rat> r;
    if (meta.wtop && meta.wratio) {
        Rat x = *meta.wtop;
        for (int k = 0; k < count; ++k) {
            r.push_back(x);
            x *= *meta.wratio;
        }
        return r;
    }
    Rat item = rbar / 4;
    for (int attempt = 0; attempt < 6; ++attempt, item /= 3) {
        const auto& e = cache.at_items(item);
        auto mt = merge_tree(e.collapse);
        r.assign(1, rbar);
        for (const auto& x : mt.radii())
            if (x < r.back() && x > item) r.push_back(x);
        if (static_cast<int>(r.size()) >= count) {
            r.resize(count);
            return r;
        }
    }
    return r;
}

Verdict certify(const std::vector<long double>& W, Hypothesis h, long double& c, std::string& reason) {
    c = 0;
    if (h == Hypothesis::NONE) {
        reason = "no extrapolation hypothesis declared";
        return Verdict::INCONCLUSIVE;
    }
    if (W.empty()) {
        reason = "no windows";
        return Verdict::INCONCLUSIVE;
    }
    auto scaled = [&](std::size_t k) {
        return h == Hypothesis::HARMONIC ? W[k] * static_cast<long double>(k + 1) : W[k];
    };
    std::size_t head = (W.size() + 1) / 2;
    c = scaled(0);
    for (std::size_t k = 1; k < head; ++k) c = std::min(c, scaled(k));
    if (!(c > 0)) {
        reason = "window bounds vanish";
        return Verdict::INCONCLUSIVE;
    }
    const long double rel = 1e-9L;
    for (std::size_t k = head; k < W.size(); ++k)
        if (scaled(k) < c * (1 - rel)) {
            reason = "window " + std::to_string(k) + " falls below the fitted constant";
            return Verdict::INCONCLUSIVE;
        }
    reason = h == Hypothesis::HARMONIC ? "W_k >= c/(k+1) on all verified windows; sum diverges"
                                       : "W_k >= c on all verified windows; sum diverges";
    return Verdict::CERTIFIED_UNDER_HYPOTHESIS;
}

namespace {

// smallest declared singular parameter carried by any node of the class
std::optional<BoundaryParam> class_rep(const ScarTree& t, const std::vector<int>& nodes) {
    std::optional<BoundaryParam> best;
    for (int n : nodes)
        for (const auto& b : t.nodes[n].fiber)
            if (t.declared_singular(b)) {
                if (!best || std::tie(b.polygon, b.t) < std::tie(best->polygon, best->t)) best = b;
            }
    return best;
}

std::vector<std::vector<int>> group(const std::map<int, int>& labels) {
    std::map<int, std::vector<int>> g;
    for (const auto& [m, l] : labels) g[l].push_back(m);
    std::vector<std::vector<int>> out;
    for (auto& [l, v] : g) out.push_back(std::move(v));
    return out;
}

}  // namespace

DivergenceCertificate divergence_report(TruncationCache& cache, const CriterionParams& cp, int K, Hypothesis h) {
    if (cache.scheme().gen.singular.empty()) throw SchemeError("singular set is empty");
    DivergenceCertificate cert;
    cert.hypothesis = h;
    cert.K = K;
    auto radii = window_radii(cache, cp.rbar, K + 1);
    bool approx = false;
    std::vector<long double> W;
    for (int k = 0; k + 1 < static_cast<int>(radii.size()); ++k) {
        WindowBound wb;
        wb.k = k;
        wb.b = radii[k];
        wb.a = radii[k + 1];
        if (wb.b > cp.rbar) throw SchemeError("window " + std::to_string(k) + " exceeds rbar");
        const auto& e = cache.at_items(2 * wb.a);
        auto mt = merge_tree(e.collapse);
        auto classes = group(mt.classes((wb.a + wb.b) / 2));
        wb.components = static_cast<int>(classes.size());
        bool first = true;
        for (const auto& cl : classes) {
            auto rep = class_rep(e.collapse, cl);
            if (!rep) continue;
            auto prof = goodness(cache, true, *rep, wb.a, wb.b, cp.M);
            long double v = integral_unnormalized(prof, wb.a, wb.b);
            if (prof.approximate) wb.approximate = true;
            if (first || v < wb.W) {
                wb.W = v;
                wb.worst = *rep;
                first = false;
            }
        }
        approx = approx || wb.approximate;
        W.push_back(wb.W);
        cert.windows.push_back(wb);
    }
    if (static_cast<int>(W.size()) < K) {
        cert.verdict = Verdict::INCONCLUSIVE;
        cert.reason = "only " + std::to_string(W.size()) + " windows available";
        return cert;
    }
    cert.verdict = certify(W, h, cert.c, cert.reason);
    if (approx && cert.verdict == Verdict::CERTIFIED_UNDER_HYPOTHESIS) {
        cert.verdict = Verdict::INCONCLUSIVE;
        cert.reason = "window profiles are approximate at the truncation budget";
    }
    return cert;
}

AnnulusSystem mcmullen_system(TruncationCache& cache, const CriterionParams& cp, int K0, int K1) {
    if (K0 < 1 || K1 < K0) throw SchemeError("levels must satisfy 1 <= K0 <= K1");
    AnnulusSystem sys;
    sys.K0 = K0;
    sys.K1 = K1;
    auto radii = window_radii(cache, cp.rbar, K1 + 1);
    if (static_cast<int>(radii.size()) < K1 + 1) throw SchemeError("not enough window radii for the requested levels");
    auto rk = [&](int k) { return radii[k - 1]; };
    const auto& ref = cache.at_items(2 * rk(K1 + 1));
    const ScarTree& t = ref.collapse;
    auto mt = merge_tree(t);
    bool caps = true, cond_a = true, cond_b = true;
    for (int k = K0; k <= K1; ++k) {
        AnnulusLevel lvl;
        lvl.k = k;
        lvl.r_outer = rk(k);
        lvl.r_inner = rk(k + 1);
        Rat width = lvl.r_outer - lvl.r_inner;
        auto labels_mid = mt.classes((lvl.r_outer + lvl.r_inner) / 2);
        auto classes = group(labels_mid);
        Rat pow2 = 1;
        for (int i = 1; i < k; ++i) pow2 *= 2;
        Rat cap = rat_min(lvl.r_inner / (pow2 * cp.M), width / 3);
        long double slack = 1.0L / static_cast<long double>(to_double(pow2));
        bool have_w = false;
        for (const auto& cl : classes) {
            AnnulusClass ac;
            ac.level = k;
            ac.members = cl;
            auto rep = class_rep(t, cl);
            if (!rep) {
                ac.blocking = "class has no declared singular point";
                caps = false;
                lvl.classes.push_back(ac);
                continue;
            }
            ac.rep = *rep;
            auto prof = goodness(cache, true, *rep, lvl.r_inner, lvl.r_outer, cp.M);
            auto bps = prof.breakpoints();
            ac.window_bound = integral_lower_bound(prof, lvl.r_inner, lvl.r_outer);
            Rat e = width;
            for (int m = 1; m <= 40; ++m) {
                e /= 2;
                if (m < 2) continue;
                if (e > cap) continue;
                Rat in = lvl.r_inner + e, out = lvl.r_outer - e;
                if (std::binary_search(bps.begin(), bps.end(), in)) {
                    ac.blocking = "breakpoint at " + rat_str(in);
                    continue;
                }
                if (std::binary_search(bps.begin(), bps.end(), out)) {
                    ac.blocking = "breakpoint at " + rat_str(out);
                    continue;
                }
                long double mb = integral_lower_bound(prof, in, out);
                if (mb < ac.window_bound - slack) continue;
                ac.eps = e;
                ac.inner = in;
                ac.outer = out;
                ac.module_bound = mb;
                ac.eps_ok = true;
                ac.blocking.clear();
                break;
            }
            if (!ac.eps_ok) {
                caps = false;
                if (ac.blocking.empty()) ac.blocking = "no dyadic eps meets the cap";
            } else if (!(ac.eps <= cap)) {
                caps = false;
            }
            if (!have_w || ac.window_bound < lvl.W) lvl.W = ac.window_bound;
            have_w = true;
            lvl.classes.push_back(ac);
        }
        // (a): each class is one component of the inner and outer balls, distinct from the others
        for (auto& ac : lvl.classes) {
            if (!ac.eps_ok) {
                cond_a = false;
                continue;
            }
            auto li = mt.classes(ac.inner), lo = mt.classes(ac.outer);
            int lab_i = li[ac.members.front()], lab_o = lo[ac.members.front()];
            std::size_t cnt_i = 0, cnt_o = 0;
            for (const auto& [m, l] : li) cnt_i += l == lab_i;
            for (const auto& [m, l] : lo) cnt_o += l == lab_o;
            if (cnt_i != ac.members.size() || cnt_o != ac.members.size()) cond_a = false;
        }
        // (b): refinement of the previous level with ordered radii
        if (!sys.levels.empty()) {
            auto& prev = sys.levels.back();
            for (auto& ac : lvl.classes) {
                int par = -1;
                for (std::size_t i = 0; i < prev.classes.size(); ++i) {
                    const auto& pm = prev.classes[i].members;
                    if (std::find(pm.begin(), pm.end(), ac.members.front()) != pm.end()) par = static_cast<int>(i);
                }
                ac.parent = par;
                if (par < 0) {
                    cond_b = false;
                    continue;
                }
                const auto& pm = prev.classes[par].members;
                for (int m : ac.members)
                    if (std::find(pm.begin(), pm.end(), m) == pm.end()) cond_b = false;
                if (ac.eps_ok && prev.classes[par].eps_ok && !(ac.outer < prev.classes[par].inner)) cond_b = false;
            }
        }
        sys.levels.push_back(std::move(lvl));
    }
    // (c): module sums along every nested chain
    long double required = 0;
    for (const auto& l : sys.levels) required += l.W - 1.0L / std::pow(2.0L, l.k - 1);
    long double worst = std::numeric_limits<long double>::infinity();
    const auto& last = sys.levels.back();
    for (std::size_t i = 0; i < last.classes.size(); ++i) {
        long double sum = 0;
        int li = static_cast<int>(sys.levels.size()) - 1;
        int ci = static_cast<int>(i);
        while (li >= 0 && ci >= 0) {
            const auto& ac = sys.levels[li].classes[ci];
            sum += ac.module_bound;
            ci = ac.parent;
            --li;
        }
        if (li >= 0) sum = -std::numeric_limits<long double>::infinity();
        worst = std::min(worst, sum);
    }
    sys.min_chain_sum = worst;
    sys.required_chain_sum = required;
    sys.cond_a = cond_a;
    sys.cond_b = cond_b;
    sys.cond_c = worst >= required - 1e-12L * std::fabs(required);
    sys.caps_ok = caps;
    return sys;
}

}  // namespace paperfold
