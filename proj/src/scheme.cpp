#include "geometry.hpp"
#include "paperfold/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

namespace paperfold {

bool ValidationReport::ok() const {
    for (const auto& c : checks)
        if (!c.ok) return false;
    return true;
}

const CheckEntry* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

bool in_cantor(const SingularDecl& d, const Rat& t) {
    if (d.kind != SingularDecl::Kind::Cantor) return false;
    if (t < d.lo || t > d.hi) return false;
    Rat x = (t - d.lo) / (d.hi - d.lo);
    std::set<Rat> seen;
    Rat one = 1;
    while (true) {
        if (x == 0 || x == 1) return true;
        if (!seen.insert(x).second) return true;
        if (x <= d.ratio) {
            x = x / d.ratio;
        } else if (x >= one - d.ratio) {
            x = (x - (one - d.ratio)) / d.ratio;
        } else {
            return false;
        }
    }
}

bool FiniteScheme::is_declared_singular(const BoundaryParam& b) const {
    for (const auto& p : singular_params)
        if (p.polygon == b.polygon && p.t == b.t) return true;
    if (b.polygon != 0) return false;
    for (const auto& d : singular_decls)
        if (in_cantor(d, b.t)) return true;
    return false;
}

namespace {

Rat apply(const AffinePiece& p, const Rat& x) {
    return p.dst_lo + (x - p.src_lo) * (p.dst_hi - p.dst_lo) / (p.src_hi - p.src_lo);
}

// piece whose source contains [lo, hi], or -1
int containing_piece(const std::vector<AffinePiece>& pieces, const Rat& lo, const Rat& hi) {
    for (std::size_t i = 0; i < pieces.size(); ++i)
        if (pieces[i].src_lo <= lo && hi <= pieces[i].src_hi) return static_cast<int>(i);
    return -1;
}

bool inside_src(const Rule& r, const Rat& lo, const Rat& hi) { return containing_piece(r.pieces, lo, hi) >= 0; }

bool pairing_inside(const Rule& r, const SegmentPairing& p) {
    return p.pa == 0 && p.pb == 0 && inside_src(r, p.a_start, p.a_end) && inside_src(r, p.b_start, p.b_end);
}

bool rule_child(const Rule& parent, const Rule& child) {
    for (const auto& pc : child.pieces)
        if (!inside_src(parent, pc.dst_lo, pc.dst_hi)) return false;
    return true;
}

Rat dst_measure(const Rule& r) {
    Rat m = 0;
    for (const auto& pc : r.pieces) m += pc.dst_hi - pc.dst_lo;
    return m;
}

struct RuleGraph {
    std::vector<std::vector<int>> children;
    std::vector<Rat> base_inside;  // one-sided length of base pairings replicated by the rule
};

RuleGraph rule_graph(const FoldingScheme& s) {
    RuleGraph g;
    std::size_t n = s.gen.rules.size();
    g.children.resize(n);
    g.base_inside.assign(n, Rat(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            if (rule_child(s.gen.rules[i], s.gen.rules[j])) g.children[i].push_back(static_cast<int>(j));
        for (const auto& p : s.gen.base)
            if (pairing_inside(s.gen.rules[i], p)) g.base_inside[i] += p.length();
    }
    return g;
}

// solves A x = b exactly; false when A is singular
bool solve(std::vector<std::vector<Rat>> a, std::vector<Rat> b, std::vector<Rat>& x) {
    std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) return false;
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rat f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    x.resize(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return true;
}

std::vector<Rat> rule_weights(const FoldingScheme& s) {
    auto g = rule_graph(s);
    std::size_t n = s.gen.rules.size();
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n, Rat(0)));
    std::vector<Rat> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Rat& sg = s.gen.rules[i].sigma;
        a[i][i] += 1;
        for (int c : g.children[i]) a[i][c] -= sg;
        b[i] = sg * g.base_inside[i];
    }
    std::vector<Rat> w;
    if (!solve(a, b, w)) throw SchemeError("rule system is degenerate: pairing total has no closed form");
    for (std::size_t i = 0; i < n; ++i)
        if (w[i] < 0) throw SchemeError("rule " + s.gen.rules[i].id + " has negative replicated length");
    return w;
}

// scale vector S_d over rules; tail(d) = sum S_{d+1}[R] |dst R|
std::vector<double> scale_step(const FoldingScheme& s, const RuleGraph& g, const std::vector<double>& cur) {
    std::vector<double> nxt(cur.size(), 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i)
        for (int c : g.children[i]) nxt[c] += cur[i] * to_double(s.gen.rules[i].sigma);
    return nxt;
}

struct Interval {
    int polygon;
    Rat lo, hi;
    std::string what;
};

std::string iv_str(const Interval& iv) {
    return std::to_string(iv.polygon) + ":[" + rat_str(iv.lo) + "," + rat_str(iv.hi) + "]";
}

struct Engine {
    const FoldingScheme& s;
    RuleGraph g;
    FiniteScheme out;
    struct QItem {
        Rat measure, start;
        long id;
        int idx;
    };
    struct Cmp {
        bool operator()(const QItem& a, const QItem& b) const {
            if (a.measure != b.measure) return a.measure < b.measure;
            if (a.start != b.start) return a.start > b.start;
            return a.id > b.id;
        }
    };
    std::priority_queue<QItem, std::vector<QItem>, Cmp> pq;
    std::vector<PendingItem> all;
    std::vector<char> live;
    std::set<std::pair<int, Rat>> sing;
    long next_id = 0;
    Rat tail = 0;

    explicit Engine(const FoldingScheme& sc) : s(sc), g(rule_graph(sc)) {
        out.mp = s.mp;
        out.pairings = s.gen.base;
        out.singular_decls.clear();
        for (const auto& d : s.gen.singular) {
            if (d.kind == SingularDecl::Kind::Param)
                sing.insert({0, d.param});
            else
                out.singular_decls.push_back(d);
        }
        for (std::size_t r = 0; r < s.gen.rules.size(); ++r) push(static_cast<int>(r), 1, s.gen.rules[r].pieces);
        for (std::size_t q = 0; q < s.gen.sequences.size(); ++q) push_sequence(static_cast<int>(q), 1);
    }

    // pending remainder [lo, lo + len/depth] of a fold sequence
    void push_sequence(int q, int depth) {
        const auto& fq = s.gen.sequences[q];
        PendingItem it;
        it.sequence = q;
        it.depth = depth;
        it.measure = fq.len / depth;
        it.region.push_back({fq.lo, fq.lo + it.measure});
        tail += it.measure;
        int idx = static_cast<int>(all.size());
        pq.push({it.measure, fq.lo, next_id++, idx});
        all.push_back(std::move(it));
        live.push_back(1);
    }

    void push(int rule, int depth, std::vector<AffinePiece> map) {
        PendingItem it;
        it.rule = rule;
        it.depth = depth;
        it.map = std::move(map);
        it.measure = 0;
        for (const auto& pc : it.map) {
            it.region.push_back({pc.dst_lo, pc.dst_hi});
            it.measure += pc.dst_hi - pc.dst_lo;
        }
        std::sort(it.region.begin(), it.region.end());
        tail += it.measure;
        int idx = static_cast<int>(all.size());
        pq.push({it.measure, it.region.front().first, next_id++, idx});
        all.push_back(std::move(it));
        live.push_back(1);
    }

    Rat map_point(const std::vector<AffinePiece>& m, const Rat& lo, const Rat& hi, const Rat& x) {
        int k = containing_piece(m, lo, hi);
        return apply(m[k], x);
    }

    void expand(int idx) {
        live[idx] = 0;
        PendingItem it = all[idx];
        tail -= it.measure;
        ++out.expansions;
        if (it.rule < 0) {
            const auto& fq = s.gen.sequences[it.sequence];
            Rat lo = fq.lo + fq.len / (it.depth + 1), hi = fq.lo + fq.len / it.depth, mid = (lo + hi) / 2;
            out.pairings.push_back({0, 0, lo, mid, mid, hi});
            push_sequence(it.sequence, it.depth + 1);
            return;
        }
        const Rule& r = s.gen.rules[it.rule];
        for (const auto& p : s.gen.base) {
            if (!pairing_inside(r, p)) continue;
            SegmentPairing q = p;
            q.a_start = map_point(it.map, p.a_start, p.a_end, p.a_start);
            q.a_end = map_point(it.map, p.a_start, p.a_end, p.a_end);
            q.b_start = map_point(it.map, p.b_start, p.b_end, p.b_start);
            q.b_end = map_point(it.map, p.b_start, p.b_end, p.b_end);
            out.pairings.push_back(q);
        }
        for (const auto& d : s.gen.singular) {
            if (d.kind != SingularDecl::Kind::Param) continue;
            for (const auto& pc : it.map)
                if (pc.src_lo <= d.param && d.param <= pc.src_hi) sing.insert({0, apply(pc, d.param)});
        }
        for (int c : g.children[it.rule]) {
            std::vector<AffinePiece> cm;
            for (const auto& pc : s.gen.rules[c].pieces) {
                int k = containing_piece(it.map, pc.dst_lo, pc.dst_hi);
                cm.push_back({pc.src_lo, pc.src_hi, apply(it.map[k], pc.dst_lo), apply(it.map[k], pc.dst_hi)});
            }
            push(c, it.depth + 1, std::move(cm));
        }
    }

    template <class Stop>
    FiniteScheme run(Stop stop) {
        long guard = 0;
        while (!pq.empty()) {
            QItem top = pq.top();
            if (stop(top, all[top.idx])) break;
            pq.pop();
            expand(top.idx);
            if (++guard > 50'000'000) throw SchemeError("truncation did not terminate");
        }
        return finish();
    }

    FiniteScheme finish() {
        for (std::size_t i = 0; i < all.size(); ++i) {
            if (!live[i]) continue;
            int item = static_cast<int>(out.items.size());
            for (const auto& [lo, hi] : all[i].region) out.gaps.push_back({item, 0, lo, hi});
            out.items.push_back(all[i]);
        }
        std::sort(out.gaps.begin(), out.gaps.end(), [](const Gap& a, const Gap& b) {
            if (a.polygon != b.polygon) return a.polygon < b.polygon;
            return a.lo < b.lo;
        });
        out.tail_measure = tail;
        for (const auto& [p, t] : sing) out.singular_params.push_back({p, t});
        return std::move(out);
    }
};

}  // namespace

FiniteScheme truncate(const FoldingScheme& s, const Rat& eps) {
    if (eps <= 0) throw SchemeError("eps must be positive");
    Engine e(s);
    return e.run([&](const auto&, const PendingItem&) { return e.tail <= eps; });
}

FiniteScheme truncate_items(const FoldingScheme& s, const Rat& max_item) {
    if (max_item <= 0) throw SchemeError("item bound must be positive");
    Engine e(s);
    return e.run([&](const auto& top, const PendingItem&) { return top.measure <= max_item; });
}

FiniteScheme truncate_depth(const FoldingScheme& s, int depth) {
    if (depth < 0) throw SchemeError("depth must be non-negative");
    Engine e(s);
    // every item deeper than `depth` is smaller than every shallower one only for uniform
    // contraction, so drain by depth explicitly
    std::vector<int> stack;
    for (std::size_t i = 0; i < e.all.size(); ++i) stack.push_back(static_cast<int>(i));
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        if (e.all[i].depth > depth) continue;
        std::size_t before = e.all.size();
        e.expand(i);
        for (std::size_t k = before; k < e.all.size(); ++k) stack.push_back(static_cast<int>(k));
    }
    return e.finish();
}

Rat tail_measure(const FoldingScheme& s, int depth) {
    auto g = rule_graph(s);
    std::size_t n = s.gen.rules.size();
    std::vector<Rat> sc(n, Rat(1));
    for (int d = 0; d < depth; ++d) {
        std::vector<Rat> nxt(n, Rat(0));
        for (std::size_t i = 0; i < n; ++i)
            for (int c : g.children[i]) nxt[c] += sc[i] * s.gen.rules[i].sigma;
        sc = std::move(nxt);
    }
    Rat t = 0;
    for (std::size_t i = 0; i < n; ++i) t += sc[i] * dst_measure(s.gen.rules[i]);
    for (const auto& q : s.gen.sequences) t += q.len / (depth + 1);
    return t;
}

Rat total_pairing_length(const FoldingScheme& s) {
    Rat t = 0;
    for (const auto& p : s.gen.base) t += p.length();
    for (const auto& w : rule_weights(s)) t += w;
    for (const auto& q : s.gen.sequences) t += q.len / 2;
    return t;
}

ValidationReport validate(const FoldingScheme& s, int depth_check) {
    ValidationReport rep;
    auto add = [&](const std::string& name, bool ok, const std::string& detail) {
        rep.checks.push_back({name, ok, detail});
    };

    // polygons
    {
        bool ok = true;
        std::string det;
        for (const auto& p : s.mp.polygons) {
            const auto& v = p.vertices;
            std::size_t n = v.size();
            for (std::size_t a = 0; a < n && ok; ++a)
                for (std::size_t b = a + 2; b < n && ok; ++b) {
                    if (a == 0 && b == n - 1) continue;
                    if (geom::segments_touch(v[a], v[(a + 1) % n], v[b], v[(b + 1) % n])) {
                        ok = false;
                        det = "polygon " + std::to_string(p.id) + ": sides " + std::to_string(a) + " and " +
                              std::to_string(b) + " meet";
                    }
                }
            if (ok && geom::signed_area2(v) <= 0) {
                ok = false;
                det = "polygon " + std::to_string(p.id) + " is not positively oriented";
            }
        }
        add("simplicity", ok, det);
    }
    {
        bool ok = true;
        std::string det;
        const auto& ps = s.mp.polygons;
        for (std::size_t i = 0; i < ps.size() && ok; ++i)
            for (std::size_t j = i + 1; j < ps.size() && ok; ++j) {
                const auto& a = ps[i].vertices;
                const auto& b = ps[j].vertices;
                for (std::size_t x = 0; x < a.size() && ok; ++x)
                    for (std::size_t y = 0; y < b.size() && ok; ++y)
                        if (geom::segments_touch(a[x], a[(x + 1) % a.size()], b[y], b[(y + 1) % b.size()]))
                            ok = false;
                if (ok && (geom::strictly_inside(a[0], b) || geom::strictly_inside(b[0], a))) ok = false;
                if (!ok) det = "polygons " + std::to_string(i) + " and " + std::to_string(j) + " intersect";
            }
        add("polygons_disjoint", ok, det);
    }
    {
        Rat sum = 0;
        for (const auto& p : s.mp.polygons)
            for (const auto& l : p.side_lengths) sum += l;
        add("boundary_length", sum == s.mp.boundary_length,
            "sum of sides " + rat_str(sum) + ", stored " + rat_str(s.mp.boundary_length));
    }
    {
        bool ok = true;
        std::string det;
        for (const auto& p : s.gen.base)
            if (p.length() <= 0 || p.a_end - p.a_start != p.b_end - p.b_start) {
                ok = false;
                det = "pairing " + rat_str(p.a_start) + ".." + rat_str(p.a_end) + " / " + rat_str(p.b_start) +
                      ".." + rat_str(p.b_end);
                break;
            }
        add("pairing_lengths", ok, det);
    }

    // interior disjointness of the full expansion, via the container algebra of the rules
    {
        std::vector<Interval> ivs;
        for (const auto& p : s.gen.base) {
            ivs.push_back({p.pa, p.a_start, p.a_end, "pairing segment"});
            ivs.push_back({p.pb, p.b_start, p.b_end, "pairing segment"});
        }
        for (const auto& r : s.gen.rules)
            for (const auto& pc : r.pieces) ivs.push_back({0, pc.dst_lo, pc.dst_hi, "image of rule " + r.id});
        for (const auto& q : s.gen.sequences) ivs.push_back({0, q.lo, q.lo + q.len, "fold sequence"});
        bool ok = true;
        std::string det;
        // rules do not replicate fold sequences
        for (const auto& q : s.gen.sequences)
            for (const auto& r : s.gen.rules)
                for (const auto& pc : r.pieces)
                    if (ok && q.lo < pc.src_hi && pc.src_lo < q.lo + q.len) {
                        ok = false;
                        det = "fold sequence " + iv_str({0, q.lo, q.lo + q.len, ""}) + " meets the source of rule " + r.id;
                    }
        for (const auto& iv : ivs)
            if (iv.polygon < 0 || iv.polygon >= static_cast<int>(s.mp.polygons.size()) || iv.lo < 0 ||
                iv.hi > s.mp.length(iv.polygon)) {
                ok = false;
                det = iv.what + " " + iv_str(iv) + " is out of range";
            }
        std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) {
            if (a.polygon != b.polygon) return a.polygon < b.polygon;
            return a.lo < b.lo;
        });
        for (std::size_t i = 1; i < ivs.size() && ok; ++i)
            if (ivs[i].polygon == ivs[i - 1].polygon && ivs[i].lo < ivs[i - 1].hi) {
                ok = false;
                Rat lo = ivs[i].lo, hi = rat_min(ivs[i].hi, ivs[i - 1].hi);
                det = "overlap on " + std::to_string(ivs[i].polygon) + ":[" + rat_str(lo) + "," + rat_str(hi) +
                      "] between " + ivs[i - 1].what + " " + iv_str(ivs[i - 1]) + " and " + ivs[i].what + " " +
                      iv_str(ivs[i]);
            }
        // each container lies inside one source piece of every rule or misses all of them
        for (const auto& r : s.gen.rules) {
            for (const auto& iv : ivs) {
                if (!ok) break;
                if (iv.polygon != 0) continue;
                bool in = inside_src(r, iv.lo, iv.hi);
                bool meets = false;
                for (const auto& pc : r.pieces)
                    if (iv.lo < pc.src_hi && pc.src_lo < iv.hi) meets = true;
                if (meets && !in) {
                    ok = false;
                    det = iv.what + " " + iv_str(iv) + " straddles the source of rule " + r.id;
                }
            }
            for (const auto& p : s.gen.base) {
                if (!ok) break;
                bool a_in = p.pa == 0 && inside_src(r, p.a_start, p.a_end);
                bool b_in = p.pb == 0 && inside_src(r, p.b_start, p.b_end);
                if (a_in != b_in) {
                    ok = false;
                    det = "rule " + r.id + " replicates only one side of pairing " + rat_str(p.a_start) + ".." +
                          rat_str(p.a_end);
                }
            }
            for (const auto& c : s.gen.rules) {
                if (!ok) break;
                bool all_in = true, any_in = false;
                for (const auto& pc : c.pieces) {
                    bool in = inside_src(r, pc.dst_lo, pc.dst_hi);
                    all_in = all_in && in;
                    any_in = any_in || in;
                }
                if (any_in && !all_in) {
                    ok = false;
                    det = "rule " + r.id + " replicates only part of the image of rule " + c.id;
                }
            }
            // pieces of one rule: sources and images interior-disjoint
            for (std::size_t i = 0; i < r.pieces.size() && ok; ++i)
                for (std::size_t j = i + 1; j < r.pieces.size() && ok; ++j) {
                    const auto &a = r.pieces[i], &b = r.pieces[j];
                    if ((a.src_lo < b.src_hi && b.src_lo < a.src_hi) || (a.dst_lo < b.dst_hi && b.dst_lo < a.dst_hi)) {
                        ok = false;
                        det = "pieces of rule " + r.id + " overlap";
                    }
                }
        }
        add("interior_disjoint", ok, det);
    }

    // exact fullness
    {
        try {
            rep.total_pairing_length = total_pairing_length(s);
            Rat half = s.mp.boundary_length / 2;
            add("fullness", rep.total_pairing_length == half,
                "total " + rat_str(rep.total_pairing_length) + ", |dP|/2 = " + rat_str(half));
        } catch (const SchemeError& e) {
            rep.total_pairing_length = 0;
            add("fullness", false, e.what());
        }
    }

    // tail strictly decreasing to 0
    {
        auto g = rule_graph(s);
        bool ok = true;
        std::string det;
        Rat prev = tail_measure(s, 0);
        for (int d = 1; d <= depth_check && ok; ++d) {
            Rat t = tail_measure(s, d);
            if (!(t < prev) && prev != 0) {
                ok = false;
                det = "tail at depth " + std::to_string(d) + " is " + rat_str(t);
            }
            prev = t;
        }
        if (ok && !s.gen.rules.empty()) {
            std::vector<double> sc(s.gen.rules.size(), 1.0);
            double t0 = 0;
            for (std::size_t i = 0; i < sc.size(); ++i) t0 += to_double(dst_measure(s.gen.rules[i]));
            double t = t0;
            for (int d = 0; d < 400; ++d) {
                sc = scale_step(s, g, sc);
                t = 0;
                for (std::size_t i = 0; i < sc.size(); ++i) t += sc[i] * to_double(dst_measure(s.gen.rules[i]));
            }
            if (!(t < 1e-6 * t0)) {
                ok = false;
                det = "pending measure does not decay (" + dec12(t) + " after 400 levels)";
            }
        }
        add("tail_decay", ok, det);
    }

    // declared singular points accumulate
    {
        bool ok = true;
        std::string det;
        std::vector<Rat> pts;
        for (const auto& d : s.gen.singular) {
            if (d.kind == SingularDecl::Kind::Param) {
                pts.push_back(d.param);
            } else {
                pts.push_back(d.lo);
                pts.push_back(d.hi);
            }
        }
        const Rat L = s.mp.polygons.empty() ? Rat(0) : s.mp.length(0);
        if (!pts.empty() && (!s.gen.rules.empty() || !s.gen.sequences.empty())) {
            for (int d = 1; d <= depth_check && ok; ++d) {
                auto fs = truncate_depth(s, d);
                Rat tail = fs.tail_measure;
                for (const auto& p : pts) {
                    bool found = false;
                    auto near = [&](const Rat& e) {
                        Rat diff = rat_abs(e - p);
                        diff = rat_min(diff, L - diff);
                        if (diff > 0 && diff <= tail) found = true;
                    };
                    for (const auto& q : fs.pairings) {
                        if (q.pa == 0) {
                            near(q.a_start);
                            near(q.a_end);
                        }
                        if (q.pb == 0) {
                            near(q.b_start);
                            near(q.b_end);
                        }
                        if (found) break;
                    }
                    if (!found) {
                        ok = false;
                        det = "no pairing endpoint within " + rat_str(tail) + " of " + rat_str(p) + " at depth " +
                              std::to_string(d);
                        break;
                    }
                }
            }
        } else if (!pts.empty()) {
            ok = false;
            det = "singular points declared for a finite scheme";
        }
        add("singular_accumulation", ok, det);
    }
    return rep;
}

PlainnessResult is_plain(const FoldingScheme& s) {
    PlainnessResult res;
    if (s.mp.polygons.size() > 1) {
        res.reason = "multiple polygons";
        return res;
    }
    for (const auto& r : s.gen.rules) {
        if (r.pieces.size() < 3) continue;
        std::vector<std::size_t> ord(r.pieces.size());
        for (std::size_t i = 0; i < ord.size(); ++i) ord[i] = i;
        std::sort(ord.begin(), ord.end(), [&](auto a, auto b) { return r.pieces[a].src_lo < r.pieces[b].src_lo; });
        std::vector<Rat> dl;
        for (auto i : ord) dl.push_back(r.pieces[i].dst_lo);
        std::size_t descents = 0;
        for (std::size_t i = 0; i < dl.size(); ++i)
            if (dl[(i + 1) % dl.size()] < dl[i]) ++descents;
        if (descents > 1) {
            res.reason = "rule order";
            return res;
        }
    }
    auto fs = s.gen.rules.empty() && s.gen.sequences.empty() ? truncate_depth(s, 0) : truncate_depth(s, 2);
    struct Tok {
        Rat lo;
        int group;
    };
    std::vector<Tok> toks;
    std::vector<int> count;
    int np = static_cast<int>(fs.pairings.size());
    for (int i = 0; i < np; ++i) {
        toks.push_back({fs.pairings[i].a_start, i});
        toks.push_back({fs.pairings[i].b_start, i});
        count.push_back(2);
    }
    for (std::size_t k = 0; k < fs.items.size(); ++k) {
        for (const auto& r : fs.items[k].region) toks.push_back({r.first, np + static_cast<int>(k)});
        count.push_back(static_cast<int>(fs.items[k].region.size()));
    }
    std::sort(toks.begin(), toks.end(), [](const Tok& a, const Tok& b) { return a.lo < b.lo; });
    std::vector<int> stack;
    std::vector<int> left = count;
    std::vector<char> seen(count.size(), 0);
    for (const auto& t : toks) {
        int g = t.group;
        if (!stack.empty() && stack.back() == g) {
            if (--left[g] == 0) stack.pop_back();
            continue;
        }
        if (seen[g]) {
            res.reason = "linked pairings";
            int h = stack.back();
            if (g < np) res.x = fs.pairings[g];
            if (h < np) res.y = fs.pairings[h];
            return res;
        }
        seen[g] = 1;
        if (--left[g] > 0) stack.push_back(g);
    }
    res.plain = true;
    return res;
}

}  // namespace paperfold
