#include "paperfold/scar.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <set>

namespace paperfold {

const char* tail_mode_name(TailMode m) { return m == TailMode::COLLAPSE ? "COLLAPSE" : "FREE"; }

const char* point_kind_name(PointKind k) {
    switch (k) {
        case PointKind::PLANAR: return "PLANAR";
        case PointKind::VERTEX: return "VERTEX";
        case PointKind::DECLARED_SINGULAR: return "DECLARED_SINGULAR";
        case PointKind::TRUNCATION_UNKNOWN: return "TRUNCATION_UNKNOWN";
    }
    return "?";
}

const char* cn_status_name(CnStatus s) {
    switch (s) {
        case CnStatus::KNOWN: return "KNOWN";
        case CnStatus::UNKNOWN: return "UNKNOWN";
        case CnStatus::BREAKPOINT: return "BREAKPOINT";
    }
    return "?";
}

namespace {

struct UnionFind {
    std::vector<int> p;
    int add() {
        p.push_back(static_cast<int>(p.size()));
        return p.back();
    }
    int find(int x) {
        while (p[x] != x) {
            p[x] = p[p[x]];
            x = p[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) p[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

bool ScarTree::declared_singular(const BoundaryParam& b) const {
    Rat t = b.t;
    if (b.polygon < static_cast<int>(mp.polygons.size()) && t == mp.length(b.polygon)) t = 0;
    for (const auto& p : singular_params) {
        Rat u = p.t;
        if (u == mp.length(p.polygon)) u = 0;
        if (p.polygon == b.polygon && u == t) return true;
    }
    if (b.polygon != 0) return false;
    for (const auto& d : decls)
        if (in_cantor(d, b.t)) return true;
    return false;
}

ScarPoint ScarTree::normalize(const ScarPoint& p) const {
    if (p.at_node()) return p;
    const auto& e = edges[p.edge];
    if (p.offset == 0) return {e.u, -1, 0};
    if (p.offset == e.length) return {e.v, -1, 0};
    return p;
}

ScarPoint ScarTree::locate(const BoundaryParam& b) const {
    if (b.polygon < 0 || b.polygon >= static_cast<int>(mp.polygons.size()))
        throw ScarError("unknown polygon " + std::to_string(b.polygon));
    const Rat& L = mp.length(b.polygon);
    if (b.t < 0 || b.t > L) throw ScarError("parameter " + rat_str(b.t) + " out of range [0," + rat_str(L) + "]");
    Rat t = b.t == L ? Rat(0) : b.t;
    const auto& bn = break_nodes[b.polygon];
    auto it = bn.find(t);
    if (it != bn.end()) return {it->second, -1, 0};
    const auto& ps = pieces[b.polygon];
    auto pos = std::upper_bound(ps.begin(), ps.end(), t, [](const Rat& x, const Piece& p) { return x < p.lo; });
    if (pos == ps.begin()) throw ScarError("parameter not covered");
    const Piece& pc = *(pos - 1);
    if (!(pc.lo < t && t < pc.hi)) throw ScarError("parameter " + rat_str(t) + " not covered");
    if (pc.node >= 0) return {pc.node, -1, 0};
    ScarPoint sp;
    sp.edge = pc.edge;
    sp.offset = pc.reversed ? Rat(pc.hi - t) : Rat(t - pc.lo);
    return sp;
}

ScarTree build_scar(const FiniteScheme& fs, TailMode mode, bool check_tree) {
    ScarTree T;
    T.mode = mode;
    T.mp = fs.mp;
    T.decls = fs.singular_decls;
    T.singular_params = fs.singular_params;
    T.tail_measure = fs.tail_measure;
    std::size_t np = fs.mp.polygons.size();
    auto key = [&](int p, const Rat& t) -> Rat { return t == fs.mp.length(p) ? Rat(0) : t; };

    std::vector<std::set<Rat>> bp(np);
    for (std::size_t p = 0; p < np; ++p)
        for (const auto& v : fs.mp.polygons[p].vertex_params) bp[p].insert(v);
    for (const auto& q : fs.pairings) {
        bp[q.pa].insert(key(q.pa, q.a_start));
        bp[q.pa].insert(key(q.pa, q.a_end));
        bp[q.pb].insert(key(q.pb, q.b_start));
        bp[q.pb].insert(key(q.pb, q.b_end));
    }
    for (const auto& g : fs.gaps) {
        bp[g.polygon].insert(key(g.polygon, g.lo));
        bp[g.polygon].insert(key(g.polygon, g.hi));
    }
    for (const auto& s : fs.singular_params)
        if (s.polygon >= 0 && s.polygon < static_cast<int>(np)) bp[s.polygon].insert(key(s.polygon, s.t));

    // breakpoints in [lo, hi], with hi == L reported as L
    auto range = [&](int p, const Rat& lo, const Rat& hi) {
        std::vector<Rat> out;
        const Rat& L = fs.mp.length(p);
        for (auto it = bp[p].lower_bound(lo); it != bp[p].end() && *it <= hi; ++it) out.push_back(*it);
        if (hi == L) out.push_back(L);
        return out;
    };

    // mirror interior breakpoints across each pairing
    for (const auto& q : fs.pairings) {
        std::vector<Rat> interior_a;
        for (const auto& x : range(q.pa, q.a_start, q.a_end))
            if (q.a_start < x && x < q.a_end) interior_a.push_back(x);
        for (const auto& y : range(q.pb, q.b_start, q.b_end))
            if (q.b_start < y && y < q.b_end) interior_a.push_back(q.partner(q.pb, y, false));
        for (const auto& x : interior_a) {
            bp[q.pa].insert(x);
            bp[q.pb].insert(q.partner(q.pa, x, true));
        }
    }

    UnionFind uf;
    std::vector<std::map<Rat, int>> id(np);
    for (std::size_t p = 0; p < np; ++p)
        for (const auto& t : bp[p]) id[p][t] = uf.add();
    auto nid = [&](int p, const Rat& t) { return id[p].at(key(p, t)); };

    for (const auto& q : fs.pairings)
        for (const auto& x : range(q.pa, q.a_start, q.a_end)) uf.unite(nid(q.pa, x), nid(q.pb, q.partner(q.pa, x, true)));

    std::vector<int> item_uf;
    if (mode == TailMode::COLLAPSE) {
        for (std::size_t i = 0; i < fs.items.size(); ++i) item_uf.push_back(uf.add());
        for (const auto& g : fs.gaps)
            for (const auto& x : range(g.polygon, g.lo, g.hi)) uf.unite(item_uf[g.item], nid(g.polygon, x));
    }

    std::map<int, int> root_to_node;
    auto node_of = [&](int u) {
        int r = uf.find(u);
        auto it = root_to_node.find(r);
        if (it != root_to_node.end()) return it->second;
        int n = static_cast<int>(T.nodes.size());
        root_to_node[r] = n;
        T.nodes.emplace_back();
        return n;
    };
    T.break_nodes.resize(np);
    for (std::size_t p = 0; p < np; ++p) {
        const auto& verts = fs.mp.polygons[p].vertex_params;
        for (const auto& [t, u] : id[p]) {
            int n = node_of(u);
            T.break_nodes[p][t] = n;
            T.nodes[n].fiber.push_back({static_cast<int>(p), t});
            if (std::binary_search(verts.begin(), verts.end(), t)) T.nodes[n].polygon_vertex = true;
        }
    }
    for (std::size_t i = 0; i < item_uf.size(); ++i) {
        int n = node_of(item_uf[i]);
        if (T.nodes[n].item < 0) T.nodes[n].item = static_cast<int>(i);
        T.nodes[n].item_mass += fs.items[i].measure;
        T.nodes[n].lambda = true;
    }
    for (auto& n : T.nodes)
        for (const auto& b : n.fiber)
            if (fs.is_declared_singular(b)) n.lambda = true;

    T.pieces.resize(np);
    T.total_measure = 0;
    for (std::size_t k = 0; k < fs.pairings.size(); ++k) {
        const auto& q = fs.pairings[k];
        auto xs = range(q.pa, q.a_start, q.a_end);
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            ScarEdge e;
            e.u = node_of(nid(q.pa, xs[i]));
            e.v = node_of(nid(q.pa, xs[i + 1]));
            e.length = xs[i + 1] - xs[i];
            e.mass_factor = 2;
            e.pairing = static_cast<int>(k);
            e.polygon = q.pa;
            e.lo = xs[i];
            int ei = static_cast<int>(T.edges.size());
            T.edges.push_back(e);
            T.total_measure += 2 * e.length;
            T.pieces[q.pa].push_back({xs[i], xs[i + 1], ei, -1, false});
            T.pieces[q.pb].push_back({q.partner(q.pa, xs[i + 1], true), q.partner(q.pa, xs[i], true), ei, -1, true});
        }
    }
    for (const auto& g : fs.gaps) {
        if (mode == TailMode::COLLAPSE) {
            T.pieces[g.polygon].push_back({g.lo, g.hi, -1, node_of(item_uf[g.item]), false});
            continue;
        }
        auto xs = range(g.polygon, g.lo, g.hi);
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            ScarEdge e;
            e.u = node_of(nid(g.polygon, xs[i]));
            e.v = node_of(nid(g.polygon, xs[i + 1]));
            e.length = xs[i + 1] - xs[i];
            e.mass_factor = 1;
            e.gap = true;
            e.polygon = g.polygon;
            e.lo = xs[i];
            int ei = static_cast<int>(T.edges.size());
            T.edges.push_back(e);
            T.total_measure += e.length;
            T.pieces[g.polygon].push_back({xs[i], xs[i + 1], ei, -1, false});
        }
    }
    for (const auto& n : T.nodes) T.total_measure += n.item_mass;
    for (auto& ps : T.pieces)
        std::sort(ps.begin(), ps.end(), [](const ScarTree::Piece& a, const ScarTree::Piece& b) { return a.lo < b.lo; });

    T.adj.assign(T.nodes.size(), {});
    for (std::size_t i = 0; i < T.edges.size(); ++i) {
        const auto& e = T.edges[i];
        T.adj[e.u].push_back({static_cast<int>(i), e.v});
        if (e.v != e.u) T.adj[e.v].push_back({static_cast<int>(i), e.u});
    }

    // connectivity
    std::size_t nn = T.nodes.size();
    std::vector<char> seen(nn, 0);
    std::vector<int> comp_of(nn, -1);
    int comps = 0;
    for (std::size_t s = 0; s < nn; ++s) {
        if (seen[s]) continue;
        std::vector<int> st{static_cast<int>(s)};
        seen[s] = 1;
        while (!st.empty()) {
            int u = st.back();
            st.pop_back();
            comp_of[u] = comps;
            for (const auto& a : T.adj[u])
                if (!seen[a.to]) {
                    seen[a.to] = 1;
                    st.push_back(a.to);
                }
        }
        ++comps;
    }
    T.connected = comps == 1;
    T.acyclic = T.edges.size() + comps == nn;

    if (check_tree) {
        if (!T.connected) throw ScarError("quotient is disconnected (" + std::to_string(comps) + " components)");
        if (mode == TailMode::COLLAPSE && !T.acyclic)
            throw ScarError("quotient has a cycle: scheme not plain or truncation inconsistent");
        if (mode == TailMode::FREE) {
            UnionFind f;
            for (std::size_t i = 0; i < nn; ++i) f.add();
            for (const auto& e : T.edges) {
                if (e.gap) continue;
                if (f.find(e.u) == f.find(e.v)) throw ScarError("paired arcs form a cycle: scheme not plain");
                f.unite(e.u, e.v);
            }
        }
    }

    if (T.acyclic && T.connected && nn > 0) {
        T.parent.assign(nn, -1);
        T.parent_edge.assign(nn, -1);
        T.hops.assign(nn, 0);
        T.depth.assign(nn, Rat(0));
        std::vector<int> order{0};
        std::vector<char> vis(nn, 0);
        vis[0] = 1;
        for (std::size_t i = 0; i < order.size(); ++i) {
            int u = order[i];
            for (const auto& a : T.adj[u]) {
                if (vis[a.to]) continue;
                vis[a.to] = 1;
                T.parent[a.to] = u;
                T.parent_edge[a.to] = a.edge;
                T.hops[a.to] = T.hops[u] + 1;
                T.depth[a.to] = T.depth[u] + T.edges[a.edge].length;
                order.push_back(a.to);
            }
        }
    }
    return T;
}

namespace {

std::vector<std::pair<int, Rat>> anchors(const ScarTree& t, const ScarPoint& p_in) {
    ScarPoint p = t.normalize(p_in);
    if (p.at_node()) return {{p.node, Rat(0)}};
    const auto& e = t.edges[p.edge];
    return {{e.u, p.offset}, {e.v, e.length - p.offset}};
}

Rat tree_node_distance(const ScarTree& t, int a, int b) {
    int x = a, y = b;
    while (t.hops[x] > t.hops[y]) x = t.parent[x];
    while (t.hops[y] > t.hops[x]) y = t.parent[y];
    while (x != y) {
        x = t.parent[x];
        y = t.parent[y];
    }
    return t.depth[a] + t.depth[b] - 2 * t.depth[x];
}

}  // namespace

Rat scar_distance(const ScarTree& t, const ScarPoint& x_in, const ScarPoint& y_in) {
    ScarPoint x = t.normalize(x_in), y = t.normalize(y_in);
    auto ax = anchors(t, x), ay = anchors(t, y);
    std::optional<Rat> best;
    auto consider = [&](const Rat& d) {
        if (!best || d < *best) best = d;
    };
    if (!x.at_node() && !y.at_node() && x.edge == y.edge) consider(rat_abs(x.offset - y.offset));
    if (x.at_node() && y.at_node() && x.node == y.node) return 0;
    if (t.acyclic && t.connected) {
        for (const auto& [a, oa] : ax)
            for (const auto& [b, ob] : ay) consider(oa + tree_node_distance(t, a, b) + ob);
        return *best;
    }
    // float-guided Dijkstra, exact length of the chosen path
    std::size_t n = t.nodes.size();
    std::vector<double> d(n, std::numeric_limits<double>::infinity());
    std::vector<int> pred(n, -1), pred_edge(n, -1), src(n, -1);
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        double v = to_double(ax[i].second);
        int a = ax[i].first;
        if (v < d[a]) {
            d[a] = v;
            src[a] = static_cast<int>(i);
            pq.push({v, a});
        }
    }
    std::set<int> targets;
    for (const auto& [b, ob] : ay) targets.insert(b);
    std::size_t remaining = targets.size();
    while (!pq.empty() && remaining > 0) {
        auto [du, u] = pq.top();
        pq.pop();
        if (du > d[u]) continue;
        if (targets.count(u)) --remaining;
        for (const auto& a : t.adj[u]) {
            double nd = du + to_double(t.edges[a.edge].length);
            if (nd < d[a.to]) {
                d[a.to] = nd;
                pred[a.to] = u;
                pred_edge[a.to] = a.edge;
                src[a.to] = src[u];
                pq.push({nd, a.to});
            }
        }
    }
    for (const auto& [b, ob] : ay) {
        if (src[b] < 0) continue;
        Rat len = ob;
        int cur = b;
        while (pred[cur] >= 0) {
            len += t.edges[pred_edge[cur]].length;
            cur = pred[cur];
        }
        len += ax[src[b]].second;
        consider(len);
    }
    if (!best) throw ScarError("points lie in different components");
    return *best;
}

DistanceBounds distance(const ScarTree& collapse, const ScarTree& free, const BoundaryParam& x,
                        const BoundaryParam& y) {
    DistanceBounds b;
    b.lo = scar_distance(collapse, collapse.locate(x), collapse.locate(y));
    b.hi = scar_distance(free, free.locate(x), free.locate(y));
    return b;
}

NodeDist node_distances(const ScarTree& t, const std::vector<std::pair<int, Rat>>& sources, const Rat& cutoff) {
    NodeDist dist;
    struct QE {
        Rat d;
        int n;
        bool operator>(const QE& o) const { return d > o.d; }
    };
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    for (const auto& [n, d] : sources) {
        if (d > cutoff) continue;
        auto it = dist.find(n);
        if (it == dist.end() || d < it->second) {
            dist[n] = d;
            pq.push({d, n});
        }
    }
    while (!pq.empty()) {
        QE top = pq.top();
        pq.pop();
        if (top.d > dist[top.n]) continue;
        for (const auto& a : t.adj[top.n]) {
            Rat nd = top.d + t.edges[a.edge].length;
            if (nd > cutoff) continue;
            auto it = dist.find(a.to);
            if (it == dist.end() || nd < it->second) {
                dist[a.to] = nd;
                pq.push({nd, a.to});
            }
        }
    }
    return dist;
}

NodeDist point_distances(const ScarTree& t, const ScarPoint& p, const Rat& cutoff) {
    return node_distances(t, anchors(t, p), cutoff);
}

PointClass classify_point(const ScarTree& t, const ScarPoint& x_in) {
    ScarPoint x = t.normalize(x_in);
    PointClass pc;
    if (!x.at_node()) {
        pc.kind = t.edges[x.edge].gap ? PointKind::TRUNCATION_UNKNOWN : PointKind::PLANAR;
        return pc;
    }
    const ScarNode& n = t.nodes[x.node];
    if (n.item < 0) {
        for (const auto& b : n.fiber)
            if (t.declared_singular(b)) {
                pc.kind = PointKind::DECLARED_SINGULAR;
                pc.valence = 0;
                return pc;
            }
    }
    // only parameters in the closure of a gap can gain identifications at deeper truncation
    bool near_tail = n.item >= 0;
    for (const auto& a : t.adj[x.node])
        if (t.edges[a.edge].gap) near_tail = true;
    if (near_tail) {
        pc.kind = PointKind::TRUNCATION_UNKNOWN;
        pc.valence = 0;
        return pc;
    }
    int k = static_cast<int>(n.fiber.size());
    pc.valence = k;
    pc.kind = (k == 2 && !n.polygon_vertex) ? PointKind::PLANAR : PointKind::VERTEX;
    return pc;
}

PointClass classify_point(const ScarTree& t, const BoundaryParam& b) {
    if (t.declared_singular(b)) return {PointKind::DECLARED_SINGULAR, 0};
    return classify_point(t, t.locate(b));
}

LambdaClass lambda_class(const ScarTree& t, int q_node, const Rat& r, const Rat& cutoff) {
    if (!t.nodes.at(q_node).lambda) throw ScarError("base point is not in the singular set");
    LambdaClass lc;
    Rat two_r = 2 * r;
    Rat limit = rat_max(two_r, cutoff);
    struct QE {
        Rat d;
        int n;
        bool operator>(const QE& o) const { return d > o.d; }
    };
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    std::set<int> member;
    NodeDist& dist = lc.dist;
    dist[q_node] = 0;
    member.insert(q_node);
    lc.members.push_back(q_node);
    pq.push({Rat(0), q_node});
    while (!pq.empty()) {
        QE top = pq.top();
        pq.pop();
        if (top.d > dist[top.n]) continue;
        if (top.d > 0 && top.d < two_r && t.nodes[top.n].lambda && !member.count(top.n)) {
            member.insert(top.n);
            lc.members.push_back(top.n);
            lc.max_join = rat_max(lc.max_join, top.d);
            dist[top.n] = 0;
            top.d = 0;
        }
        for (const auto& a : t.adj[top.n]) {
            Rat nd = top.d + t.edges[a.edge].length;
            if (nd > limit) continue;
            auto it = dist.find(a.to);
            if (it == dist.end() || nd < it->second) {
                dist[a.to] = nd;
                pq.push({nd, a.to});
            }
        }
    }
    if (limit > cutoff) {
        for (auto it = dist.begin(); it != dist.end();) {
            if (it->second > cutoff) it = dist.erase(it);
            else ++it;
        }
    }
    std::sort(lc.members.begin(), lc.members.end());
    return lc;
}

namespace {

// An arc seen from the source set: end distances (nullopt = beyond cutoff).
struct Arc {
    std::optional<Rat> du, dv;
    Rat L;
    int factor;
    bool gap;
    int edge;
    Rat off0;  // offset of this arc's u end within the edge
    bool flip; // arc runs against edge orientation
};

std::vector<Arc> arcs_near(const ScarTree& t, const NodeDist& dist, const std::optional<ScarPoint>& ps) {
    std::vector<Arc> out;
    std::set<int> done;
    int split = -1;
    ScarPoint p;
    if (ps) {
        p = t.normalize(*ps);
        if (!p.at_node()) split = p.edge;
    }
    auto get = [&](int n) -> std::optional<Rat> {
        auto it = dist.find(n);
        if (it == dist.end()) return std::nullopt;
        return it->second;
    };
    for (const auto& [n, d] : dist) {
        for (const auto& a : t.adj[n]) {
            if (!done.insert(a.edge).second) continue;
            const auto& e = t.edges[a.edge];
            if (a.edge == split) {
                out.push_back({get(e.u), Rat(0), p.offset, e.mass_factor, e.gap, a.edge, Rat(0), false});
                out.push_back({Rat(0), get(e.v), e.length - p.offset, e.mass_factor, e.gap, a.edge, p.offset, false});
            } else {
                out.push_back({get(e.u), get(e.v), e.length, e.mass_factor, e.gap, a.edge, Rat(0), false});
            }
        }
    }
    if (split >= 0 && !done.count(split)) {
        const auto& e = t.edges[split];
        out.push_back({get(e.u), Rat(0), p.offset, e.mass_factor, e.gap, split, Rat(0), false});
        out.push_back({Rat(0), get(e.v), e.length - p.offset, e.mass_factor, e.gap, split, p.offset, false});
    }
    return out;
}

Rat pos(const std::optional<Rat>& d, const Rat& r) {
    if (!d || *d >= r) return 0;
    return r - *d;
}

}  // namespace

ComponentInfo ball_component(const ScarTree& t, bool use_lambda, const ScarPoint& q_in, const Rat& r) {
    if (r <= 0) throw ScarError("radius must be positive");
    ScarPoint q = t.normalize(q_in);
    ComponentInfo ci;
    NodeDist dist;
    std::optional<ScarPoint> ps;
    if (use_lambda) {
        if (!q.at_node() || !t.nodes[q.node].lambda) throw ScarError("q is not a point of the singular set");
        auto lc = lambda_class(t, q.node, r, r);
        dist = std::move(lc.dist);
        ci.members = lc.members;
    } else {
        dist = point_distances(t, q, r);
        ps = q;
        if (q.at_node()) ci.members.push_back(q.node);
    }
    auto arcs = arcs_near(t, dist, ps);
    ci.cm = 0;
    bool unknown = false, breakpoint = false;
    for (const auto& a : arcs) {
        Rat cov = rat_min(a.L, pos(a.du, r) + pos(a.dv, r));
        ci.cm += a.factor * cov;
        if (cov > 0 && a.gap) ci.tail_touch = true;
        // frontier candidates strictly inside the arc
        std::vector<Rat> cand;
        if (a.du && *a.du < r && r - *a.du < a.L) cand.push_back(r - *a.du);
        if (a.dv && *a.dv < r && r - *a.dv < a.L) cand.push_back(a.L - (r - *a.dv));
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        for (const auto& x : cand) {
            std::optional<Rat> dx;
            if (a.du) dx = *a.du + x;
            if (a.dv) {
                Rat o = *a.dv + a.L - x;
                if (!dx || o < *dx) dx = o;
            }
            if (*dx != r) continue;
            ScarPoint fp;
            fp.edge = a.edge;
            fp.offset = a.off0 + x;
            ci.cc_points.push_back(fp);
            if (a.gap) unknown = true;
        }
    }
    for (const auto& [n, d] : dist) {
        const auto& node = t.nodes[n];
        if (node.item >= 0) {
            if (d < r) {
                ci.cm += node.item_mass;
                ci.tail_touch = true;
            }
            if (d <= r && r < d + node.item_mass / 2) unknown = true;
        }
        if (d == r) {
            ci.cc_points.push_back({n, -1, 0});
            if (node.item >= 0) unknown = true;
            else if (t.degree(n) != 2 || node.polygon_vertex) breakpoint = true;
        }
    }
    ci.cn = static_cast<int>(ci.cc_points.size());
    ci.cn_status = unknown ? CnStatus::UNKNOWN : (breakpoint ? CnStatus::BREAKPOINT : CnStatus::KNOWN);
    return ci;
}

std::vector<BallSegment> ball_segments(const ScarTree& t, const NodeDist& dist, const Rat& lo, const Rat& hi,
                                       const std::optional<ScarPoint>& point_source) {
    struct Ev {
        Rat dslope = 0;
        Rat jump = 0;
        int dcn = 0;
        int dgap = 0;
        int dunk = 0;
    };
    std::map<Rat, Ev> ev;
    auto arcs = arcs_near(t, dist, point_source);
    for (const auto& a : arcs) {
        auto add_cn = [&](const Rat& at, int k) {
            if (a.gap) ev[at].dgap += k;
            else ev[at].dcn += k;
        };
        if (a.du && a.dv) {
            Rat dmin = rat_min(*a.du, *a.dv), dmax = rat_max(*a.du, *a.dv);
            Rat peak = (*a.du + *a.dv + a.L) / 2;
            ev[dmin].dslope += a.factor;
            add_cn(dmin, 1);
            if (dmax < peak) {
                ev[dmax].dslope += a.factor;
                add_cn(dmax, 1);
                ev[peak].dslope -= 2 * a.factor;
                add_cn(peak, -2);
            } else {
                ev[dmax].dslope -= a.factor;
                add_cn(dmax, -1);
            }
        } else {
            const Rat& d = a.du ? *a.du : *a.dv;
            ev[d].dslope += a.factor;
            add_cn(d, 1);
            ev[d + a.L].dslope -= a.factor;
            add_cn(d + a.L, -1);
        }
    }
    for (const auto& [n, d] : dist) {
        const auto& node = t.nodes[n];
        if (node.item < 0) continue;
        ev[d].jump += node.item_mass;
        ev[d].dunk += 1;
        ev[d + node.item_mass / 2].dunk -= 1;
    }
    ev[lo];
    ev[hi];
    std::vector<BallSegment> out;
    Rat cont = 0, slope = 0, mass = 0;
    int cn = 0, gap = 0, unk = 0;
    Rat prev = 0;
    bool first = true;
    for (auto it = ev.begin(); it != ev.end(); ++it) {
        const Rat& x = it->first;
        if (!first) cont += slope * (x - prev);
        first = false;
        prev = x;
        const Ev& e = it->second;
        slope += e.dslope;
        mass += e.jump;
        cn += e.dcn;
        gap += e.dgap;
        unk += e.dunk;
        if (x >= hi) break;
        auto nx = std::next(it);
        if (nx == ev.end()) break;
        if (x < lo) continue;
        const Rat& y = nx->first;
        BallSegment s;
        s.lo = x;
        s.hi = y;
        s.cm_lo = cont + mass;
        s.cm_hi = cont + slope * (y - x) + mass;
        s.cn = cn + gap;
        s.unknown = gap > 0 || unk > 0;
        out.push_back(s);
    }
    return out;
}

int euler_characteristic(const ScarTree& t) {
    return static_cast<int>(t.nodes.size()) - static_cast<int>(t.edges.size()) +
           static_cast<int>(t.mp.polygons.size());
}

int euler_check(const FoldingScheme& s, const FiniteScheme& fs) {
    auto pl = is_plain(s);
    if (!pl.plain) throw ScarError("refusing non-plain scheme: " + pl.reason);
    return euler_characteristic(build_scar(fs, TailMode::COLLAPSE));
}

}  // namespace paperfold
