#include "paperfold/collar.hpp"

#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace paperfold {

namespace {

Point2 add(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
Point2 sub(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
Point2 scale(const Point2& a, const Rat& k) { return {a.x * k, a.y * k}; }
Point2 lerp(const Point2& a, const Point2& b, const Rat& s) { return add(a, scale(sub(b, a), s)); }
Rat dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }

// inward unit normal of side i (counter-clockwise polygon)
Point2 inward_normal(const Polygon& p, std::size_t i) {
    const auto& a = p.vertices[i];
    const auto& b = p.vertices[(i + 1) % p.vertices.size()];
    Point2 d = scale(sub(b, a), 1 / p.side_lengths[i]);
    return {-d.y, d.x};
}

// the corner at height h is v + h * dir: the intersection of the two offset lines
std::vector<Point2> corner_dirs(const Polygon& p) {
    std::size_t n = p.vertices.size();
    std::vector<Point2> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Point2 a = inward_normal(p, (i + n - 1) % n), b = inward_normal(p, i);
        Rat den = 1 + dot(a, b);
        if (den == 0) throw CollarError("polygon has a zero interior angle at vertex " + std::to_string(i));
        out[i] = scale(add(a, b), 1 / den);
    }
    return out;
}

double half_angle(const Polygon& p, std::size_t i) {
    std::size_t n = p.vertices.size();
    const auto& v = p.vertices[i];
    const auto& prev = p.vertices[(i + n - 1) % n];
    const auto& next = p.vertices[(i + 1) % n];
    double ax = to_double(next.x - v.x), ay = to_double(next.y - v.y);
    double bx = to_double(prev.x - v.x), by = to_double(prev.y - v.y);
    double ang = std::atan2(ax * by - ay * bx, ax * bx + ay * by);
    if (ang < 0) ang += 2 * std::numbers::pi;
    return ang / 2;
}

std::vector<Trapezoid> trapezoids_at(const Multipolygon& mp, const Rat& h) {
    std::vector<Trapezoid> out;
    for (std::size_t pi = 0; pi < mp.polygons.size(); ++pi) {
        const auto& p = mp.polygons[pi];
        auto dirs = corner_dirs(p);
        std::size_t n = p.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t j = (i + 1) % n;
            Trapezoid t;
            t.polygon = static_cast<int>(pi);
            t.side = static_cast<int>(i);
            t.base0 = p.vertices[i];
            t.base1 = p.vertices[j];
            t.top0 = add(t.base0, scale(dirs[i], h));
            t.top1 = add(t.base1, scale(dirs[j], h));
            t.base_length = p.side_lengths[i];
            // tops are parallel to bases: signed length along the side direction
            t.top_length = dot(sub(t.top1, t.top0), sub(t.base1, t.base0)) / t.base_length;
            t.half_angle0 = half_angle(p, i);
            t.half_angle1 = half_angle(p, j);
            out.push_back(t);
        }
    }
    return out;
}

std::vector<Point2> quad(const Trapezoid& t) { return {t.base0, t.base1, t.top1, t.top0}; }

// closed convex quads share interior or boundary points
bool quads_touch(const std::vector<Point2>& a, const std::vector<Point2>& b) {
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (geom::segments_touch(a[i], a[(i + 1) % 4], b[j], b[(j + 1) % 4])) return true;
    return geom::strictly_inside(a[0], b) || geom::strictly_inside(b[0], a);
}

// neighbours sharing the vertical side s0-s1 must lie on opposite sides of its line
bool separated_by(const Point2& s0, const Point2& s1, const std::vector<Point2>& a, const std::vector<Point2>& b) {
    int sa = 0, sb = 0;
    for (const auto& p : a) {
        int o = geom::orient(s0, s1, p);
        if (o == 0) continue;
        if (sa == 0) sa = o;
        if (o != sa) return false;
    }
    for (const auto& p : b) {
        int o = geom::orient(s0, s1, p);
        if (o == 0) continue;
        if (sb == 0) sb = o;
        if (o != sb) return false;
    }
    return sa != 0 && sb != 0 && sa != sb;
}

}  // namespace

bool collar_conditions(const Multipolygon& mp, const Rat& h, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (h <= 0) return fail("height must be positive");
    auto tz = trapezoids_at(mp, h);
    for (const auto& t : tz) {
        if (t.top_length * 2 < t.base_length || t.top_length > 2 * t.base_length)
            return fail("top of side " + std::to_string(t.side) + " has length " + rat_str(t.top_length) +
                        ", outside [base/2, 2 base]");
    }
    for (std::size_t i = 0; i < tz.size(); ++i)
        for (std::size_t j = i + 1; j < tz.size(); ++j) {
            const auto& a = tz[i];
            const auto& b = tz[j];
            auto qa = quad(a), qb = quad(b);
            std::size_t n = mp.polygons[a.polygon].vertices.size();
            bool same = a.polygon == b.polygon;
            bool next = same && (a.side + 1) % static_cast<int>(n) == b.side;
            bool prev = same && (b.side + 1) % static_cast<int>(n) == a.side;
            if (next || prev) {
                const Point2& s0 = next ? a.base1 : a.base0;
                const Point2& s1 = next ? a.top1 : a.top0;
                if (!separated_by(s0, s1, qa, qb))
                    return fail("trapezoids " + std::to_string(a.side) + " and " + std::to_string(b.side) +
                                " overlap beyond their common vertical side");
                continue;
            }
            if (quads_touch(qa, qb))
                return fail("trapezoids " + std::to_string(a.side) + " and " + std::to_string(b.side) + " intersect");
        }
    return true;
}

Point2 CollarSpec::corner(int polygon, int vertex, const Rat& h) const {
    return add(mp.polygons.at(polygon).vertices.at(vertex), scale(corner_dir.at(polygon).at(vertex), h));
}

CollarSpec build_collar(const Multipolygon& mp, const std::optional<Rat>& hbar_override) {
    CollarSpec c;
    c.mp = mp;
    for (const auto& p : mp.polygons) c.corner_dir.push_back(corner_dirs(p));
    if (hbar_override) {
        std::string why;
        if (!collar_conditions(mp, *hbar_override, &why))
            throw CollarError("hbar override " + rat_str(*hbar_override) + " rejected: " + why);
        c.hbar = *hbar_override;
        c.from_override = true;
    } else {
        Rat hi = mp.boundary_length;
        int grow = 0;
        while (collar_conditions(mp, hi)) {
            hi *= 2;
            if (++grow > 64) throw CollarError("collar conditions hold at every tested height");
        }
        Rat lo = 0;
        for (int it = 0; it < 40; ++it) {
            Rat mid = (lo + hi) / 2;
            if (collar_conditions(mp, mid))
                lo = mid;
            else
                hi = mid;
        }
        if (lo <= 0) throw CollarError("no admissible collar height found");
        c.supremum = lo;
        c.hbar = lo * Rat(9, 10);
    }
    c.trapezoids = trapezoids_at(mp, c.hbar);
    return c;
}

CollarPoint collar_point(const CollarSpec& spec, const BoundaryParam& t, const Rat& h) {
    if (t.polygon < 0 || t.polygon >= static_cast<int>(spec.mp.polygons.size()))
        throw CollarError("polygon index out of range");
    const auto& p = spec.mp.polygons[t.polygon];
    if (t.t < 0 || t.t >= p.length) throw CollarError("boundary parameter " + rat_str(t.t) + " out of range");
    if (h < 0 || h > spec.hbar) throw CollarError("height " + rat_str(h) + " outside [0, hbar]");
    int i = p.side_of(t.t);
    int j = (i + 1) % static_cast<int>(p.vertices.size());
    Rat s = (t.t - p.vertex_params[i]) / p.side_lengths[i];
    Point2 foot = lerp(p.vertices[i], p.vertices[j], s);
    Point2 top = lerp(spec.corner(t.polygon, i, spec.hbar), spec.corner(t.polygon, j, spec.hbar), s);
    return {t, h, lerp(foot, top, h / spec.hbar)};
}

CollarPoint retract(const CollarSpec& spec, const BoundaryParam& t, const Rat& h, const Rat& h2) {
    if (h2 > h) throw CollarError("retraction must not raise the height");
    collar_point(spec, t, h);
    return collar_point(spec, t, h2);
}

std::vector<BoundaryParam> lift(const ScarTree& t, const ScarPoint& x) {
    if (x.at_node()) return t.nodes[x.node].fiber;
    std::vector<BoundaryParam> out;
    for (std::size_t p = 0; p < t.pieces.size(); ++p)
        for (const auto& pc : t.pieces[p])
            if (pc.edge == x.edge) out.push_back({static_cast<int>(p), pc.reversed ? Rat(pc.hi - x.offset) : Rat(pc.lo + x.offset)});
    return out;
}

namespace {

// distance of a scar point from the ball centre set, given exact node distances
std::optional<Rat> point_distance(const ScarTree& t, const NodeDist& dist, const ScarPoint& x,
                                  const std::optional<ScarPoint>& src) {
    std::optional<Rat> best;
    auto take = [&](const Rat& d) {
        if (!best || d < *best) best = d;
    };
    if (x.at_node()) {
        auto it = dist.find(x.node);
        if (it != dist.end()) take(it->second);
        return best;
    }
    const auto& e = t.edges[x.edge];
    auto iu = dist.find(e.u), iv = dist.find(e.v);
    if (iu != dist.end()) take(iu->second + x.offset);
    if (iv != dist.end()) take(iv->second + e.length - x.offset);
    if (src && !src->at_node() && src->edge == x.edge) take(rat_abs(src->offset - x.offset));
    return best;
}

}  // namespace

DiskBoundary disk_boundary(const ScarTree& t, const CollarSpec& spec, bool use_lambda, const BoundaryParam& q,
                           const Rat& r, const Rat& rbar) {
    if (r <= 0 || r >= rbar) throw CollarError("disk radius must lie in (0, rbar)");
    ScarPoint qs = t.normalize(t.locate(q));
    auto ci = ball_component(t, use_lambda, qs, r);
    if (ci.cn_status == CnStatus::UNKNOWN) throw CollarError("frontier touches the truncation tail at r = " + rat_str(r));
    if (ci.cn_status == CnStatus::BREAKPOINT) throw CollarError("r = " + rat_str(r) + " is not a planar radius");
    DiskBoundary db;
    db.r = r;
    db.height = spec.height_at(r, rbar);
    db.n = ci.cn;

    NodeDist dist;
    std::optional<ScarPoint> src;
    if (use_lambda) {
        dist = lambda_class(t, qs.node, r, r).dist;
    } else {
        dist = point_distances(t, qs, r);
        src = qs;
    }

    struct End {
        BoundaryParam p;
        int leaf;
    };
    std::vector<End> ends;
    for (const auto& x : ci.cc_points) {
        DiskBoundary::Leaf leaf;
        leaf.x = x;
        leaf.params = lift(t, x);
        if (leaf.params.size() != 2) throw CollarError("frontier point is not planar");
        for (const auto& p : leaf.params) {
            leaf.segments.push_back({collar_point(spec, p, 0).plane, collar_point(spec, p, db.height).plane});
            ends.push_back({p, static_cast<int>(db.leaves.size())});
        }
        db.leaves.push_back(std::move(leaf));
    }
    std::sort(ends.begin(), ends.end(), [](const End& a, const End& b) {
        return std::tie(a.p.polygon, a.p.t) < std::tie(b.p.polygon, b.p.t);
    });

    // the arcs of the boundary over which the ball lies
    for (std::size_t i = 0; i < ends.size(); ++i) {
        const auto& a = ends[i];
        std::size_t j = i + 1;
        if (j == ends.size() || ends[j].p.polygon != a.p.polygon) {
            j = i;
            while (j > 0 && ends[j - 1].p.polygon == a.p.polygon) --j;
        }
        const auto& poly = spec.mp.polygons[a.p.polygon];
        Rat lo = a.p.t, hi = ends[j].p.t;
        if (hi <= lo) hi += poly.length;
        Rat mid = (lo + hi) / 2;
        if (mid >= poly.length) mid -= poly.length;
        auto d = point_distance(t, dist, t.normalize(t.locate({a.p.polygon, mid})), src);
        if (!d || *d >= r) continue;
        DiskBoundary::Arc arc;
        arc.polygon = a.p.polygon;
        arc.lo = lo;
        arc.hi = hi;
        arc.polyline.push_back(collar_point(spec, a.p, db.height).plane);
        for (int lap = 0; lap < 2; ++lap)
            for (std::size_t v = 0; v < poly.vertices.size(); ++v) {
                Rat vp = poly.vertex_params[v] + lap * poly.length;
                if (lo < vp && vp < hi) arc.polyline.push_back(spec.corner(a.p.polygon, static_cast<int>(v), db.height));
            }
        arc.polyline.push_back(collar_point(spec, ends[j].p, db.height).plane);
        db.arcs.push_back(std::move(arc));
    }

    // chain: arc end -> leaf -> other foot of the leaf -> next arc start
    auto same = [](const BoundaryParam& a, const BoundaryParam& b) { return a.polygon == b.polygon && a.t == b.t; };
    auto norm = [&](int poly, const Rat& x) {
        const Rat& L = spec.mp.polygons[poly].length;
        return x >= L ? Rat(x - L) : x;
    };
    std::vector<char> seen(db.arcs.size(), 0);
    int cur = db.arcs.empty() ? -1 : 0;
    while (cur >= 0 && !seen[cur]) {
        seen[cur] = 1;
        db.order.push_back(cur);
        BoundaryParam end{db.arcs[cur].polygon, norm(db.arcs[cur].polygon, db.arcs[cur].hi)};
        int nxt = -1;
        for (const auto& leaf : db.leaves) {
            int k = same(leaf.params[0], end) ? 1 : (same(leaf.params[1], end) ? 0 : -1);
            if (k < 0) continue;
            for (std::size_t a = 0; a < db.arcs.size(); ++a)
                if (same({db.arcs[a].polygon, db.arcs[a].lo}, leaf.params[k])) nxt = static_cast<int>(a);
        }
        cur = nxt;
    }
    db.closed = db.n > 0 && static_cast<int>(db.arcs.size()) == db.n && static_cast<int>(db.order.size()) == db.n &&
                cur == 0;
    return db;
}

long double annulus_module_bound(const GoodnessProfile& profile, const Rat& r, const Rat& s) {
    if (r >= s) throw CollarError("annulus radii must satisfy r < s");
    return integral_lower_bound(profile, r, s);
}

double grotzsch_bound(double R, std::complex<double> z1, std::complex<double> z2) {
    double d = std::abs(z1 - z2);
    if (d == 0) throw CollarError("Grotzsch bound needs distinct points");
    return std::log(8 * R / d) / (2 * std::numbers::pi);
}

ResolvedParams resolve_params(TruncationCache& cache, const std::optional<Rat>& rbar, const std::optional<Rat>& hbar) {
    const auto& s = cache.scheme();
    ResolvedParams out;
    const auto& e = cache.at_items(Rat(1, 64));
    out.ir = injectivity_radius(e.collapse, rbar ? rbar : s.meta.rbar);
    out.collar = build_collar(s.mp, hbar ? hbar : s.meta.hbar);
    out.cp.rbar = out.ir.rbar;
    out.cp.hbar = out.collar.hbar;
    out.cp.M = goodness_constant(out.cp.rbar, out.cp.hbar);
    return out;
}

}  // namespace paperfold
