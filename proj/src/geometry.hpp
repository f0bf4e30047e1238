#pragma once

#include "paperfold/scheme.hpp"

namespace paperfold::geom {

inline Rat cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline int orient(const Point2& o, const Point2& a, const Point2& b) {
    Rat c = cross(o, a, b);
    return c > 0 ? 1 : (c < 0 ? -1 : 0);
}

inline bool on_segment(const Point2& p, const Point2& a, const Point2& b) {
    return orient(a, b, p) == 0 && rat_min(a.x, b.x) <= p.x && p.x <= rat_max(a.x, b.x) &&
           rat_min(a.y, b.y) <= p.y && p.y <= rat_max(a.y, b.y);
}

// closed segments share at least one point
inline bool segments_touch(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
    int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    return on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d);
}

inline Rat signed_area2(const std::vector<Point2>& v) {
    Rat s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % v.size()];
        s += p.x * q.y - q.x * p.y;
    }
    return s;
}

// strict interior test (boundary points count as outside)
inline bool strictly_inside(const Point2& p, const std::vector<Point2>& poly) {
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        if (on_segment(p, poly[j], poly[i])) return false;
        const auto& a = poly[i];
        const auto& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            Rat xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xint) in = !in;
        }
    }
    return in;
}

}  // namespace paperfold::geom
