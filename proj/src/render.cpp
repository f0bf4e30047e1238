#include "paperfold/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace paperfold {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

std::pair<double, double> plane(const Point2& p) { return {to_double(p.x), to_double(p.y)}; }

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    std::string s = buf;
    if (s == "-0.0000") s = "0.0000";
    return s;
}

std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else if (c == '"') o += "&quot;";
        else o += c;
    }
    return o;
}

}  // namespace

RenderScene outline_scene(const Multipolygon& mp) {
    RenderScene s;
    RenderLayer l;
    l.name = "polygons";
    for (const auto& p : mp.polygons) {
        RenderPath path;
        for (const auto& v : p.vertices) path.points.push_back(plane(v));
        path.closed = true;
        path.width = 1.5;
        l.paths.push_back(path);
    }
    s.layers.push_back(l);
    return s;
}

void add_pairings(RenderScene& scene, const FiniteScheme& fs) {
    std::vector<Rat> lengths;
    for (const auto& p : fs.pairings) lengths.push_back(p.length());
    std::sort(lengths.begin(), lengths.end(), [](const Rat& a, const Rat& b) { return a > b; });
    lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
    RenderLayer l;
    l.name = "pairings";
    for (const auto& p : fs.pairings) {
        auto fam = std::find(lengths.begin(), lengths.end(), p.length()) - lengths.begin();
        std::string colour = kPalette[fam % 10];
        const auto& pa = fs.mp.polygons[p.pa];
        const auto& pb = fs.mp.polygons[p.pb];
        auto seg = [&](const Polygon& poly, const Rat& lo, const Rat& hi) {
            RenderPath path;
            path.stroke = colour;
            path.width = 3;
            path.points.push_back(plane(poly.point_at(lo)));
            for (std::size_t v = 0; v < poly.vertices.size(); ++v)
                if (lo < poly.vertex_params[v] && poly.vertex_params[v] < hi) path.points.push_back(plane(poly.vertices[v]));
            Rat end = hi == poly.length ? Rat(0) : hi;
            path.points.push_back(plane(poly.point_at(end)));
            return path;
        };
        l.paths.push_back(seg(pa, p.a_start, p.a_end));
        l.paths.push_back(seg(pb, p.b_start, p.b_end));
        // chord joining the two midpoints
        RenderPath chord;
        chord.stroke = colour;
        chord.width = 0.6;
        Rat ma = (p.a_start + p.a_end) / 2, mb = (p.b_start + p.b_end) / 2;
        chord.points.push_back(plane(pa.point_at(ma)));
        chord.points.push_back(plane(pb.point_at(mb)));
        l.paths.push_back(chord);
    }
    scene.layers.push_back(l);
}

void add_scar(RenderScene& scene, const ScarTree& t) {
    RenderLayer l;
    l.name = "scar";
    l.plane = false;
    std::size_t n = t.nodes.size();
    if (n == 0 || t.parent.size() != n) {
        scene.layers.push_back(l);
        return;
    }
    std::vector<std::vector<int>> kids(n);
    for (std::size_t v = 0; v < n; ++v)
        if (t.parent[v] >= 0) kids[t.parent[v]].push_back(static_cast<int>(v));
    std::vector<int> leaves(n, 0);
    std::vector<int> order;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (int c : kids[v]) stack.push_back(c);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        leaves[v] = kids[v].empty() ? 1 : 0;
        for (int c : kids[v]) leaves[v] += leaves[c];
    }
    std::vector<double> a0(n, 0), a1(n, 2 * std::numbers::pi), x(n, 0), y(n, 0);
    for (int v : order) {
        double start = a0[v];
        for (int c : kids[v]) {
            double span = (a1[v] - a0[v]) * leaves[c] / leaves[v];
            a0[c] = start;
            a1[c] = start + span;
            start += span;
            double mid = (a0[c] + a1[c]) / 2;
            double len = to_double(t.edges[t.parent_edge[c]].length);
            x[c] = x[v] + len * std::cos(mid);
            y[c] = y[v] + len * std::sin(mid);
        }
    }
    for (std::size_t v = 1; v < n; ++v) {
        if (t.parent[v] < 0) continue;
        const auto& e = t.edges[t.parent_edge[v]];
        RenderPath p;
        p.points = {{x[t.parent[v]], y[t.parent[v]]}, {x[v], y[v]}};
        p.stroke = e.gap ? "#aaaaaa" : "#333333";
        p.width = 1;
        l.paths.push_back(p);
    }
    for (std::size_t v = 0; v < n; ++v)
        if (t.nodes[v].lambda) {
            RenderPath p;
            double r = 0.006;
            for (int k = 0; k < 8; ++k)
                p.points.push_back({x[v] + r * std::cos(k * std::numbers::pi / 4), y[v] + r * std::sin(k * std::numbers::pi / 4)});
            p.closed = true;
            p.stroke = "#d62728";
            p.fill = "#d62728";
            l.paths.push_back(p);
        }
    scene.layers.push_back(l);
}

void add_collar(RenderScene& scene, const CollarSpec& c) {
    RenderLayer l;
    l.name = "collar";
    for (const auto& tz : c.trapezoids) {
        RenderPath p;
        p.points = {plane(tz.base0), plane(tz.base1), plane(tz.top1), plane(tz.top0)};
        p.closed = true;
        p.stroke = "#888888";
        p.width = 0.5;
        p.fill = "#eeeeee";
        l.paths.push_back(p);
    }
    scene.layers.push_back(l);
}

void add_disk(RenderScene& scene, const DiskBoundary& d, const std::string& name, const std::string& colour) {
    RenderLayer l;
    l.name = name;
    for (const auto& arc : d.arcs) {
        RenderPath p;
        for (const auto& q : arc.polyline) p.points.push_back(plane(q));
        p.stroke = colour;
        p.width = 1.2;
        l.paths.push_back(p);
    }
    for (const auto& leaf : d.leaves)
        for (const auto& [foot, top] : leaf.segments) {
            RenderPath p;
            p.points = {plane(foot), plane(top)};
            p.stroke = colour;
            p.width = 1.2;
            l.paths.push_back(p);
        }
    scene.layers.push_back(l);
}

std::string render_svg(const RenderScene& scene) {
    // separate bounding boxes for the plane panel and the scar panel
    struct Box {
        double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
        bool empty() const { return x0 > x1; }
    } box[2];
    for (const auto& l : scene.layers)
        for (const auto& p : l.paths)
            for (const auto& [x, y] : p.points) {
                Box& b = box[l.plane ? 0 : 1];
                b.x0 = std::min(b.x0, x);
                b.y0 = std::min(b.y0, y);
                b.x1 = std::max(b.x1, x);
                b.y1 = std::max(b.y1, y);
            }
    const double panel = 500, margin = 20;
    bool two = !box[1].empty();
    double width = two ? 2 * panel + 3 * margin : panel + 2 * margin;
    double height = panel + 2 * margin;
    auto map = [&](int k, double x, double y) {
        const Box& b = box[k];
        double span = std::max({b.x1 - b.x0, b.y1 - b.y0, 1e-12});
        double s = panel / span;
        double ox = margin + (k == 1 ? panel + margin : 0);
        return std::make_pair(ox + (x - b.x0) * s, margin + panel - (y - b.y0) * s);
    };
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n";
    if (!scene.title.empty()) o << "<title>" << escape(scene.title) << "</title>\n";
    for (const auto& l : scene.layers) {
        o << "<g id=\"" << escape(l.name) << "\">\n";
        for (const auto& p : l.paths) {
            if (p.points.empty()) continue;
            o << "<path d=\"";
            for (std::size_t i = 0; i < p.points.size(); ++i) {
                auto [x, y] = map(l.plane ? 0 : 1, p.points[i].first, p.points[i].second);
                o << (i == 0 ? "M" : " L") << num(x) << " " << num(y);
            }
            if (p.closed) o << " Z";
            o << "\" stroke=\"" << p.stroke << "\" stroke-width=\"" << num(p.width) << "\" fill=\"" << p.fill
              << "\"/>\n";
        }
        o << "</g>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace paperfold
