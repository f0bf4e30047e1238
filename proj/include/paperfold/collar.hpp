#pragma once

#include "paperfold/criterion.hpp"

#include <complex>

namespace paperfold {

// Trapezoid over side i of a polygon: base v_i v_{i+1}, top c_i c_{i+1} at height hbar.
struct Trapezoid {
    int polygon = 0;
    int side = 0;
    Point2 base0, base1, top0, top1;
    Rat base_length, top_length;
    double half_angle0 = 0, half_angle1 = 0;  // half interior angles at the base ends
};

struct CollarSpec {
    Multipolygon mp;
    Rat hbar;
    Rat supremum;  // largest admissible height found by bisection (0 for an override)
    bool from_override = false;
    std::vector<Trapezoid> trapezoids;
    // per polygon, per vertex: corner displacement per unit height along the bisector
    std::vector<std::vector<Point2>> corner_dir;

    Point2 corner(int polygon, int vertex, const Rat& h) const;
    // h(r) = (hbar / 2 rbar) r
    Rat height_at(const Rat& r, const Rat& rbar) const { return hbar / (2 * rbar) * r; }
};

struct CollarError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Both collar conditions at height h: tops within [base/2, 2 base], trapezoids meet only along vertical sides.
bool collar_conditions(const Multipolygon& mp, const Rat& h, std::string* why = nullptr);

CollarSpec build_collar(const Multipolygon& mp, const std::optional<Rat>& hbar_override = std::nullopt);

struct CollarPoint {
    BoundaryParam t;
    Rat h;
    Point2 plane;
};

CollarPoint collar_point(const CollarSpec& spec, const BoundaryParam& t, const Rat& h);
// Slides (t, h) down its vertical leaf to height h2 <= h.
CollarPoint retract(const CollarSpec& spec, const BoundaryParam& t, const Rat& h, const Rat& h2);

// Boundary parameters of a scar point (two for a planar point).
std::vector<BoundaryParam> lift(const ScarTree& t, const ScarPoint& x);

struct DiskBoundary {
    Rat r, height;
    int n = 0;  // cn
    struct Leaf {
        ScarPoint x;
        std::vector<BoundaryParam> params;
        std::vector<std::pair<Point2, Point2>> segments;  // foot, top per param
    };
    struct Arc {
        int polygon = 0;
        Rat lo, hi;  // boundary interval, hi may exceed the polygon length when wrapping
        std::vector<Point2> polyline;
    };
    std::vector<Leaf> leaves;
    std::vector<Arc> arcs;
    bool closed = false;     // leaves and arcs chain into a single closed curve
    std::vector<int> order;  // arcs in traversal order
};

DiskBoundary disk_boundary(const ScarTree& t, const CollarSpec& spec, bool use_lambda, const BoundaryParam& q,
                           const Rat& r, const Rat& rbar);

// Lower bound for the module of Ann(q; r, s).
long double annulus_module_bound(const GoodnessProfile& profile, const Rat& r, const Rat& s);
// Upper bound (1/2pi) ln(8R/|z1 - z2|).
double grotzsch_bound(double R, std::complex<double> z1, std::complex<double> z2);

// rbar, hbar and M from overrides, scheme metadata or automatic selection.
struct ResolvedParams {
    CriterionParams cp;
    InjectivityRadius ir;
    CollarSpec collar;
};
ResolvedParams resolve_params(TruncationCache& cache, const std::optional<Rat>& rbar,
                              const std::optional<Rat>& hbar);

}  // namespace paperfold
