#pragma once

#include "paperfold/scheme.hpp"

#include <map>
#include <optional>
#include <unordered_map>

namespace paperfold {

enum class TailMode { COLLAPSE, FREE };

const char* tail_mode_name(TailMode m);

struct ScarNode {
    std::vector<BoundaryParam> fiber;
    bool polygon_vertex = false;
    bool lambda = false;  // holds a declared singular point (COLLAPSE: items count as candidates)
    int item = -1;        // COLLAPSE: pending item contracted into this node
    Rat item_mass = 0;
};

// Paired arcs carry m_G-mass 2 per unit length, free gap arcs 1.
struct ScarEdge {
    int u = -1, v = -1;
    Rat length;
    int mass_factor = 2;
    bool gap = false;
    int pairing = -1;
    int polygon = 0;
    Rat lo;  // boundary parameter of the u end on the representative side
};

struct ScarPoint {
    int node = -1;
    int edge = -1;
    Rat offset;  // from edge.u
    bool at_node() const { return node >= 0; }
};

struct Adj {
    int edge;
    int to;
};

class ScarTree {
public:
    TailMode mode = TailMode::COLLAPSE;
    std::vector<ScarNode> nodes;
    std::vector<ScarEdge> edges;
    std::vector<std::vector<Adj>> adj;
    Rat total_measure;
    Rat tail_measure;
    bool acyclic = false;
    bool connected = false;
    std::vector<SingularDecl> decls;
    std::vector<BoundaryParam> singular_params;
    Multipolygon mp;

    // Elementary boundary interval: an edge (possibly traversed backwards) or a collapsed node.
    struct Piece {
        Rat lo, hi;
        int edge = -1;
        int node = -1;
        bool reversed = false;
    };
    std::vector<std::vector<Piece>> pieces;          // per polygon, sorted by lo
    std::vector<std::map<Rat, int>> break_nodes;     // per polygon, breakpoint -> node

    // rooted structure (trees only)
    std::vector<int> parent, parent_edge, hops;
    std::vector<Rat> depth;

    ScarPoint locate(const BoundaryParam& b) const;
    ScarPoint normalize(const ScarPoint& p) const;
    bool declared_singular(const BoundaryParam& b) const;
    int degree(int node) const { return static_cast<int>(adj[node].size()); }
    std::size_t fiber_size(int node) const { return nodes[node].fiber.size(); }
};

struct ScarError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// check_tree=false skips the dendrite verification (used to count cells of non-plain input).
ScarTree build_scar(const FiniteScheme& fs, TailMode mode, bool check_tree = true);

// Exact distance on a tree; on a graph with cycles the exact length of a shortest
// float-guided path, hence an upper bound.
Rat scar_distance(const ScarTree& t, const ScarPoint& x, const ScarPoint& y);

struct DistanceBounds {
    Rat lo, hi;
    Rat width() const { return hi - lo; }
};

DistanceBounds distance(const ScarTree& collapse, const ScarTree& free, const BoundaryParam& x,
                        const BoundaryParam& y);

// Exact multi-source distances up to cutoff (inclusive).
using NodeDist = std::unordered_map<int, Rat>;
NodeDist node_distances(const ScarTree& t, const std::vector<std::pair<int, Rat>>& sources, const Rat& cutoff);
NodeDist point_distances(const ScarTree& t, const ScarPoint& p, const Rat& cutoff);

enum class PointKind { PLANAR, VERTEX, DECLARED_SINGULAR, TRUNCATION_UNKNOWN };
const char* point_kind_name(PointKind k);

struct PointClass {
    PointKind kind = PointKind::PLANAR;
    int valence = 2;
};

PointClass classify_point(const ScarTree& t, const ScarPoint& x);
PointClass classify_point(const ScarTree& t, const BoundaryParam& b);

// The Lambda class of q at radius r: members joined by chains of distance < 2r.
struct LambdaClass {
    std::vector<int> members;
    Rat max_join = 0;   // largest single-linkage step; the class is stable for r > max_join/2
    NodeDist dist;      // distance to the class, up to the requested cutoff
};

LambdaClass lambda_class(const ScarTree& t, int q_node, const Rat& r, const Rat& cutoff);

enum class CnStatus { KNOWN, UNKNOWN, BREAKPOINT };
const char* cn_status_name(CnStatus s);

struct ComponentInfo {
    Rat cm;
    std::vector<ScarPoint> cc_points;
    int cn = 0;
    CnStatus cn_status = CnStatus::KNOWN;
    std::vector<int> members;
    bool tail_touch = false;  // the ball reaches a collapsed item or a free gap arc
};

// Base Lambda when use_lambda, else the single point q.
ComponentInfo ball_component(const ScarTree& t, bool use_lambda, const ScarPoint& q, const Rat& r);

// Piecewise description of cm and cn over (lo, hi) for a fixed source set.
struct BallSegment {
    Rat lo, hi;
    Rat cm_lo, cm_hi;  // limits of cm at the ends of the open interval
    int cn = 0;
    bool unknown = false;  // frontier on a free gap arc or inside a collapsed item
};

std::vector<BallSegment> ball_segments(const ScarTree& t, const NodeDist& dist, const Rat& lo, const Rat& hi,
                                       const std::optional<ScarPoint>& point_source = std::nullopt);

int euler_characteristic(const ScarTree& t);
// Refuses non-plain schemes.
int euler_check(const FoldingScheme& s, const FiniteScheme& fs);

}  // namespace paperfold
