#pragma once

#include "paperfold/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace paperfold {

struct Point2 {
    Rat x, y;
};

struct Polygon {
    int id = 0;
    std::vector<Point2> vertices;   // counter-clockwise
    std::vector<Rat> side_lengths;  // side i joins vertex i to vertex i+1
    std::vector<Rat> vertex_params; // arc-length parameter of vertex i
    Rat length;

    Point2 point_at(const Rat& t) const;
    int side_of(const Rat& t) const;  // side containing t (t on a vertex belongs to the next side)
};

struct Multipolygon {
    std::vector<Polygon> polygons;
    Rat boundary_length;

    const Rat& length(int p) const { return polygons.at(p).length; }
};

struct BoundaryParam {
    int polygon = 0;
    Rat t;
};

// Segment a = [a_start, a_end] on polygon pa is glued to b = [b_start, b_end]
// on polygon pb, reversing orientation: a_start ~ b_end and a_end ~ b_start.
struct SegmentPairing {
    int pa = 0, pb = 0;
    Rat a_start, a_end, b_start, b_end;

    Rat length() const { return a_end - a_start; }
    bool is_fold() const { return pa == pb && a_end == b_start; }
    // image of a point of one segment in the other
    Rat partner(int polygon, const Rat& t, bool from_a) const;
};

struct AffinePiece {
    Rat src_lo, src_hi, dst_lo, dst_hi;
};

// Orientation-preserving piecewise-affine replication on polygon 0. All pieces
// share the contraction factor sigma.
struct Rule {
    std::string id;
    std::vector<AffinePiece> pieces;
    Rat sigma;
};

struct SingularDecl {
    enum class Kind { Param, Cantor };
    Kind kind = Kind::Param;
    Rat param;            // Param
    Rat lo, hi, ratio;    // Cantor: keep [lo, lo+ratio*len] and [hi-ratio*len, hi] recursively
};

// Folds of polynomially shrinking blocks on polygon 0 accumulating at lo: block j is
// [lo + len/(j+2), lo + len/(j+1)], folded at its midpoint.
struct FoldSequence {
    Rat lo, len;
};

struct PairingGenerator {
    std::vector<SegmentPairing> base;
    std::vector<Rule> rules;
    std::vector<FoldSequence> sequences;
    std::vector<SingularDecl> singular;
};

struct SchemeMeta {
    std::string name;
    std::optional<Rat> rbar, hbar;
    // geometric radius windows r_k = wtop * wratio^(k-1)
    std::optional<Rat> wtop, wratio;
};

struct FoldingScheme {
    Multipolygon mp;
    PairingGenerator gen;
    SchemeMeta meta;
};

struct ParseError : std::runtime_error {
    int line, column;
    std::string message;  // without the location prefix
    ParseError(const std::string& msg, int line_, int column_);
};

struct SchemeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

FoldingScheme parse_scheme(const std::string& text);
std::string serialize_scheme(const FoldingScheme& s);
Multipolygon make_multipolygon(const std::vector<std::vector<Point2>>& polys);

struct CheckEntry {
    std::string name;
    bool ok = true;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckEntry> checks;
    Rat total_pairing_length;
    bool ok() const;
    const CheckEntry* find(const std::string& name) const;
};

ValidationReport validate(const FoldingScheme& s, int depth_check = 4);

struct PlainnessResult {
    bool plain = false;
    std::string reason;                 // "multiple polygons", "linked pairings", "rule order"
    std::optional<SegmentPairing> x, y; // linked witness
};

PlainnessResult is_plain(const FoldingScheme& s);

// One pending (unexpanded) rule image. Its region is the union of `pieces`.
struct PendingItem {
    int rule = -1;
    int sequence = -1;  // fold sequence index when rule < 0
    int depth = 0;
    std::vector<AffinePiece> map;  // composite: src piece of the rule -> region piece
    std::vector<std::pair<Rat, Rat>> region;
    Rat measure;
};

struct Gap {
    int item = 0;
    int polygon = 0;
    Rat lo, hi;
};

struct FiniteScheme {
    Multipolygon mp;
    std::vector<SegmentPairing> pairings;
    std::vector<Gap> gaps;
    std::vector<PendingItem> items;
    Rat tail_measure;
    // known singular parameters (orbit images of declared points)
    std::vector<BoundaryParam> singular_params;
    std::vector<SingularDecl> singular_decls;
    int expansions = 0;

    bool is_declared_singular(const BoundaryParam& b) const;
};

// Expands rule images, largest region first, until the tail is at most eps.
FiniteScheme truncate(const FoldingScheme& s, const Rat& eps);
// Same expansion order, stopping once every pending region is at most max_item.
FiniteScheme truncate_items(const FoldingScheme& s, const Rat& max_item);
// Expands every item of depth <= depth.
FiniteScheme truncate_depth(const FoldingScheme& s, int depth);

// Closed-form tail after full expansion to the given depth.
Rat tail_measure(const FoldingScheme& s, int depth);
// Total pairing length over the full expansion.
Rat total_pairing_length(const FoldingScheme& s);

FoldingScheme builtin_example(const std::string& name);
std::string builtin_text(const std::string& name);

bool in_cantor(const SingularDecl& d, const Rat& t);

}  // namespace paperfold
