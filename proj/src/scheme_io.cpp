#include "geometry.hpp"
#include "paperfold/scheme.hpp"

#include <map>
#include <sstream>

namespace paperfold {

ParseError::ParseError(const std::string& msg, int line_, int column_)
    : std::runtime_error("line " + std::to_string(line_) + ", column " + std::to_string(column_) + ": " + msg),
      line(line_), column(column_), message(msg) {}

Point2 Polygon::point_at(const Rat& t_in) const {
    Rat t = t_in;
    if (t >= length) t -= length;
    int i = side_of(t);
    const Point2& a = vertices[i];
    const Point2& b = vertices[(i + 1) % vertices.size()];
    Rat f = (t - vertex_params[i]) / side_lengths[i];
    return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
}

int Polygon::side_of(const Rat& t) const {
    int n = static_cast<int>(vertices.size());
    for (int i = n - 1; i >= 0; --i)
        if (vertex_params[i] <= t) return i;
    return 0;
}

Rat SegmentPairing::partner(int polygon, const Rat& t, bool from_a) const {
    (void)polygon;
    if (from_a) return b_end - (t - a_start);
    return a_start + (b_end - t);
}

Multipolygon make_multipolygon(const std::vector<std::vector<Point2>>& polys) {
    Multipolygon mp;
    mp.boundary_length = 0;
    int id = 0;
    for (const auto& verts : polys) {
        if (verts.size() < 3) throw SchemeError("polygon " + std::to_string(id) + " has fewer than 3 vertices");
        Polygon p;
        p.id = id;
        p.vertices = verts;
        p.length = 0;
        for (std::size_t i = 0; i < verts.size(); ++i) {
            const auto& a = verts[i];
            const auto& b = verts[(i + 1) % verts.size()];
            Rat d2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
            Rat len;
            if (d2 == 0) throw SchemeError("polygon " + std::to_string(id) + " has a zero-length side");
            if (!rat_sqrt(d2, len))
                throw SchemeError("polygon " + std::to_string(id) + " side " + std::to_string(i) +
                                  " has irrational length");
            p.vertex_params.push_back(p.length);
            p.side_lengths.push_back(len);
            p.length += len;
        }
        mp.boundary_length += p.length;
        mp.polygons.push_back(std::move(p));
        ++id;
    }
    return mp;
}

namespace {

struct Tok {
    std::string text;
    int col;
};

std::vector<Tok> split(const std::string& line) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

Rat rat_tok(const Tok& t, int line) {
    Rat r;
    if (!try_parse_rat(t.text, r)) throw ParseError("expected rational, got '" + t.text + "'", line, t.col);
    return r;
}

int int_tok(const Tok& t, int line) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(t.text, &pos);
        if (pos != t.text.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ParseError("expected integer, got '" + t.text + "'", line, t.col);
    }
}

// "t" or "q:t"
std::pair<int, Rat> param_tok(const Tok& t, int line, int default_poly) {
    auto c = t.text.find(':');
    if (c == std::string::npos) return {default_poly, rat_tok(t, line)};
    Tok a{t.text.substr(0, c), t.col};
    Tok b{t.text.substr(c + 1), t.col + static_cast<int>(c) + 1};
    return {int_tok(a, line), rat_tok(b, line)};
}

std::string param_str(int poly, int default_poly, const Rat& t) {
    if (poly == default_poly) return rat_str(t);
    return std::to_string(poly) + ":" + rat_str(t);
}

}  // namespace

FoldingScheme parse_scheme(const std::string& text) {
    FoldingScheme s;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::map<int, std::pair<std::vector<Point2>, int>> polys;
    std::vector<std::pair<SegmentPairing, int>> pairs;
    std::vector<std::string> rule_order;
    std::map<std::string, Rule> rules;
    std::map<std::string, int> rule_line;
    std::vector<std::pair<FoldSequence, int>> seqs;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = split(line);
        if (toks.empty()) continue;
        const std::string& kw = toks[0].text;
        if (kw == "polygon") {
            if (toks.size() < 2) throw ParseError("polygon needs an id", lineno, toks[0].col);
            int id = int_tok(toks[1], lineno);
            if ((toks.size() - 2) % 2 != 0 || toks.size() < 8)
                throw ParseError("polygon needs at least 3 coordinate pairs", lineno, toks[0].col);
            if (polys.count(id)) throw ParseError("duplicate polygon id", lineno, toks[1].col);
            std::vector<Point2> v;
            for (std::size_t i = 2; i + 1 < toks.size(); i += 2)
                v.push_back({rat_tok(toks[i], lineno), rat_tok(toks[i + 1], lineno)});
            polys[id] = {v, lineno};
        } else if (kw == "pair") {
            if (toks.size() != 6) throw ParseError("pair needs 5 fields", lineno, toks[0].col);
            int p = int_tok(toks[1], lineno);
            auto as = param_tok(toks[2], lineno, p);
            auto ae = param_tok(toks[3], lineno, p);
            auto bs = param_tok(toks[4], lineno, p);
            auto be = param_tok(toks[5], lineno, p);
            if (as.first != ae.first) throw ParseError("segment a spans two polygons", lineno, toks[3].col);
            if (bs.first != be.first) throw ParseError("segment b spans two polygons", lineno, toks[5].col);
            SegmentPairing sp{as.first, bs.first, as.second, ae.second, bs.second, be.second};
            if (sp.a_end <= sp.a_start) throw ParseError("segment a is empty or reversed", lineno, toks[3].col);
            if (sp.b_end <= sp.b_start) throw ParseError("segment b is empty or reversed", lineno, toks[5].col);
            if (sp.a_end - sp.a_start != sp.b_end - sp.b_start)
                throw ParseError("length mismatch: |a| = " + rat_str(sp.a_end - sp.a_start) +
                                     ", |b| = " + rat_str(sp.b_end - sp.b_start),
                                 lineno, toks[2].col);
            pairs.push_back({sp, lineno});
        } else if (kw == "rule") {
            if (toks.size() != 7) throw ParseError("rule needs 6 fields", lineno, toks[0].col);
            const std::string& id = toks[1].text;
            AffinePiece pc{rat_tok(toks[2], lineno), rat_tok(toks[3], lineno), rat_tok(toks[4], lineno),
                           rat_tok(toks[5], lineno)};
            Rat sigma = rat_tok(toks[6], lineno);
            if (!(sigma > 0 && sigma < 1)) throw ParseError("sigma must lie in (0,1)", lineno, toks[6].col);
            if (pc.src_hi <= pc.src_lo || pc.dst_hi <= pc.dst_lo)
                throw ParseError("empty rule interval", lineno, toks[2].col);
            if ((pc.dst_hi - pc.dst_lo) != sigma * (pc.src_hi - pc.src_lo))
                throw ParseError("rule interval lengths do not match sigma", lineno, toks[6].col);
            if (!rules.count(id)) {
                rules[id] = Rule{id, {}, sigma};
                rule_order.push_back(id);
                rule_line[id] = lineno;
            } else if (rules[id].sigma != sigma) {
                throw ParseError("rule pieces disagree on sigma", lineno, toks[6].col);
            }
            rules[id].pieces.push_back(pc);
        } else if (kw == "foldseq") {
            if (toks.size() != 3) throw ParseError("foldseq needs 2 fields", lineno, toks[0].col);
            Rat lo = rat_tok(toks[1], lineno), hi = rat_tok(toks[2], lineno);
            if (!(lo < hi)) throw ParseError("empty fold sequence interval", lineno, toks[2].col);
            seqs.push_back({{lo, hi - lo}, lineno});
        } else if (kw == "singular") {
            if (toks.size() == 2) {
                SingularDecl d;
                d.kind = SingularDecl::Kind::Param;
                d.param = rat_tok(toks[1], lineno);
                s.gen.singular.push_back(d);
            } else if (toks.size() == 5 && toks[1].text == "cantor") {
                SingularDecl d;
                d.kind = SingularDecl::Kind::Cantor;
                d.lo = rat_tok(toks[2], lineno);
                d.hi = rat_tok(toks[3], lineno);
                d.ratio = rat_tok(toks[4], lineno);
                if (!(d.lo < d.hi) || !(d.ratio > 0) || !(2 * d.ratio < 1))
                    throw ParseError("bad cantor description", lineno, toks[2].col);
                s.gen.singular.push_back(d);
            } else {
                throw ParseError("expected 'singular <param>' or 'singular cantor <lo> <hi> <ratio>'", lineno,
                                 toks[0].col);
            }
        } else if (kw == "meta") {
            for (std::size_t i = 1; i < toks.size(); ++i) {
                auto eq = toks[i].text.find('=');
                if (eq == std::string::npos) throw ParseError("expected key=value", lineno, toks[i].col);
                std::string key = toks[i].text.substr(0, eq);
                Tok val{toks[i].text.substr(eq + 1), toks[i].col + static_cast<int>(eq) + 1};
                if (key == "name") s.meta.name = val.text;
                else if (key == "rbar") s.meta.rbar = rat_tok(val, lineno);
                else if (key == "hbar") s.meta.hbar = rat_tok(val, lineno);
                else if (key == "wtop") s.meta.wtop = rat_tok(val, lineno);
                else if (key == "wratio") s.meta.wratio = rat_tok(val, lineno);
                else throw ParseError("unknown meta key '" + key + "'", lineno, toks[i].col);
            }
        } else {
            throw ParseError("unknown directive '" + kw + "'", lineno, toks[0].col);
        }
    }
    if (polys.empty()) throw ParseError("no polygon", lineno, 1);
    std::vector<std::vector<Point2>> pv;
    int expect = 0;
    for (auto& [id, v] : polys) {
        if (id != expect) throw ParseError("polygon ids must be 0,1,2,...", v.second, 1);
        ++expect;
        pv.push_back(v.first);
    }
    try {
        s.mp = make_multipolygon(pv);
    } catch (const SchemeError& e) {
        throw ParseError(e.what(), polys.begin()->second.second, 1);
    }
    for (std::size_t i = 0; i < s.mp.polygons.size(); ++i) {
        const auto& v = s.mp.polygons[i].vertices;
        if (geom::signed_area2(v) <= 0) throw ParseError("polygon must be counter-clockwise", polys[i].second, 1);
        std::size_t n = v.size();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) {
                bool adjacent = b == a + 1 || (a == 0 && b == n - 1);
                const Point2 &p1 = v[a], &p2 = v[(a + 1) % n], &q1 = v[b], &q2 = v[(b + 1) % n];
                if (!adjacent) {
                    if (geom::segments_touch(p1, p2, q1, q2))
                        throw ParseError("polygon is not simple (sides " + std::to_string(a) + " and " +
                                             std::to_string(b) + " meet)",
                                         polys[i].second, 1);
                } else {
                    // adjacent sides may only share their common vertex
                    const Point2& shared = (b == a + 1) ? p2 : p1;
                    const Point2& other_a = (b == a + 1) ? p1 : p2;
                    const Point2& other_b = (b == a + 1) ? q2 : q1;
                    if (geom::orient(other_a, shared, other_b) == 0 &&
                        ((other_b.x - shared.x) * (other_a.x - shared.x) + (other_b.y - shared.y) * (other_a.y - shared.y)) > 0)
                        throw ParseError("polygon is not simple (sides fold back)", polys[i].second, 1);
                }
            }
    }
    for (auto& [p, ln] : pairs) {
        auto check = [&](int poly, const Rat& lo, const Rat& hi) {
            if (poly < 0 || poly >= static_cast<int>(s.mp.polygons.size()))
                throw ParseError("pairing refers to unknown polygon", ln, 1);
            if (lo < 0 || hi > s.mp.length(poly)) throw ParseError("pairing parameter out of range", ln, 1);
        };
        check(p.pa, p.a_start, p.a_end);
        check(p.pb, p.b_start, p.b_end);
        s.gen.base.push_back(p);
    }
    for (const auto& id : rule_order) {
        for (const auto& pc : rules[id].pieces)
            if (pc.src_lo < 0 || pc.src_hi > s.mp.length(0) || pc.dst_lo < 0 || pc.dst_hi > s.mp.length(0))
                throw ParseError("rule interval out of range", rule_line[id], 1);
        s.gen.rules.push_back(rules[id]);
    }
    for (const auto& [q, ln] : seqs) {
        if (q.lo < 0 || q.lo + q.len > s.mp.length(0)) throw ParseError("fold sequence out of range", ln, 1);
        s.gen.sequences.push_back(q);
    }
    Rat total;
    try {
        total = total_pairing_length(s);
    } catch (const SchemeError& e) {
        throw ParseError(e.what(), lineno, 1);
    }
    if (total * 2 != s.mp.boundary_length)
        throw ParseError("fullness violation: total pairing length " + rat_str(total) + " != |dP|/2 = " +
                             rat_str(s.mp.boundary_length / 2),
                         lineno, 1);
    return s;
}

std::string serialize_scheme(const FoldingScheme& s) {
    std::ostringstream o;
    o << "meta name=" << (s.meta.name.empty() ? "unnamed" : s.meta.name);
    if (s.meta.rbar) o << " rbar=" << rat_str(*s.meta.rbar);
    if (s.meta.hbar) o << " hbar=" << rat_str(*s.meta.hbar);
    if (s.meta.wtop) o << " wtop=" << rat_str(*s.meta.wtop);
    if (s.meta.wratio) o << " wratio=" << rat_str(*s.meta.wratio);
    o << "\n";
    for (const auto& p : s.mp.polygons) {
        o << "polygon " << p.id;
        for (const auto& v : p.vertices) o << " " << rat_str(v.x) << " " << rat_str(v.y);
        o << "\n";
    }
    for (const auto& p : s.gen.base) {
        o << "pair " << p.pa << " " << rat_str(p.a_start) << " " << rat_str(p.a_end) << " "
          << param_str(p.pb, p.pa, p.b_start) << " " << param_str(p.pb, p.pa, p.b_end) << "\n";
    }
    for (const auto& r : s.gen.rules)
        for (const auto& pc : r.pieces)
            o << "rule " << r.id << " " << rat_str(pc.src_lo) << " " << rat_str(pc.src_hi) << " "
              << rat_str(pc.dst_lo) << " " << rat_str(pc.dst_hi) << " " << rat_str(r.sigma) << "\n";
    for (const auto& q : s.gen.sequences) o << "foldseq " << rat_str(q.lo) << " " << rat_str(q.lo + q.len) << "\n";
    for (const auto& d : s.gen.singular) {
        if (d.kind == SingularDecl::Kind::Param)
            o << "singular " << rat_str(d.param) << "\n";
        else
            o << "singular cantor " << rat_str(d.lo) << " " << rat_str(d.hi) << " " << rat_str(d.ratio) << "\n";
    }
    return o.str();
}

std::string builtin_text(const std::string& name) {
    if (name == "seq") {
        return "# unit square: vertical sides paired, top folded, bottom side self-similar\n"
               "meta name=seq wtop=1/8 wratio=1/2\n"
               "polygon 0 0 0 1 0 1 1 0 1\n"
               "pair 0 1 2 3 4\n"
               "pair 0 2 5/2 5/2 3\n"
               "pair 0 1/2 5/8 7/8 1\n"
               "pair 0 3/4 13/16 13/16 7/8\n"
               "rule A 5/8 7/8 5/8 3/4 1/2\n"
               "rule B 0 1 0 1/2 1/2\n"
               "singular 0\n"
               "singular 5/8\n";
    }
    if (name == "cantor") {
        return "# unit square: vertical sides paired, top folded, Cantor family on the bottom side\n"
               "meta name=cantor rbar=1/6 hbar=1/4 wtop=1/6 wratio=1/3\n"
               "polygon 0 0 0 1 0 1 1 0 1\n"
               "pair 0 1 2 3 4\n"
               "pair 0 2 5/2 5/2 3\n"
               "pair 0 2/9 5/18 5/6 8/9\n"
               "pair 0 5/18 1/3 1/3 7/18\n"
               "pair 0 7/18 4/9 7/9 5/6\n"
               "rule L 0 2/3 0 2/9 1/3\n"
               "rule L 2/3 1 8/9 1 1/3\n"
               "rule R 0 2/3 4/9 2/3 1/3\n"
               "rule R 2/3 1 2/3 7/9 1/3\n"
               "singular cantor 2/3 1 1/3\n";
    }
    throw SchemeError("unknown builtin '" + name + "' (expected seq or cantor)");
}

FoldingScheme builtin_example(const std::string& name) { return parse_scheme(builtin_text(name)); }

}  // namespace paperfold
