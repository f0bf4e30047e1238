#include "oracles.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#ifndef PAPERFOLD_TEST_DATA
#error "PAPERFOLD_TEST_DATA must point at tests/data"
#endif

namespace paperfold::testing {

std::string data_path(const std::string& name) { return std::string(PAPERFOLD_TEST_DATA) + "/" + name; }

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::stringstream b;
    b << f.rdbuf();
    return b.str();
}

FoldingScheme load_data(const std::string& name) { return parse_scheme(read_file(data_path(name))); }

std::vector<std::string> plain_corpus() {
    return {"seq.pfs", "cantor.pfs", "seq_poly.pfs", "single_fold.pfs", "triangle.pfs"};
}

namespace {

struct Item {
    int rule;
    std::vector<AffinePiece> map;  // rule source piece -> region piece
};

Rat map_pt(const std::vector<AffinePiece>& m, const Rat& lo, const Rat& hi, const Rat& x) {
    for (const auto& p : m)
        if (p.src_lo <= lo && hi <= p.src_hi) return p.dst_lo + (x - p.src_lo) * (p.dst_hi - p.dst_lo) / (p.src_hi - p.src_lo);
    throw std::logic_error("interval outside every piece");
}

bool inside_some(const std::vector<AffinePiece>& m, const Rat& lo, const Rat& hi) {
    for (const auto& p : m)
        if (p.src_lo <= lo && hi <= p.src_hi) return true;
    return false;
}

Rat sum_pending(const FoldingScheme& s, const Item& it, int depth, int limit) {
    if (depth > limit) {
        Rat m = 0;
        for (const auto& p : it.map) m += p.dst_hi - p.dst_lo;
        return m;
    }
    Rat total = 0;
    const Rule& r = s.gen.rules[it.rule];
    for (std::size_t c = 0; c < s.gen.rules.size(); ++c) {
        const Rule& child = s.gen.rules[c];
        bool all = true;
        for (const auto& pc : child.pieces) all = all && inside_some(r.pieces, pc.dst_lo, pc.dst_hi);
        if (!all) continue;
        Item next{static_cast<int>(c), {}};
        for (const auto& pc : child.pieces)
            next.map.push_back({pc.src_lo, pc.src_hi, map_pt(it.map, pc.dst_lo, pc.dst_hi, pc.dst_lo),
                                map_pt(it.map, pc.dst_lo, pc.dst_hi, pc.dst_hi)});
        total += sum_pending(s, next, depth + 1, limit);
    }
    return total;
}

}  // namespace

Rat brute_tail(const FoldingScheme& s, int depth) {
    Rat t = 0;
    for (std::size_t r = 0; r < s.gen.rules.size(); ++r)
        t += sum_pending(s, Item{static_cast<int>(r), s.gen.rules[r].pieces}, 1, depth);
    for (const auto& q : s.gen.sequences) t += q.len / (depth + 1);
    return t;
}

BoundaryGraphOracle::BoundaryGraphOracle(const Multipolygon& mp, const std::vector<SegmentPairing>& pairings,
                                         long grid, const std::vector<Rat>& extra_points) {
    if (mp.polygons.size() != 1) throw std::invalid_argument("oracle handles one polygon");
    // common denominator of every coordinate that can occur
    mpz_class den = grid;
    auto absorb = [&](const Rat& x) {
        mpz_class d = x.get_den();
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
    };
    absorb(mp.length(0));
    for (const auto& p : pairings)
        for (const Rat* x : {&p.a_start, &p.a_end, &p.b_start, &p.b_end}) absorb(*x);
    for (const auto& x : extra_points) absorb(x);
    den_ = Rat(den);
    Rat Lq = mp.length(0) * den_;
    if (Lq.get_den() != 1 || !Lq.get_num().fits_slong_p()) throw std::overflow_error("denominator too large");
    length_ = Lq.get_num().get_si();
    auto to_int = [&](const Rat& x) {
        Rat y = x * den_;
        return static_cast<std::int64_t>(y.get_num().get_si());
    };

    struct Seg {
        std::int64_t lo, hi, plo, phi;  // partner interval, traversed backwards
    };
    std::vector<Seg> segs;
    for (const auto& p : pairings) {
        if (p.pa != 0 || p.pb != 0) throw std::invalid_argument("oracle handles one polygon");
        std::int64_t as = to_int(p.a_start), ae = to_int(p.a_end), bs = to_int(p.b_start), be = to_int(p.b_end);
        segs.push_back({as, ae, bs, be});
        segs.push_back({bs, be, as, ae});
    }
    std::sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) { return a.lo < b.lo; });
    auto partners = [&](std::int64_t x) {
        std::vector<std::int64_t> out;
        // segments are interior-disjoint: only the one starting at or before x and its predecessor can contain x
        auto it = std::upper_bound(segs.begin(), segs.end(), x, [](std::int64_t v, const Seg& s) { return v < s.lo; });
        for (int back = 0; back < 2 && it != segs.begin(); ++back) {
            --it;
            if (it->lo <= x && x <= it->hi) out.push_back(it->phi - (x - it->lo));
        }
        // x = 0 and x = L are the same boundary point
        if (x == 0) {
            for (const auto& s : segs)
                if (s.hi == length_) out.push_back(s.plo);
        }
        return out;
    };

    std::unordered_map<std::int64_t, int> id;
    std::vector<std::int64_t> work;
    auto add = [&](std::int64_t x) {
        x %= length_;
        if (x < 0) x += length_;
        if (id.emplace(x, 0).second) work.push_back(x);
    };
    std::int64_t step = to_int(Rat(1, grid));
    for (std::int64_t x = 0; x < length_; x += step) add(x);
    for (const auto& s : segs) {
        add(s.lo);
        add(s.hi);
    }
    for (const auto& x : extra_points) add(to_int(x));
    std::vector<std::pair<std::int64_t, std::int64_t>> links;
    while (!work.empty()) {
        std::int64_t x = work.back();
        work.pop_back();
        for (std::int64_t y : partners(x)) {
            y %= length_;
            links.push_back({x, y});
            add(y);
        }
    }
    for (const auto& [x, _] : id) pts_.push_back(x);
    std::sort(pts_.begin(), pts_.end());
    for (std::size_t i = 0; i < pts_.size(); ++i) id[pts_[i]] = static_cast<int>(i);
    ident_.assign(pts_.size(), {});
    for (const auto& [x, y] : links) {
        ident_[id[x]].push_back(id[y]);
        ident_[id[y]].push_back(id[x]);
    }
}

int BoundaryGraphOracle::index(const Rat& x) const {
    Rat y = x * den_;
    if (y.get_den() != 1) throw std::invalid_argument("point not on the oracle lattice");
    std::int64_t v = y.get_num().get_si() % length_;
    auto it = std::lower_bound(pts_.begin(), pts_.end(), v);
    if (it == pts_.end() || *it != v) throw std::invalid_argument("point is not an oracle node");
    return static_cast<int>(it - pts_.begin());
}

Rat BoundaryGraphOracle::distance(const Rat& x, const Rat& y) const {
    int s = index(x), t = index(y);
    const std::int64_t inf = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> d(pts_.size(), inf);
    using QE = std::pair<std::int64_t, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    d[s] = 0;
    pq.push({0, s});
    const int n = static_cast<int>(pts_.size());
    while (!pq.empty()) {
        auto [du, u] = pq.top();
        pq.pop();
        if (du != d[u]) continue;
        if (u == t) break;
        auto relax = [&](int v, std::int64_t w) {
            if (du + w < d[v]) {
                d[v] = du + w;
                pq.push({d[v], v});
            }
        };
        int nx = (u + 1) % n, pv = (u + n - 1) % n;
        relax(nx, (pts_[nx] - pts_[u] + length_) % length_);
        relax(pv, (pts_[u] - pts_[pv] + length_) % length_);
        for (int v : ident_[u]) relax(v, 0);
    }
    return Rat(mpz_class(static_cast<long>(d[t]))) / den_;
}

std::vector<Rat> lattice_params(const Multipolygon& mp, long grid, std::size_t count, std::mt19937_64& rng) {
    Rat L = mp.length(0) * grid;
    long n = L.get_num().get_si() / L.get_den().get_si();
    std::uniform_int_distribution<long> pick(0, n - 1);
    std::vector<Rat> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(frac(pick(rng), grid));
    return out;
}

}  // namespace paperfold::testing
