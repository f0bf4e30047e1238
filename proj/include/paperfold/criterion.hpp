#pragma once

#include "paperfold/scar.hpp"

#include <memory>
#include <mutex>

namespace paperfold {

// Truncations of one scheme at item bounds, with both sandwich trees, built on demand.
class TruncationCache {
public:
    struct Entry {
        Rat max_item;
        FiniteScheme fs;
        ScarTree collapse, free;
    };
    explicit TruncationCache(const FoldingScheme& s) : scheme_(s) {}
    const Entry& at_items(const Rat& max_item);
    const FoldingScheme& scheme() const { return scheme_; }

private:
    const FoldingScheme& scheme_;
    std::map<Rat, std::unique_ptr<Entry>> cache_;
    std::mutex mu_;
};

struct CriterionParams {
    Rat rbar, hbar, M;
};

// M = (1/5) min(rbar/hbar, hbar/rbar)
Rat goodness_constant(const Rat& rbar, const Rat& hbar);

struct InjectivityRadius {
    Rat rbar;
    bool from_override = false;
    int edge = -1;  // edge carrying the chosen middle third
    std::string note;
};

InjectivityRadius injectivity_radius(const ScarTree& collapse, const std::optional<Rat>& override_rbar = std::nullopt);

// Kruskal merge structure of the Lambda nodes of a tree.
struct MergeTree {
    std::vector<int> members;
    struct Link {
        int a, b;
        Rat weight;  // d_G between the two sub-clusters
    };
    std::vector<Link> links;  // sorted by weight
    std::vector<Rat> radii() const;  // weight/2, decreasing, unique
    int ncc(const Rat& r) const;     // components of B(Lambda; r)
    // component label per member at radius r
    std::map<int, int> classes(const Rat& r) const;
};

MergeTree merge_tree(const ScarTree& t);

// NC(Lambda) and non-planar radii inside [a, b], sorted ascending.
std::vector<Rat> breakpoints(const ScarTree& t, const Rat& a, const Rat& b, const Rat& rbar);

struct ProfileSegment {
    Rat lo, hi;
    Rat cm_lo, cm_hi;
    int cn = 0;
    bool exact = true;
};

struct GoodnessProfile {
    bool lambda_base = true;
    BoundaryParam q;
    Rat a, b, M;
    std::vector<ProfileSegment> segs;
    bool approximate = false;
    Rat max_item;  // truncation used
    std::vector<Rat> breakpoints() const;
    // M/(cm + s cn) on the open segment containing s; 0 at breakpoints
    long double iota(const Rat& s) const;
    // cm(s) + s cn on the open segment containing s
    Rat denominator(const Rat& s) const;
};

struct ProfileOptions {
    std::optional<Rat> start_item;
    int budget = 8;  // refinements by a factor 3
};

GoodnessProfile goodness(TruncationCache& cache, bool lambda_base, const BoundaryParam& q, const Rat& a,
                         const Rat& b, const Rat& M, const ProfileOptions& opt = {});

enum class IntegralRule { EXACT_ENVELOPE, FROZEN_RIGHT };

// Integral of 1/(cm + s cn) over [lo, hi]; breakpoints contribute nothing.
long double integral_unnormalized(const GoodnessProfile& p, const Rat& lo, const Rat& hi,
                                  IntegralRule rule = IntegralRule::EXACT_ENVELOPE);
// M times the above, a lower bound for the integral of iota.
long double integral_lower_bound(const GoodnessProfile& p, const Rat& lo, const Rat& hi,
                                 IntegralRule rule = IntegralRule::EXACT_ENVELOPE);

enum class Hypothesis { NONE, CONSTANT, HARMONIC };
const char* hypothesis_name(Hypothesis h);
Hypothesis parse_hypothesis(const std::string& s);

enum class Verdict { CERTIFIED_UNDER_HYPOTHESIS, INCONCLUSIVE };
const char* verdict_name(Verdict v);

struct WindowBound {
    int k = 0;
    Rat a, b;
    long double W = 0;   // unnormalized, minimum over component representatives
    int components = 0;
    BoundaryParam worst;  // representative attaining the minimum
    bool approximate = false;
};

struct DivergenceCertificate {
    std::vector<WindowBound> windows;
    Hypothesis hypothesis = Hypothesis::NONE;
    int K = 0;
    long double c = 0;
    Verdict verdict = Verdict::INCONCLUSIVE;
    std::string reason;
};

// Window radii r_1 > r_2 > ... (count of them), from the scheme schedule or NC(Lambda).
std::vector<Rat> window_radii(TruncationCache& cache, const Rat& rbar, int count);

// Fits the hypothesis to a sequence of window bounds (index k = 0, 1, ...).
Verdict certify(const std::vector<long double>& W, Hypothesis h, long double& c, std::string& reason);

DivergenceCertificate divergence_report(TruncationCache& cache, const CriterionParams& cp, int K, Hypothesis h);

struct AnnulusClass {
    int level = 0;
    BoundaryParam rep;
    std::vector<int> members;  // Lambda nodes of the reference tree
    int parent = -1;           // index into the previous level's classes
    Rat eps;
    Rat inner, outer;          // r_{k+1} + eps, r_k - eps
    long double module_bound = 0;  // integral of iota over [inner, outer]
    long double window_bound = 0;  // integral of iota over [r_{k+1}, r_k]
    bool eps_ok = false;
    std::string blocking;
};

struct AnnulusLevel {
    int k = 0;
    Rat r_outer, r_inner;  // r_k, r_{k+1}
    std::vector<AnnulusClass> classes;
    long double W = 0;  // min window bound over classes (M-scaled)
};

struct AnnulusSystem {
    int K0 = 1, K1 = 1;
    std::vector<AnnulusLevel> levels;
    bool cond_a = false, cond_b = false, cond_c = false;
    bool caps_ok = false;
    long double min_chain_sum = 0, required_chain_sum = 0;
    std::string note;
};

AnnulusSystem mcmullen_system(TruncationCache& cache, const CriterionParams& cp, int K0, int K1);

}  // namespace paperfold
