#pragma once

#include "paperfold/modulus.hpp"
#include "paperfold/render.hpp"

#include <json.hpp>

#include <iosfwd>

namespace paperfold::cli {

using Json = nlohmann::json;

// {"dec": 12 significant digits, "rat": exact}
Json exact(const Rat& r);
Json decimal(long double v);

struct ClassifyQuery {
    std::vector<BoundaryParam> at;
    std::optional<Rat> r;
    bool lambda_base = true;
};

Json validate_report(const FoldingScheme& s, const Rat& eps);
Json classify_report(TruncationCache& cache, const Rat& eps, const ClassifyQuery& q);
Json criterion_report(const ResolvedParams& rp, const DivergenceCertificate& cert);
Json mcmullen_report(const ResolvedParams& rp, const AnnulusSystem& sys);
Json modulus_report(const ModulusProfile& prof);

// Human-readable rendering of a report produced by one of the functions above.
std::string emit_text(const Json& report);

// Parses "t" (polygon 0) or "p:t".
BoundaryParam parse_param(const std::string& text);

// Full command line without the program name. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace paperfold::cli
