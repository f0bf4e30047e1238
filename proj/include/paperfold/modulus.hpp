#pragma once

#include "paperfold/collar.hpp"

#include <functional>

namespace paperfold {

struct ModulusParams {
    Rat rbar, hbar, boundary_length;
    Rat delta;  // (1/4) min(rbar, hbar, 2 rbar hbar / |dP|)
    Rat M;
    long double log_kappa = 0;  // ln of 2 exp(48 |dP| / delta)
    // NORMALIZED reports rho in units of 8R; EXPLICIT multiplies by 8R.
    std::optional<Rat> R;
};

ModulusParams modulus_params(const Rat& rbar, const Rat& hbar, const Rat& boundary_length,
                             const std::optional<Rat>& R = std::nullopt);

// A collar point q = gamma(t, h) with its distance data.
struct PointGeom {
    BoundaryParam t;
    Rat h;                 // h_q
    ScarPoint psi;         // psi(q) in the free tree
    Rat d_lo, d_hi;        // d_G(psi(q), Lambda) from the sandwich trees
    BoundaryParam p;       // nearest declared singular point
    bool in_lambda = false;
    Rat max_item;          // truncation on which p was chosen
};

PointGeom point_geom(TruncationCache& cache, const Rat& max_item, const ModulusParams& mp, const BoundaryParam& t,
                     const Rat& h);

struct GeometryValues {
    Rat xi, mu, lambda, eta, alpha, beta;
};

GeometryValues geometry_functions(const Rat& h_q, const Rat& d_q, const ModulusParams& mp, const Rat& t);

// Case label of the local modulus: A, B or C with subcase.
std::string rho_case(const Rat& h_q, const Rat& d_q, const ModulusParams& mp, const Rat& t);

struct RhoValue {
    Rat t;
    GeometryValues g;
    long double I1 = 0, I2 = 0;  // M-scaled integral lower bounds
    long double log_rho = 0;     // ln rho in NORMALIZED units; -inf at t = 0
    std::string branch;
    long double value() const;
};

// rho_q(t) for one value of d_q, using the supplied profiles (either may be null when its range is empty).
RhoValue rho_point(const Rat& h_q, const Rat& d_q, const ModulusParams& mp, const GoodnessProfile* psi_profile,
                   const GoodnessProfile* lambda_profile, const Rat& t);

struct ModulusOptions {
    Rat floor_item{1, 2048};  // profiles never deepen below this item bound
    int budget = 3;
};

// Profiles for one point, covering every t in [t_min, delta/2].
class LocalModulus {
public:
    LocalModulus(TruncationCache& cache, const ModulusParams& mp, const PointGeom& geom, const Rat& t_min,
                 const ModulusOptions& opt = {});
    // upper envelope over the two ends of the d_q interval; h defaults to the height of geom
    RhoValue rho(const Rat& t) const { return rho(t, geom_.h); }
    // valid for any height in [0, delta/2] above the same boundary point
    RhoValue rho(const Rat& t, const Rat& h) const;
    const PointGeom& geom() const { return geom_; }
    bool approximate() const { return approximate_; }

private:
    const ModulusParams& mp_;
    PointGeom geom_;
    std::optional<GoodnessProfile> psi_profile_, lambda_profile_;
    bool approximate_ = false;
};

struct ModulusRow {
    Rat t;
    long double log_rho_hat = 0;  // ln(2 max rho_q)
    long double log_rho_bar = 0;  // ln max(rho_hat, kappa t)
    std::string branch;           // "local" or "lipschitz"
    BoundaryParam argmax_t;
    Rat argmax_h;
};

struct ModulusProfile {
    ModulusParams params;
    std::vector<ModulusRow> rows;
    int grid_points = 0;
    std::vector<std::string> trace;  // one line per refinement
    bool converged = false;
    bool grid_approximate = true;
};

struct GridControls {
    Rat max_item{1, 64};   // truncation defining the sample segments
    int t_count = 11;      // table t = (delta/2) 2^-m, m = 0..t_count-1
    int heights = 3;       // height samples (delta/2) 4^-i plus height 0
    int per_piece = 4;     // initial samples per segment
    int max_refinements = 2;
    long double rel_tol = 0.01L;
    int workers = 1;
    ModulusOptions profile;
};

ModulusProfile rho_global(TruncationCache& cache, const ModulusParams& mp, const GridControls& gc);

// Decimal rendering of exp(log_value) with 12 significant digits, safe for huge exponents.
std::string exp_decimal(long double log_value);

}  // namespace paperfold
