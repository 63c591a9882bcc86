#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dscost/model.hpp"

namespace dscost {

struct CurveRow {
    double delta = 0.0;     // repair interval [t.u.]
    double mu_delta = 0.0;  // same, in churn units
    double repair = 0.0;
    double download = 0.0;
    double total = 0.0;
    double normalized_total = 0.0;
};

struct CurveTable {
    std::string code_label;
    std::string engine;  // "analytic" or "simulated"
    std::vector<CurveRow> rows;
};

struct SweepOptions {
    std::string engine = "analytic";
    std::uint64_t horizon_intervals = 2000;  // simulated engine only
    std::uint64_t seed = 0;
    int replications = 1;
    bool track_population = false;
};

// Cost curve over a strictly increasing grid of repair intervals [t.u.].
// delta == 0 rows use the instantaneous-repair closed form and are rejected
// by the simulated engine.
CurveTable sweep_delta(const StorageCode& code, const NetworkParams& params,
                       const std::vector<double>& deltas,
                       const SweepOptions& options = {});

struct DeltaMaxResult {
    bool found = false;      // false: scheme never beats an all-BS system
    double delta_max = 0.0;  // [t.u.]
    double mu_delta_max = 0.0;
    double bracket_lo = 0.0;  // final bisection bracket [t.u.]
    double bracket_hi = 0.0;
    int grid_points = 0;
};

// Largest interval at which total expected cost still undercuts serving
// every download from the BS: log grid scan over mu*delta in [1e-4, 20],
// bisection on the last sign change down to tol [t.u.].
DeltaMaxResult find_delta_max(const StorageCode& code, const NetworkParams& params,
                              double tol);

struct OptimalDelta {
    double delta_star = 0.0;  // [t.u.]; exactly 0 when repairing
                              // continuously is cheapest
    double mu_delta_star = 0.0;
    double cost_star = 0.0;
    double normalized_cost_star = 0.0;
};

// Interval minimizing total expected cost: the instantaneous-repair limit
// competes against the scan grid, interior minima are refined by golden
// section to width tol [t.u.].
OptimalDelta find_optimal_delta(const StorageCode& code, const NetworkParams& params,
                                double tol);

struct RhoSweepRow {
    double rho = 0.0;  // bs_cost / d2d_cost
    std::string code_label;
    bool found = false;
    double mu_delta_max = 0.0;
};

// How the break-even interval moves with the BS/D2D cost ratio. d2d_cost is
// kept at base.d2d_cost and bs_cost set to rho * d2d_cost; rho values must
// lie in [1, 1000].
std::vector<RhoSweepRow> sweep_rho(const std::vector<StorageCode>& codes,
                                   const NetworkParams& base,
                                   const std::vector<double>& rho_grid, double tol);

}  // namespace dscost
