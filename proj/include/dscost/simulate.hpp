#pragma once

#include <cstdint>
#include <vector>

#include "dscost/model.hpp"

namespace dscost {

// Discrete-event check of the closed forms: fresh nodes at every repair
// epoch, independent exponential lifetimes inside the interval, Poisson
// download requests served D2D while at least download_access nodes live.
struct SimConfig {
    StorageCode code;
    NetworkParams params;
    double delta = 0.0;                    // repair interval [t.u.], > 0
    std::uint64_t horizon_intervals = 1;   // epochs per replicate
    std::uint64_t seed = 0;
    int replications = 1;                  // used by replicate()
    bool track_population = false;         // side birth-death cell population
};

struct SimulationResult {
    // per-time-unit cost estimates, same units as the closed forms
    double repair_cost_rate = 0.0;
    double download_cost_rate = 0.0;
    double total_cost_rate = 0.0;
    // request-weighted share of downloads served D2D
    double pr_d2d_download = 0.0;
    // node replacements per epoch by route
    double mean_repairs_d2d = 0.0;
    double mean_repairs_bs = 0.0;
    // mean time for the live count to first drop below download_access
    // (uncensored, from the full lifetime draw)
    double mean_level_h_passage = 0.0;

    // 95% two-sided halfwidths across replicates (0 for a single run)
    struct Halfwidths {
        double repair = 0.0;
        double download = 0.0;
        double total = 0.0;
        double pr_d2d = 0.0;
        double repairs_d2d = 0.0;
        double repairs_bs = 0.0;
        double level_h = 0.0;
    } ci_halfwidth_95;

    std::uint64_t intervals_simulated = 0;
    std::uint64_t requests_served = 0;
    // epochs whose tracked cell population falls below n (only counted when
    // track_population is set; costs are never affected)
    std::uint64_t target_shortfall_epochs = 0;
    std::uint64_t seed = 0;
    int replications = 1;
};

inline constexpr const char* kRngScheme = "splitmix64/mt19937_64";

// One replicate. Deterministic in (config, seed): identical inputs produce
// bit-identical results.
SimulationResult run(const SimConfig& config);

// replications >= 2 independent runs with seeds derived from config.seed,
// averaged with Student-t confidence intervals.
SimulationResult replicate(const SimConfig& config);

// Means and CIs across already-computed replicates.
SimulationResult aggregate(const std::vector<SimulationResult>& results);

}  // namespace dscost
