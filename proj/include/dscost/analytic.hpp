#pragma once

#include "dscost/model.hpp"

namespace dscost {

// Expected communication cost per time unit, split by purpose, for one
// repair interval length. normalized_total divides by the all-from-BS
// download bill N*omega*rho_BS (the large-interval asymptote).
struct CostBreakdown {
    double repair = 0.0;
    double download = 0.0;
    double total = 0.0;
    double normalized_total = 0.0;
};

// Expected node replacements per repair epoch, split by repair route.
struct RepairSplit {
    double d2d = 0.0;  // epochs' worth of D2D-repairable losses
    double bs = 0.0;   // losses that force a BS restore
};

// C(trials, successes) p^s (1-p)^(t-s), evaluated in log space.
double binomial_pmf(int successes, int trials, double p);

// Mean replacements after one interval of independent exp(departure_rate)
// lifetimes: at least repair_access survivors allow D2D repair of the rest,
// fewer force every replacement through the BS.
RepairSplit expected_repairs(int nodes, int repair_access, double departure_rate,
                             double delta);

// Expected repair traffic cost per time unit at interval delta (> 0).
double repair_cost(const StorageCode& code, const NetworkParams& params,
                   double delta);

// Time-average probability that at least download_access of the nodes
// populated at the last epoch are still alive. Exact closed form for the
// pure-death process; clamped to [0,1] after compensated summation.
double d2d_download_probability(int nodes, int download_access,
                                double departure_rate, double delta);

// Expected download traffic cost per time unit at interval delta (> 0).
double download_cost(const StorageCode& code, const NetworkParams& params,
                     double delta);

// Repair + download at interval delta; delta == 0 routes to the
// instantaneous-repair limit.
CostBreakdown total_cost(const StorageCode& code, const NetworkParams& params,
                         double delta);

// delta -> 0: repairs keep every node alive, all traffic rides D2D.
CostBreakdown limit_delta_zero(const StorageCode& code, const NetworkParams& params);

// delta -> infinity (departure_rate > 0): storage empties, downloads fall
// back to the BS entirely.
double limit_delta_infinity(const NetworkParams& params);

// Density of the time for the live count to fall from nodes to below level:
// a sum of independent exponential stages with rates i*departure_rate,
// i = level..nodes.
double hypoexp_pdf(int nodes, int level, double departure_rate, double t);

// Density of the arrival time of the request_index-th request, folded into
// [0, delta). Series over Erlang branches, truncated when the remaining mass
// is negligible.
double wrapped_erlang_pdf(int request_index, double request_rate, double delta,
                          double t);

}  // namespace dscost
