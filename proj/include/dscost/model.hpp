#pragma once

#include <string>
#include <vector>

namespace dscost {

// Cell-level constants. Rates are per time unit, data sizes in bits, transfer
// costs in cost units per bit. Treated as immutable after construction; the
// constructor rejects invalid combinations with std::invalid_argument.
struct NetworkParams {
    double mean_nodes;      // N: mean number of nodes in the cell
    double arrival_rate;    // lambda: node arrival rate factor (aggregate N*lambda)
    double departure_rate;  // mu: per-node departure rate
    double request_rate;    // omega: per-node content request rate (0 allowed)
    double file_size;       // M [bits]
    double budget_factor;   // Gamma: total storage budget is Gamma*M
    double bs_cost;         // rho_BS  [c.u. per bit] from the base station
    double d2d_cost;        // rho_D2D [c.u. per bit] between devices

    NetworkParams(double mean_nodes, double arrival_rate, double departure_rate,
                  double request_rate, double file_size, double budget_factor,
                  double bs_cost, double d2d_cost);

    // Stationary-population shortcut: one churn rate serves as both the
    // per-node arrival factor and the departure rate.
    static NetworkParams with_churn(double mean_nodes, double churn_rate,
                                    double request_rate, double file_size,
                                    double budget_factor, double bs_cost,
                                    double d2d_cost);

    double cost_ratio() const { return bs_cost / d2d_cost; }
};

enum class CodeFamily { mds, replication, msr, mbr };

const char* family_name(CodeFamily family);

// A redundancy scheme spread over n storage nodes. The four derived sizes
// (alpha, beta, gamma_*) fully determine traffic; family and k are kept for
// reporting and feasibility checks. k may be fractional for MBR.
struct StorageCode {
    CodeFamily family;
    int nodes;               // n
    double dimension;        // k
    int download_access;     // h: distinct nodes a download must reach
    int repair_access;       // r: live nodes contacted per D2D repair
    double node_storage;     // alpha [bits] per node
    double repair_transfer;  // beta [bits] fetched from each repair helper
    double d2d_repair_size;  // gamma_D2D = r*beta [bits] per D2D-repaired node
    double bs_repair_size;   // gamma_BS = alpha [bits] per BS-repaired node

    double rate() const { return dimension / nodes; }
    std::string label() const;  // e.g. "mds[10,2,2]" as [n,h,r]
};

StorageCode make_mds(int n, int k, double file_size);
StorageCode make_replication(int n, double file_size);
StorageCode make_msr(int n, int k, int r, double file_size);
StorageCode make_mbr(int n, int h, int r, double file_size);

// The six-scheme comparison set used throughout the evaluation:
// mds[10,2], msr[10,2,5], msr[10,2,9], mbr[10,3,5], mbr[10,3,9], rep[5].
std::vector<StorageCode> reference_codes(double file_size);

struct ValidationReport {
    bool feasible = true;
    std::vector<std::string> violations;  // hard constraint failures
    std::vector<std::string> warnings;    // model-assumption strain, still usable
};

// Feasibility of a code under a parameter set: storage budget, code rate vs
// budget, per-helper transfer vs stored size, access ranges. Warns when n is
// not small against the cell population.
ValidationReport validate(const StorageCode& code, const NetworkParams& params);

}  // namespace dscost
