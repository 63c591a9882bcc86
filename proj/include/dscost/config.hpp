#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dscost/model.hpp"

namespace dscost {

// Repair-interval grid in churn units (mu*delta), either generated or
// listed explicitly.
struct GridSpec {
    enum class Scale { linear, logarithmic };
    Scale scale = Scale::logarithmic;
    double lo = 0.0;
    double hi = 0.0;
    int points = 0;                       // 0: explicit_values is the grid
    std::vector<double> explicit_values;

    // "lin:lo:hi:points" / "log:lo:hi:points"; path labels error messages
    static GridSpec parse(const std::string& text,
                          const std::string& path = "schedule.mu_delta_grid");
    std::string spec_string() const;
    std::vector<double> values() const;
    bool operator==(const GridSpec&) const = default;
};

// One experiment description: JSON in, every knob defaulted to the
// reference cell (N=100, churn 50, omega 0.5, M=1, Gamma=5, costs 200/1).
struct RunConfig {
    double mean_nodes = 100.0;
    double churn_rate = 50.0;
    double request_rate = 0.5;
    double file_size = 1.0;
    double budget_factor = 5.0;
    double bs_cost = 200.0;
    double d2d_cost = 1.0;

    CodeFamily family = CodeFamily::mds;
    int code_n = 10;
    int code_k = 2;   // mds/msr
    int code_h = 0;   // mbr
    int code_r = 0;   // msr/mbr

    std::optional<double> mu_delta;       // single interval, churn units
    std::optional<GridSpec> mu_delta_grid;

    std::uint64_t horizon_intervals = 2000;
    std::uint64_t seed = 0;
    int replications = 1;
    bool track_population = false;

    std::string out_path;        // empty: stdout
    std::string format = "csv";  // "csv" or "json"

    NetworkParams network() const;
    StorageCode storage_code() const;
    // schedule in raw time units; single value or grid, default grid
    // log:1e-4:20:400 when neither is set
    std::vector<double> delta_values() const;

    bool operator==(const RunConfig&) const = default;
};

RunConfig default_config();

// Strict parse: unknown keys, wrong types, and infeasible values are all
// config_error. Empty object and missing sections take defaults.
RunConfig parse_config(const std::string& text);

nlohmann::json to_json(const RunConfig& config);

}  // namespace dscost
