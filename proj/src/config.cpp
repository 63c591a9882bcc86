#include "dscost/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "dscost/csv.hpp"
#include "dscost/errors.hpp"

namespace dscost {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw config_error(path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
    for (const auto& item : obj.items())
        if (!allowed.count(item.key())) bad(path + "." + item.key(), "unknown key");
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) bad(path, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) bad(path, "must be finite");
    return x;
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer() && !j.is_number_unsigned())
        bad(path, "expected an integer");
    return j.get<int>();
}

std::uint64_t as_u64(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
        return std::uint64_t(j.get<std::int64_t>());
    bad(path, "expected a non-negative integer");
}

CodeFamily as_family(const json& j, const std::string& path) {
    if (!j.is_string()) bad(path, "expected a string");
    const std::string s = j.get<std::string>();
    if (s == "mds") return CodeFamily::mds;
    if (s == "replication" || s == "rep") return CodeFamily::replication;
    if (s == "msr") return CodeFamily::msr;
    if (s == "mbr") return CodeFamily::mbr;
    bad(path, "unknown family \"" + s + "\" (mds, replication, msr, mbr)");
}

}  // namespace

GridSpec GridSpec::parse(const std::string& text, const std::string& path) {
    std::vector<std::string> parts;
    std::istringstream is(text);
    for (std::string part; std::getline(is, part, ':');) parts.push_back(part);
    if (parts.size() != 4) bad(path, "expected \"lin:lo:hi:points\" or \"log:lo:hi:points\"");

    GridSpec spec;
    if (parts[0] == "lin")
        spec.scale = Scale::linear;
    else if (parts[0] == "log")
        spec.scale = Scale::logarithmic;
    else
        bad(path, "scale must be \"lin\" or \"log\"");
    try {
        spec.lo = std::stod(parts[1]);
        spec.hi = std::stod(parts[2]);
        spec.points = std::stoi(parts[3]);
    } catch (const std::exception&) {
        bad(path, "malformed bounds in \"" + text + "\"");
    }
    if (!std::isfinite(spec.lo) || !std::isfinite(spec.hi)) bad(path, "bounds must be finite");
    if (spec.points < 2) bad(path, "needs at least 2 points");
    if (!(spec.lo < spec.hi)) bad(path, "lower bound must be below upper bound");
    if (spec.lo < 0.0) bad(path, "bounds must be >= 0");
    if (spec.scale == Scale::logarithmic && spec.lo <= 0.0)
        bad(path, "log scale needs a positive lower bound");
    return spec;
}

std::string GridSpec::spec_string() const {
    std::ostringstream os;
    os << (scale == Scale::linear ? "lin" : "log") << ':' << format_double(lo) << ':'
       << format_double(hi) << ':' << points;
    return os.str();
}

std::vector<double> GridSpec::values() const {
    if (points == 0) return explicit_values;
    std::vector<double> out(points);
    for (int j = 0; j < points; ++j) {
        const double f = double(j) / (points - 1);
        out[j] = scale == Scale::linear ? lo + (hi - lo) * f
                                        : lo * std::pow(hi / lo, f);
    }
    return out;
}

NetworkParams RunConfig::network() const {
    try {
        return NetworkParams::with_churn(mean_nodes, churn_rate, request_rate,
                                         file_size, budget_factor, bs_cost, d2d_cost);
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("network: ") + e.what());
    }
}

StorageCode RunConfig::storage_code() const {
    try {
        switch (family) {
            case CodeFamily::mds: return make_mds(code_n, code_k, file_size);
            case CodeFamily::replication: return make_replication(code_n, file_size);
            case CodeFamily::msr: return make_msr(code_n, code_k, code_r, file_size);
            case CodeFamily::mbr: return make_mbr(code_n, code_h, code_r, file_size);
        }
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("code: ") + e.what());
    }
    throw config_error("code: unknown family");
}

std::vector<double> RunConfig::delta_values() const {
    std::vector<double> mu_deltas;
    if (mu_delta)
        mu_deltas = {*mu_delta};
    else if (mu_delta_grid)
        mu_deltas = mu_delta_grid->values();
    else
        mu_deltas = GridSpec{GridSpec::Scale::logarithmic, 1e-4, 20.0, 400, {}}.values();
    for (double& x : mu_deltas) x /= churn_rate;
    return mu_deltas;
}

RunConfig default_config() { return RunConfig{}; }

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw config_error("config: top level must be an object");
    check_keys(root, "config", {"network", "code", "schedule", "simulation", "output"});

    RunConfig cfg;

    if (root.contains("network")) {
        const json& net = root["network"];
        if (!net.is_object()) bad("network", "expected an object");
        check_keys(net, "network",
                   {"mean_nodes", "churn_rate", "request_rate", "file_size",
                    "budget_factor", "bs_cost", "d2d_cost"});
        if (net.contains("mean_nodes")) cfg.mean_nodes = as_number(net["mean_nodes"], "network.mean_nodes");
        if (net.contains("churn_rate")) cfg.churn_rate = as_number(net["churn_rate"], "network.churn_rate");
        if (net.contains("request_rate")) cfg.request_rate = as_number(net["request_rate"], "network.request_rate");
        if (net.contains("file_size")) cfg.file_size = as_number(net["file_size"], "network.file_size");
        if (net.contains("budget_factor")) cfg.budget_factor = as_number(net["budget_factor"], "network.budget_factor");
        if (net.contains("bs_cost")) cfg.bs_cost = as_number(net["bs_cost"], "network.bs_cost");
        if (net.contains("d2d_cost")) cfg.d2d_cost = as_number(net["d2d_cost"], "network.d2d_cost");
    }

    if (root.contains("code")) {
        const json& code = root["code"];
        if (!code.is_object()) bad("code", "expected an object");
        if (!code.contains("family")) bad("code.family", "required");
        cfg.family = as_family(code["family"], "code.family");
        std::set<std::string> allowed{"family", "n"};
        switch (cfg.family) {
            case CodeFamily::mds: allowed.insert("k"); break;
            case CodeFamily::replication: break;
            case CodeFamily::msr: allowed.insert("k"); allowed.insert("r"); break;
            case CodeFamily::mbr: allowed.insert("h"); allowed.insert("r"); break;
        }
        for (const auto& item : code.items())
            if (!allowed.count(item.key()))
                bad("code." + item.key(),
                    std::string("not a parameter of family ") + family_name(cfg.family));
        for (const std::string& key : allowed)
            if (key != "family" && !code.contains(key)) bad("code." + key, "required");
        cfg.code_n = as_int(code["n"], "code.n");
        cfg.code_k = code.contains("k") ? as_int(code["k"], "code.k") : 0;
        cfg.code_h = code.contains("h") ? as_int(code["h"], "code.h") : 0;
        cfg.code_r = code.contains("r") ? as_int(code["r"], "code.r") : 0;
        if (cfg.family == CodeFamily::replication) cfg.code_k = 1;
    }

    if (root.contains("schedule")) {
        const json& sched = root["schedule"];
        if (!sched.is_object()) bad("schedule", "expected an object");
        check_keys(sched, "schedule", {"mu_delta", "mu_delta_grid"});
        if (sched.contains("mu_delta") && sched.contains("mu_delta_grid"))
            bad("schedule", "mu_delta and mu_delta_grid are mutually exclusive");
        if (sched.contains("mu_delta")) {
            const double x = as_number(sched["mu_delta"], "schedule.mu_delta");
            if (x < 0.0) bad("schedule.mu_delta", "must be >= 0");
            cfg.mu_delta = x;
        }
        if (sched.contains("mu_delta_grid")) {
            const json& grid = sched["mu_delta_grid"];
            if (grid.is_string()) {
                cfg.mu_delta_grid = GridSpec::parse(grid.get<std::string>());
            } else if (grid.is_array()) {
                GridSpec spec;
                spec.points = 0;
                double prev = -1.0;
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double x =
                        as_number(grid[i], "schedule.mu_delta_grid[" + std::to_string(i) + "]");
                    if (x < 0.0) bad("schedule.mu_delta_grid", "values must be >= 0");
                    if (x <= prev) bad("schedule.mu_delta_grid", "values must be strictly increasing");
                    prev = x;
                    spec.explicit_values.push_back(x);
                }
                if (spec.explicit_values.empty()) bad("schedule.mu_delta_grid", "empty grid");
                cfg.mu_delta_grid = spec;
            } else {
                bad("schedule.mu_delta_grid", "expected a spec string or an array");
            }
        }
    }

    if (root.contains("simulation")) {
        const json& sim = root["simulation"];
        if (!sim.is_object()) bad("simulation", "expected an object");
        check_keys(sim, "simulation",
                   {"horizon_intervals", "seed", "replications", "track_population"});
        if (sim.contains("horizon_intervals")) {
            cfg.horizon_intervals = as_u64(sim["horizon_intervals"], "simulation.horizon_intervals");
            if (cfg.horizon_intervals < 1) bad("simulation.horizon_intervals", "must be >= 1");
        }
        if (sim.contains("seed")) cfg.seed = as_u64(sim["seed"], "simulation.seed");
        if (sim.contains("replications")) {
            cfg.replications = as_int(sim["replications"], "simulation.replications");
            if (cfg.replications < 1) bad("simulation.replications", "must be >= 1");
        }
        if (sim.contains("track_population")) {
            if (!sim["track_population"].is_boolean())
                bad("simulation.track_population", "expected a boolean");
            cfg.track_population = sim["track_population"].get<bool>();
        }
    }

    if (root.contains("output")) {
        const json& out = root["output"];
        if (!out.is_object()) bad("output", "expected an object");
        check_keys(out, "output", {"path", "format"});
        if (out.contains("path")) {
            if (!out["path"].is_string()) bad("output.path", "expected a string");
            cfg.out_path = out["path"].get<std::string>();
        }
        if (out.contains("format")) {
            if (!out["format"].is_string()) bad("output.format", "expected a string");
            cfg.format = out["format"].get<std::string>();
            if (cfg.format != "csv" && cfg.format != "json")
                bad("output.format", "must be \"csv\" or \"json\"");
        }
    }

    cfg.network();       // surfaces invalid parameter combinations now
    cfg.storage_code();
    return cfg;
}

nlohmann::json to_json(const RunConfig& cfg) {
    json code{{"family", family_name(cfg.family)}, {"n", cfg.code_n}};
    switch (cfg.family) {
        case CodeFamily::mds: code["k"] = cfg.code_k; break;
        case CodeFamily::replication: break;
        case CodeFamily::msr: code["k"] = cfg.code_k; code["r"] = cfg.code_r; break;
        case CodeFamily::mbr: code["h"] = cfg.code_h; code["r"] = cfg.code_r; break;
    }

    json root{
        {"network",
         {{"mean_nodes", cfg.mean_nodes},
          {"churn_rate", cfg.churn_rate},
          {"request_rate", cfg.request_rate},
          {"file_size", cfg.file_size},
          {"budget_factor", cfg.budget_factor},
          {"bs_cost", cfg.bs_cost},
          {"d2d_cost", cfg.d2d_cost}}},
        {"code", code},
        {"simulation",
         {{"horizon_intervals", cfg.horizon_intervals},
          {"seed", cfg.seed},
          {"replications", cfg.replications},
          {"track_population", cfg.track_population}}},
        {"output", {{"path", cfg.out_path}, {"format", cfg.format}}}};

    if (cfg.mu_delta) {
        root["schedule"] = {{"mu_delta", *cfg.mu_delta}};
    } else if (cfg.mu_delta_grid) {
        if (cfg.mu_delta_grid->points > 0)
            root["schedule"] = {{"mu_delta_grid", cfg.mu_delta_grid->spec_string()}};
        else
            root["schedule"] = {{"mu_delta_grid", cfg.mu_delta_grid->explicit_values}};
    }
    return root;
}

}  // namespace dscost
