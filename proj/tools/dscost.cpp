#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dscost/analytic.hpp"
#include "dscost/config.hpp"
#include "dscost/csv.hpp"
#include "dscost/errors.hpp"
#include "dscost/experiments.hpp"
#include "dscost/rng.hpp"
#include "dscost/simulate.hpp"
#include "dscost/version.hpp"

namespace {

using nlohmann::json;

struct CliState {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::string delta_grid;
    std::optional<double> mu_delta;
    std::optional<std::uint64_t> intervals;
    std::optional<std::uint64_t> seed;
    std::optional<int> replications;
    bool track_population = false;
    double tol = 1e-9;  // [t.u.]
    std::string rho_grid = "log:1:200:25";
};

dscost::RunConfig load_config(const CliState& cli) {
    dscost::RunConfig cfg;
    if (!cli.config_path.empty()) {
        std::ifstream in(cli.config_path);
        if (!in) throw std::ios_base::failure("cannot open config file: " + cli.config_path);
        std::ostringstream text;
        text << in.rdbuf();
        if (in.bad()) throw std::ios_base::failure("cannot read config file: " + cli.config_path);
        cfg = dscost::parse_config(text.str());
    }
    if (!cli.out_path.empty()) cfg.out_path = cli.out_path;
    if (!cli.format.empty()) {
        if (cli.format != "csv" && cli.format != "json")
            throw dscost::config_error("--format: must be \"csv\" or \"json\"");
        cfg.format = cli.format;
    }
    if (!cli.delta_grid.empty() && cli.mu_delta)
        throw dscost::config_error("--delta-grid and --mu-delta are mutually exclusive");
    if (!cli.delta_grid.empty()) {
        cfg.mu_delta_grid = dscost::GridSpec::parse(cli.delta_grid, "--delta-grid");
        cfg.mu_delta.reset();
    }
    if (cli.mu_delta) {
        if (*cli.mu_delta < 0.0) throw dscost::config_error("--mu-delta: must be >= 0");
        cfg.mu_delta = *cli.mu_delta;
        cfg.mu_delta_grid.reset();
    }
    if (cli.intervals) {
        if (*cli.intervals < 1) throw dscost::config_error("--intervals: must be >= 1");
        cfg.horizon_intervals = *cli.intervals;
    }
    if (cli.seed) cfg.seed = *cli.seed;
    if (cli.replications) {
        if (*cli.replications < 1) throw dscost::config_error("--replications: must be >= 1");
        cfg.replications = *cli.replications;
    }
    if (cli.track_population) cfg.track_population = true;
    return cfg;
}

// table to the configured sink; summary JSON to stdout, or stderr when the
// table itself occupies stdout
void emit(const dscost::RunConfig& cfg,
          const std::function<void(std::ostream&)>& write_table, json summary) {
    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path);
        if (!out) throw std::ios_base::failure("cannot open output file: " + cfg.out_path);
        write_table(out);
        out.flush();
        if (!out.good()) throw std::ios_base::failure("failed writing output file: " + cfg.out_path);
        summary["out"] = cfg.out_path;
        std::cout << summary.dump(2) << '\n';
    } else {
        write_table(std::cout);
        std::cerr << summary.dump(2) << '\n';
    }
}

void emit_summary(const dscost::RunConfig& cfg, const json& summary) {
    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path);
        if (!out) throw std::ios_base::failure("cannot open output file: " + cfg.out_path);
        out << summary.dump(2) << '\n';
        out.flush();
        if (!out.good()) throw std::ios_base::failure("failed writing output file: " + cfg.out_path);
    }
    std::cout << summary.dump(2) << '\n';
}

json base_summary(const char* command, const dscost::RunConfig& cfg,
                  std::chrono::steady_clock::time_point t0) {
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
    return json{{"command", command},
                {"version", dscost::kVersion},
                {"code", cfg.storage_code().label()},
                {"wall_time_s", dt.count()}};
}

int run_cli(const CliState& cli, const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();
    const dscost::RunConfig cfg = load_config(cli);
    const dscost::NetworkParams params = cfg.network();
    const dscost::StorageCode code = cfg.storage_code();

    if (command == "analyze") {
        dscost::SweepOptions opts;
        const dscost::CurveTable table =
            dscost::sweep_delta(code, params, cfg.delta_values(), opts);
        json summary = base_summary("analyze", cfg, t0);
        summary["engine"] = "analytic";
        summary["rows"] = table.rows.size();
        summary["format"] = cfg.format;
        emit(cfg, [&](std::ostream& os) {
            cfg.format == "csv" ? dscost::write_curve_csv(os, table)
                                : dscost::write_curve_json(os, table);
        }, std::move(summary));
        return 0;
    }

    if (command == "simulate") {
        const std::vector<double> deltas = cfg.delta_values();
        for (double d : deltas)
            if (d <= 0.0)
                throw dscost::config_error("simulate: requires mu_delta > 0");

        dscost::CurveTable table;
        json summary = base_summary("simulate", cfg, t0);
        summary["engine"] = "simulated";
        summary["seed"] = cfg.seed;
        summary["rng"] = dscost::kRngScheme;
        summary["replications"] = cfg.replications;
        summary["horizon_intervals"] = cfg.horizon_intervals;

        if (deltas.size() == 1) {
            dscost::SimConfig sim{code, params, deltas[0], cfg.horizon_intervals,
                                  dscost::mix64(cfg.seed ^ 0xABCD0000ULL),
                                  cfg.replications, cfg.track_population};
            const dscost::SimulationResult res =
                cfg.replications >= 2 ? dscost::replicate(sim) : dscost::run(sim);
            table.code_label = code.label();
            table.engine = "simulated";
            dscost::CurveRow row;
            row.delta = deltas[0];
            row.mu_delta = deltas[0] * params.departure_rate;
            row.repair = res.repair_cost_rate;
            row.download = res.download_cost_rate;
            row.total = res.total_cost_rate;
            row.normalized_total = res.total_cost_rate /
                (params.mean_nodes * params.request_rate * params.bs_cost);
            table.rows.push_back(row);
            summary["result"] = {
                {"repair_cost_rate", res.repair_cost_rate},
                {"download_cost_rate", res.download_cost_rate},
                {"total_cost_rate", res.total_cost_rate},
                {"pr_d2d_download", res.pr_d2d_download},
                {"mean_repairs_d2d", res.mean_repairs_d2d},
                {"mean_repairs_bs", res.mean_repairs_bs},
                {"mean_level_h_passage", res.mean_level_h_passage},
                {"ci_halfwidth_95",
                 {{"repair", res.ci_halfwidth_95.repair},
                  {"download", res.ci_halfwidth_95.download},
                  {"total", res.ci_halfwidth_95.total},
                  {"pr_d2d", res.ci_halfwidth_95.pr_d2d}}},
                {"intervals_simulated", res.intervals_simulated},
                {"requests_served", res.requests_served},
                {"target_shortfall_epochs", res.target_shortfall_epochs}};
        } else {
            dscost::SweepOptions opts;
            opts.engine = "simulated";
            opts.horizon_intervals = cfg.horizon_intervals;
            opts.seed = cfg.seed;
            opts.replications = cfg.replications;
            opts.track_population = cfg.track_population;
            table = dscost::sweep_delta(code, params, deltas, opts);
        }
        summary["rows"] = table.rows.size();
        emit(cfg, [&](std::ostream& os) {
            cfg.format == "csv" ? dscost::write_curve_csv(os, table)
                                : dscost::write_curve_json(os, table);
        }, std::move(summary));
        return 0;
    }

    if (command == "delta-max") {
        const dscost::DeltaMaxResult res = dscost::find_delta_max(code, params, cli.tol);
        json summary = base_summary("delta-max", cfg, t0);
        summary["tol"] = cli.tol;
        summary["grid_points"] = res.grid_points;
        if (res.found) {
            summary["delta_max"] = res.delta_max;
            summary["mu_delta_max"] = res.mu_delta_max;
            summary["bracket"] = {res.bracket_lo, res.bracket_hi};
        } else {
            summary["delta_max"] = "none";
        }
        emit_summary(cfg, summary);
        return 0;
    }

    if (command == "optimal-delta") {
        const dscost::OptimalDelta res = dscost::find_optimal_delta(code, params, cli.tol);
        json summary = base_summary("optimal-delta", cfg, t0);
        summary["tol"] = cli.tol;
        summary["delta_star"] = res.delta_star;
        summary["mu_delta_star"] = res.mu_delta_star;
        summary["cost_star"] = res.cost_star;
        summary["normalized_cost_star"] = res.normalized_cost_star;
        emit_summary(cfg, summary);
        return 0;
    }

    if (command == "sweep-rho") {
        const dscost::GridSpec grid = dscost::GridSpec::parse(cli.rho_grid, "--rho-grid");
        const std::vector<dscost::RhoSweepRow> rows = dscost::sweep_rho(
            dscost::reference_codes(cfg.file_size), params, grid.values(), cli.tol);
        json summary = base_summary("sweep-rho", cfg, t0);
        summary["rows"] = rows.size();
        summary["codes"] = json::array();
        for (const auto& c : dscost::reference_codes(cfg.file_size))
            summary["codes"].push_back(c.label());
        summary["rho_grid"] = grid.spec_string();
        emit(cfg, [&](std::ostream& os) {
            cfg.format == "csv" ? dscost::write_rho_csv(os, rows)
                                : dscost::write_rho_json(os, rows);
        }, std::move(summary));
        return 0;
    }

    if (command == "validate") {
        const dscost::ValidationReport report = dscost::validate(code, params);
        json summary = base_summary("validate", cfg, t0);
        summary["feasible"] = report.feasible;
        summary["violations"] = report.violations;
        summary["warnings"] = report.warnings;
        emit_summary(cfg, summary);
        return 0;
    }

    throw dscost::config_error("unknown command");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"expected-cost laboratory for D2D-assisted distributed storage"};
    app.fallthrough();
    app.require_subcommand(1);

    CliState cli;
    app.add_option("--config", cli.config_path, "JSON run configuration");
    app.add_option("--out", cli.out_path, "output file (default stdout)");
    app.add_option("--format", cli.format, "table format: csv or json");

    auto* analyze = app.add_subcommand("analyze", "closed-form cost curve over a grid");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo cost estimates");
    auto* delta_max = app.add_subcommand("delta-max", "largest interval beating an all-BS system");
    auto* optimal = app.add_subcommand("optimal-delta", "cost-minimizing repair interval");
    auto* sweep_rho = app.add_subcommand("sweep-rho", "break-even interval vs BS/D2D cost ratio");
    app.add_subcommand("validate", "feasibility of the configured scheme");

    for (auto* sub : {analyze, simulate}) {
        sub->add_option("--delta-grid", cli.delta_grid,
                        "interval grid in churn units, lin:lo:hi:n or log:lo:hi:n");
        sub->add_option_function<double>(
            "--mu-delta", [&cli](const double& x) { cli.mu_delta = x; },
            "single interval in churn units");
    }
    simulate->add_option_function<std::uint64_t>(
        "--intervals", [&cli](const std::uint64_t& x) { cli.intervals = x; },
        "epochs per replicate");
    simulate->add_option_function<std::uint64_t>(
        "--seed", [&cli](const std::uint64_t& x) { cli.seed = x; }, "base RNG seed");
    simulate->add_option_function<int>(
        "--replications", [&cli](const int& x) { cli.replications = x; },
        "independent replicates (>= 2 adds confidence intervals)");
    simulate->add_flag("--track-population", cli.track_population,
                       "track cell population and repair-target shortfalls");
    for (auto* sub : {delta_max, optimal, sweep_rho})
        sub->add_option("--tol", cli.tol, "search tolerance on delta [t.u.]");
    sweep_rho->add_option("--rho-grid", cli.rho_grid,
                          "cost-ratio grid, lin:lo:hi:n or log:lo:hi:n");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        return run_cli(cli, app.get_subcommands().front()->get_name());
    } catch (const dscost::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const dscost::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 3;
    }
}
