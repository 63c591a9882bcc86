#include "dscost/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include "dscost/analytic.hpp"
#include "dscost/rng.hpp"
#include "dscost/simulate.hpp"

namespace dscost {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

constexpr double kScanLo = 1e-4;  // scan bounds in mu*delta
constexpr double kScanHi = 20.0;
constexpr int kScanPoints = 400;

std::vector<double> scan_grid(double departure_rate) {
    std::vector<double> deltas(kScanPoints);
    const double ratio = kScanHi / kScanLo;
    for (int j = 0; j < kScanPoints; ++j)
        deltas[j] = kScanLo * std::pow(ratio, double(j) / (kScanPoints - 1)) /
                    departure_rate;
    return deltas;
}

CurveRow make_row(double delta, double mu, double repair, double download,
                  double denom) {
    CurveRow row;
    row.delta = delta;
    row.mu_delta = delta * mu;
    row.repair = repair;
    row.download = download;
    row.total = repair + download;
    row.normalized_total = row.total / denom;
    return row;
}

}  // namespace

CurveTable sweep_delta(const StorageCode& code, const NetworkParams& params,
                       const std::vector<double>& deltas,
                       const SweepOptions& options) {
    require(!deltas.empty(), "sweep_delta: empty grid");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        require(std::isfinite(deltas[i]) && deltas[i] >= 0.0,
                "sweep_delta: grid values must be finite and >= 0");
        require(i == 0 || deltas[i] > deltas[i - 1],
                "sweep_delta: grid must be strictly increasing");
    }
    const bool simulated = options.engine == "simulated";
    require(simulated || options.engine == "analytic",
            "sweep_delta: engine must be \"analytic\" or \"simulated\"");

    CurveTable table;
    table.code_label = code.label();
    table.engine = options.engine;
    table.rows.reserve(deltas.size());
    const double denom =
        params.mean_nodes * params.request_rate * params.bs_cost;

    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double delta = deltas[i];
        if (!simulated) {
            const CostBreakdown cb = total_cost(code, params, delta);
            table.rows.push_back(
                make_row(delta, params.departure_rate, cb.repair, cb.download, denom));
            continue;
        }
        require(delta > 0.0, "sweep_delta: simulated engine requires delta > 0");
        SimConfig sim{code, params, delta, options.horizon_intervals,
                      // decorrelate rows before replicate() splits further
                      mix64(options.seed ^ (0xABCD0000ULL + i)),
                      options.replications, options.track_population};
        const SimulationResult res =
            options.replications >= 2 ? replicate(sim) : run(sim);
        table.rows.push_back(make_row(delta, params.departure_rate,
                                      res.repair_cost_rate, res.download_cost_rate,
                                      denom));
    }
    return table;
}

DeltaMaxResult find_delta_max(const StorageCode& code, const NetworkParams& params,
                              double tol) {
    require(std::isfinite(tol) && tol > 0.0, "find_delta_max: tol must be > 0");
    const double bs_only = limit_delta_infinity(params);
    auto margin = [&](double delta) {
        return total_cost(code, params, delta).total - bs_only;
    };

    const std::vector<double> grid = scan_grid(params.departure_rate);
    std::vector<double> g(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) g[j] = margin(grid[j]);

    DeltaMaxResult out;
    out.grid_points = kScanPoints;

    std::ptrdiff_t cross = -1;  // last j with g[j] < 0 <= g[j+1]
    for (std::size_t j = 0; j + 1 < grid.size(); ++j)
        if (g[j] < 0.0 && g[j + 1] >= 0.0) cross = std::ptrdiff_t(j);

    if (cross < 0) {
        if (g.back() < 0.0) {
            // still profitable at the scan cap; report the cap rather than
            // extrapolating past the search bound
            out.found = true;
            out.delta_max = grid.back();
            out.mu_delta_max = kScanHi;
            out.bracket_lo = out.bracket_hi = grid.back();
        }
        return out;
    }

    double lo = grid[cross], hi = grid[cross + 1];
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (margin(mid) < 0.0 ? lo : hi) = mid;
    }
    out.found = true;
    out.delta_max = 0.5 * (lo + hi);
    out.mu_delta_max = out.delta_max * params.departure_rate;
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    return out;
}

OptimalDelta find_optimal_delta(const StorageCode& code, const NetworkParams& params,
                                double tol) {
    require(std::isfinite(tol) && tol > 0.0, "find_optimal_delta: tol must be > 0");
    const double denom =
        params.mean_nodes * params.request_rate * params.bs_cost;
    auto cost = [&](double delta) { return total_cost(code, params, delta).total; };

    const double cost0 = limit_delta_zero(code, params).total;
    const std::vector<double> grid = scan_grid(params.departure_rate);
    std::size_t best = 0;
    double best_cost = cost(grid[0]);
    for (std::size_t j = 1; j < grid.size(); ++j) {
        const double c = cost(grid[j]);
        if (c < best_cost) {
            best_cost = c;
            best = j;
        }
    }

    OptimalDelta out;
    if (cost0 <= best_cost) {
        // repairing continuously dominates the whole scan: the exact limit
        out.delta_star = 0.0;
        out.mu_delta_star = 0.0;
        out.cost_star = cost0;
        out.normalized_cost_star = cost0 / denom;
        return out;
    }

    double lo = best == 0 ? 0.0 : grid[best - 1];
    double hi = best + 1 < grid.size() ? grid[best + 1] : grid[best];
    constexpr double invphi = 0.6180339887498949;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = cost(x1), f2 = cost(x2);
    while (hi - lo > tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = cost(x2);
        }
    }
    double star = 0.5 * (lo + hi);
    double star_cost = cost(star);
    if (best_cost < star_cost) {  // safeguard, never expected to trigger
        star = grid[best];
        star_cost = best_cost;
    }
    out.delta_star = star;
    out.mu_delta_star = star * params.departure_rate;
    out.cost_star = star_cost;
    out.normalized_cost_star = star_cost / denom;
    return out;
}

std::vector<RhoSweepRow> sweep_rho(const std::vector<StorageCode>& codes,
                                   const NetworkParams& base,
                                   const std::vector<double>& rho_grid, double tol) {
    require(!codes.empty(), "sweep_rho: no codes");
    require(!rho_grid.empty(), "sweep_rho: empty rho grid");
    for (double rho : rho_grid)
        require(std::isfinite(rho) && rho >= 1.0 && rho <= 1000.0,
                "sweep_rho: rho values must lie in [1, 1000]");

    std::vector<RhoSweepRow> rows;
    rows.reserve(rho_grid.size() * codes.size());
    for (double rho : rho_grid) {
        const NetworkParams params(base.mean_nodes, base.arrival_rate,
                                   base.departure_rate, base.request_rate,
                                   base.file_size, base.budget_factor,
                                   rho * base.d2d_cost, base.d2d_cost);
        for (const StorageCode& code : codes) {
            const DeltaMaxResult dm = find_delta_max(code, params, tol);
            rows.push_back({rho, code.label(), dm.found, dm.mu_delta_max});
        }
    }
    return rows;
}

}  // namespace dscost
