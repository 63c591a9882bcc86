#include "dscost/simulate.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "dscost/rng.hpp"

namespace dscost {

namespace {

void check_config(const SimConfig& config) {
    if (!(std::isfinite(config.delta) && config.delta > 0.0))
        throw std::invalid_argument("simulate: delta must be finite and > 0");
    if (config.horizon_intervals < 1)
        throw std::invalid_argument("simulate: horizon_intervals must be >= 1");
    if (config.code.nodes < 1)
        throw std::invalid_argument("simulate: code has no nodes");
}

// independent M/M/inf cell population stepped across one interval;
// memorylessness lets each interval restart the event clock
int step_population(Rng& rng, int population, double arrival, double departure,
                    double span) {
    double t = 0.0;
    for (;;) {
        const double rate = arrival + population * departure;
        t += rng.exponential(rate);
        if (t >= span) return population;
        if (rng.uniform() * rate < arrival)
            ++population;
        else if (population > 0)
            --population;
    }
}

}  // namespace

SimulationResult run(const SimConfig& config) {
    check_config(config);
    const int n = config.code.nodes;
    const int h = config.code.download_access;
    const int r = config.code.repair_access;
    const double delta = config.delta;
    const double mu = config.params.departure_rate;
    const double request_mean =
        config.params.mean_nodes * config.params.request_rate * delta;
    const double d2d_repair_bill =
        config.params.d2d_cost * config.code.d2d_repair_size / config.params.file_size;
    const double bs_repair_bill =
        config.params.bs_cost * config.code.bs_repair_size / config.params.file_size;
    const double d2d_download_bill = config.params.d2d_cost * h *
                                     config.code.node_storage /
                                     config.params.file_size;
    const double bs_download_bill = config.params.bs_cost;

    Rng rng(config.seed);
    Rng pop_rng(config.seed ^ 0x706f70756c617465ULL);  // side stream, costs untouched

    std::vector<double> lifetimes(n);
    double repair_units = 0.0, download_units = 0.0, passage_sum = 0.0;
    double d2d_repairs = 0.0, bs_repairs = 0.0;
    std::uint64_t requests = 0, d2d_requests = 0, shortfall = 0;
    int population = 0;
    if (config.track_population) population = pop_rng.poisson(config.params.mean_nodes);

    for (std::uint64_t epoch = 0; epoch < config.horizon_intervals; ++epoch) {
        // fixed draw order per interval: lifetimes, request count, offsets
        for (int i = 0; i < n; ++i) lifetimes[i] = rng.exponential(mu);

        // first passage below h = (n-h+1)-th smallest lifetime
        std::vector<double> sorted(lifetimes);
        std::nth_element(sorted.begin(), sorted.begin() + (n - h), sorted.end());
        const double level_h_passage = sorted[n - h];
        passage_sum += level_h_passage;

        const int request_count = rng.poisson(request_mean);
        for (int q = 0; q < request_count; ++q) {
            const double at = rng.uniform() * delta;
            int live = 0;
            for (int i = 0; i < n; ++i) live += lifetimes[i] > at;
            // the order-statistic shortcut must agree with the direct count
            assert((live >= h) == (at < level_h_passage));
            ++requests;
            if (live >= h) {
                ++d2d_requests;
                download_units += d2d_download_bill;
            } else {
                download_units += bs_download_bill;
            }
        }

        int survivors = 0;
        for (int i = 0; i < n; ++i) survivors += lifetimes[i] > delta;
        const int lost = n - survivors;
        if (survivors >= r) {
            d2d_repairs += lost;
            repair_units += lost * d2d_repair_bill;
        } else {
            bs_repairs += lost;
            repair_units += lost * bs_repair_bill;
        }

        if (config.track_population) {
            population = step_population(pop_rng, population,
                                         config.params.mean_nodes * config.params.arrival_rate,
                                         mu, delta);
            if (population < n) ++shortfall;
        }
    }

    const double intervals = double(config.horizon_intervals);
    const double span = intervals * delta;
    SimulationResult out;
    out.repair_cost_rate = repair_units / span;
    out.download_cost_rate = download_units / span;
    out.total_cost_rate = out.repair_cost_rate + out.download_cost_rate;
    out.pr_d2d_download = requests ? double(d2d_requests) / double(requests) : 0.0;
    out.mean_repairs_d2d = d2d_repairs / intervals;
    out.mean_repairs_bs = bs_repairs / intervals;
    out.mean_level_h_passage = passage_sum / intervals;
    out.intervals_simulated = config.horizon_intervals;
    out.requests_served = requests;
    out.target_shortfall_epochs = shortfall;
    out.seed = config.seed;
    out.replications = 1;
    return out;
}

SimulationResult replicate(const SimConfig& config) {
    check_config(config);
    if (config.replications < 2)
        throw std::invalid_argument("replicate: needs replications >= 2");
    std::vector<SimulationResult> runs;
    runs.reserve(config.replications);
    for (int i = 0; i < config.replications; ++i) {
        SimConfig sub = config;
        sub.seed = mix64(config.seed + std::uint64_t(i));
        sub.replications = 1;
        runs.push_back(run(sub));
    }
    SimulationResult out = aggregate(runs);
    out.seed = config.seed;
    return out;
}

SimulationResult aggregate(const std::vector<SimulationResult>& results) {
    if (results.empty())
        throw std::invalid_argument("aggregate: no results");
    const std::size_t m = results.size();

    auto mean_ci = [m](auto field) {
        double mean = 0.0, lo = field(0), hi = field(0);
        for (std::size_t i = 0; i < m; ++i) {
            mean += field(i);
            lo = std::min(lo, field(i));
            hi = std::max(hi, field(i));
        }
        mean /= double(m);
        if (lo == hi) mean = lo;  // no spread: keep the value exact
        double halfwidth = 0.0;
        if (m >= 2 && lo != hi) {
            double ss = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double d = field(i) - mean;
                ss += d * d;
            }
            const double sd = std::sqrt(ss / double(m - 1));
            const boost::math::students_t dist(double(m - 1));
            halfwidth = boost::math::quantile(dist, 0.975) * sd / std::sqrt(double(m));
        }
        return std::pair<double, double>(mean, halfwidth);
    };

    SimulationResult out;
    auto set = [&](double SimulationResult::* value, double SimulationResult::Halfwidths::* ci,
                   auto field) {
        const auto [mean, hw] = mean_ci(field);
        out.*value = mean;
        out.ci_halfwidth_95.*ci = hw;
    };
    const auto& rs = results;
    set(&SimulationResult::repair_cost_rate, &SimulationResult::Halfwidths::repair,
        [&rs](std::size_t i) { return rs[i].repair_cost_rate; });
    set(&SimulationResult::download_cost_rate, &SimulationResult::Halfwidths::download,
        [&rs](std::size_t i) { return rs[i].download_cost_rate; });
    set(&SimulationResult::total_cost_rate, &SimulationResult::Halfwidths::total,
        [&rs](std::size_t i) { return rs[i].total_cost_rate; });
    set(&SimulationResult::pr_d2d_download, &SimulationResult::Halfwidths::pr_d2d,
        [&rs](std::size_t i) { return rs[i].pr_d2d_download; });
    set(&SimulationResult::mean_repairs_d2d, &SimulationResult::Halfwidths::repairs_d2d,
        [&rs](std::size_t i) { return rs[i].mean_repairs_d2d; });
    set(&SimulationResult::mean_repairs_bs, &SimulationResult::Halfwidths::repairs_bs,
        [&rs](std::size_t i) { return rs[i].mean_repairs_bs; });
    set(&SimulationResult::mean_level_h_passage, &SimulationResult::Halfwidths::level_h,
        [&rs](std::size_t i) { return rs[i].mean_level_h_passage; });
    // keep the additive identity exact after averaging
    out.total_cost_rate = out.repair_cost_rate + out.download_cost_rate;

    for (const auto& r : results) {
        out.intervals_simulated += r.intervals_simulated;
        out.requests_served += r.requests_served;
        out.target_shortfall_epochs += r.target_shortfall_epochs;
    }
    out.seed = results.front().seed;
    out.replications = int(m);
    return out;
}

}  // namespace dscost
