#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dscost/analytic.hpp"
#include "dscost/model.hpp"
#include "dscost/simulate.hpp"

using namespace dscost;

namespace {

NetworkParams reference_params() {
    return NetworkParams::with_churn(100.0, 50.0, 0.5, 1.0, 5.0, 200.0, 1.0);
}

SimConfig reference_sim(double mu_delta, std::uint64_t horizon, std::uint64_t seed,
                        int replications) {
    SimConfig cfg{make_mds(10, 2, 1.0), reference_params(), mu_delta / 50.0,
                  horizon, seed, replications, false};
    return cfg;
}

bool same_estimates(const SimulationResult& a, const SimulationResult& b) {
    return a.repair_cost_rate == b.repair_cost_rate &&
           a.download_cost_rate == b.download_cost_rate &&
           a.total_cost_rate == b.total_cost_rate &&
           a.pr_d2d_download == b.pr_d2d_download &&
           a.mean_repairs_d2d == b.mean_repairs_d2d &&
           a.mean_repairs_bs == b.mean_repairs_bs &&
           a.mean_level_h_passage == b.mean_level_h_passage &&
           a.ci_halfwidth_95.total == b.ci_halfwidth_95.total &&
           a.requests_served == b.requests_served &&
           a.intervals_simulated == b.intervals_simulated;
}

}  // namespace

TEST_CASE("fixed seeds reproduce bit-identical results") {
    const SimConfig cfg = reference_sim(0.5, 5000, 20240817, 1);
    CHECK(same_estimates(run(cfg), run(cfg)));

    SimConfig multi = reference_sim(0.5, 1000, 99, 8);
    CHECK(same_estimates(replicate(multi), replicate(multi)));

    SimConfig other = multi;
    other.seed = 100;
    CHECK_FALSE(same_estimates(replicate(multi), replicate(other)));
}

TEST_CASE("estimates agree with the closed forms") {
    const NetworkParams params = reference_params();
    const StorageCode mds = make_mds(10, 2, 1.0);
    const double delta = 0.5 / 50.0;
    SimConfig cfg = reference_sim(0.5, 2000, 7, 30);
    const SimulationResult res = replicate(cfg);
    const CostBreakdown expect = total_cost(mds, params, delta);

    CHECK(std::abs(res.repair_cost_rate - expect.repair) <=
          3.0 * res.ci_halfwidth_95.repair);
    CHECK(std::abs(res.download_cost_rate - expect.download) <=
          3.0 * res.ci_halfwidth_95.download);
    CHECK(std::abs(res.total_cost_rate - expect.total) <=
          3.0 * res.ci_halfwidth_95.total);

    const double pr = d2d_download_probability(10, 2, 50.0, delta);
    CHECK(std::abs(res.pr_d2d_download - pr) <=
          std::max(3.0 * res.ci_halfwidth_95.pr_d2d, 1e-9));

    const RepairSplit split = expected_repairs(10, 2, 50.0, delta);
    CHECK(std::abs(res.mean_repairs_d2d - split.d2d) <=
          3.0 * res.ci_halfwidth_95.repairs_d2d);
    CHECK(std::abs(res.mean_repairs_bs - split.bs) <=
          3.0 * res.ci_halfwidth_95.repairs_bs);
    // overall loss rate n(1 - e^-x)
    CHECK(res.mean_repairs_d2d + res.mean_repairs_bs ==
          doctest::Approx(3.9346934028736658).epsilon(0.02));

    // uncensored first passage below h: mean sum_{i=h..n} 1/(i mu)
    double passage = 0.0;
    for (int i = 2; i <= 10; ++i) passage += 1.0 / (i * 50.0);
    CHECK(std::abs(res.mean_level_h_passage - passage) <=
          3.0 * res.ci_halfwidth_95.level_h);

    // Poisson request stream at N omega delta per interval
    const double mean_requests = 100.0 * 0.5 * delta * 2000 * 30;
    CHECK(std::abs(double(res.requests_served) - mean_requests) <=
          5.0 * std::sqrt(mean_requests));
    CHECK(res.intervals_simulated == 2000u * 30u);
    CHECK(res.replications == 30);
    CHECK(res.total_cost_rate == res.repair_cost_rate + res.download_cost_rate);
}

TEST_CASE("single replica cell matches the scalar formula") {
    SimConfig cfg{make_replication(1, 1.0),
                  NetworkParams::with_churn(100.0, 1.0, 0.5, 1.0, 5.0, 200.0, 1.0),
                  1.0, 4000, 11, 12};
    const SimulationResult res = replicate(cfg);
    CHECK(std::abs(res.pr_d2d_download - 0.6321205588285577) <=
          3.0 * res.ci_halfwidth_95.pr_d2d);
}

TEST_CASE("confidence halfwidths shrink like one over root horizon") {
    SimConfig short_run = reference_sim(0.5, 2000, 1234, 100);
    SimConfig long_run = reference_sim(0.5, 4000, 4321, 100);
    const double hw_short = replicate(short_run).ci_halfwidth_95.total;
    const double hw_long = replicate(long_run).ci_halfwidth_95.total;
    const double ratio = hw_long / hw_short;
    CHECK(ratio > 0.7071 * 0.8);
    CHECK(ratio < 0.7071 * 1.2);
}

TEST_CASE("aggregate arithmetic") {
    const SimConfig cfg = reference_sim(0.5, 500, 5, 1);
    const SimulationResult one = run(cfg);

    SUBCASE("identical replicates have zero spread") {
        const SimulationResult agg = aggregate({one, one, one});
        CHECK(agg.repair_cost_rate == one.repair_cost_rate);
        CHECK(agg.total_cost_rate == one.total_cost_rate);
        CHECK(agg.ci_halfwidth_95.repair == 0.0);
        CHECK(agg.ci_halfwidth_95.total == 0.0);
        CHECK(agg.ci_halfwidth_95.pr_d2d == 0.0);
        CHECK(agg.intervals_simulated == 1500u);
        CHECK(agg.replications == 3);
    }

    SUBCASE("single result passes through with empty intervals") {
        const SimulationResult agg = aggregate({one});
        CHECK(agg.total_cost_rate == one.total_cost_rate);
        CHECK(agg.ci_halfwidth_95.total == 0.0);
    }

    SUBCASE("known two-point spread") {
        SimulationResult a, b;
        a.total_cost_rate = 10.0;
        b.total_cost_rate = 14.0;
        a.repair_cost_rate = 10.0;
        b.repair_cost_rate = 14.0;
        const SimulationResult agg = aggregate({a, b});
        CHECK(agg.total_cost_rate == doctest::Approx(12.0));
        // sd = 2sqrt(2), t_{0.975,1} = 12.7062: halfwidth = 25.4124
        CHECK(agg.ci_halfwidth_95.total == doctest::Approx(25.41242).epsilon(1e-4));
    }

    CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
}

TEST_CASE("population tracking is a pure diagnostic") {
    SimConfig cfg = reference_sim(0.5, 2000, 88, 1);
    const SimulationResult plain = run(cfg);
    cfg.track_population = true;
    const SimulationResult tracked = run(cfg);

    // same cost stream regardless of the side process
    CHECK(plain.repair_cost_rate == tracked.repair_cost_rate);
    CHECK(plain.download_cost_rate == tracked.download_cost_rate);
    CHECK(plain.pr_d2d_download == tracked.pr_d2d_download);
    CHECK(plain.target_shortfall_epochs == 0u);
    // a 100-node cell essentially never dips below n = 10
    CHECK(tracked.target_shortfall_epochs == 0u);

    // a cell barely larger than the storage set does
    SimConfig tight{make_mds(3, 1, 1.0),
                    NetworkParams::with_churn(3.0, 1.0, 0.5, 1.0, 5.0, 200.0, 1.0),
                    0.5, 2000, 9, 1, true};
    const SimulationResult starved = run(tight);
    CHECK(starved.target_shortfall_epochs > 200u);
    CHECK(starved.target_shortfall_epochs < 1800u);
}

TEST_CASE("config screening") {
    SimConfig cfg = reference_sim(0.5, 100, 1, 1);
    cfg.delta = 0.0;
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    cfg.delta = -1.0;
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    cfg = reference_sim(0.5, 0, 1, 1);
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    cfg = reference_sim(0.5, 100, 1, 1);
    CHECK_THROWS_AS(replicate(cfg), std::invalid_argument);
}
