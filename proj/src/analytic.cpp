#include "dscost/analytic.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dscost/errors.hpp"

namespace dscost {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// Neumaier-compensated accumulator; the survival expansions alternate in
// sign with coefficients up to ~1e3 for the configurations of interest, so
// plain summation would shed a few digits we would rather keep.
struct CompensatedSum {
    long double sum = 0.0L, comp = 0.0L;
    void add(long double x) {
        const long double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    long double value() const { return sum + comp; }
};

// Coefficients a_i of P(live count >= level at age t) = sum a_i e^(-i mu t),
// i = level..n, for n iid exp(mu) lifetimes. Partial-fraction form
//   a_i = (-1)^(i-level) n! / ((level-1)! i (i-level)! (n-i)!),
// exact in 64-bit integers through n = 20, log-gamma beyond.
std::vector<long double> survival_coefficients(int n, int level) {
    std::vector<long double> a;
    a.reserve(n - level + 1);
    if (n <= 20) {
        for (int i = level; i <= n; ++i) {
            unsigned long long num = 1, den = 1;
            for (int j = level; j <= n; ++j)
                if (j != i) num *= (unsigned long long)j;
            for (int j = 2; j <= i - level; ++j) den *= (unsigned long long)j;
            for (int j = 2; j <= n - i; ++j) den *= (unsigned long long)j;
            const long double mag = (long double)num / (long double)den;
            a.push_back((i - level) % 2 ? -mag : mag);
        }
    } else {
        for (int i = level; i <= n; ++i) {
            const long double lg = std::lgammal(n + 1.0L) - std::lgammal((long double)level) -
                                   logl((long double)i) - std::lgammal(i - level + 1.0L) -
                                   std::lgammal(n - i + 1.0L);
            const long double mag = expl(lg);
            a.push_back((i - level) % 2 ? -mag : mag);
        }
    }
    return a;
}

}  // namespace

double binomial_pmf(int successes, int trials, double p) {
    require(trials >= 0, "binomial_pmf: trials must be >= 0");
    require(successes >= 0 && successes <= trials,
            "binomial_pmf: successes must lie in {0,...,trials}");
    require(std::isfinite(p) && p >= 0.0 && p <= 1.0,
            "binomial_pmf: p must lie in [0,1]");
    if (p == 0.0) return successes == 0 ? 1.0 : 0.0;
    if (p == 1.0) return successes == trials ? 1.0 : 0.0;
    const double lg = std::lgamma(trials + 1.0) - std::lgamma(successes + 1.0) -
                      std::lgamma(trials - successes + 1.0);
    return std::exp(lg + successes * std::log(p) +
                    (trials - successes) * std::log1p(-p));
}

RepairSplit expected_repairs(int nodes, int repair_access, double departure_rate,
                             double delta) {
    require(nodes >= 1, "expected_repairs: nodes must be >= 1");
    require(repair_access >= 1 && repair_access <= nodes,
            "expected_repairs: repair_access must lie in {1,...,nodes}");
    require(std::isfinite(departure_rate) && departure_rate > 0.0,
            "expected_repairs: departure_rate must be > 0");
    require(!std::isnan(delta) && delta > 0.0, "expected_repairs: delta must be > 0");
    const double p = std::exp(-departure_rate * delta);
    RepairSplit out;
    for (int i = 0; i <= nodes; ++i) {
        const double mass = (nodes - i) * binomial_pmf(i, nodes, p);
        if (i >= repair_access)
            out.d2d += mass;
        else
            out.bs += mass;
    }
    return out;
}

double repair_cost(const StorageCode& code, const NetworkParams& params,
                   double delta) {
    require(!std::isnan(delta) && delta > 0.0, "repair_cost: delta must be > 0");
    const RepairSplit rs = expected_repairs(code.nodes, code.repair_access,
                                            params.departure_rate, delta);
    return (params.bs_cost * code.bs_repair_size * rs.bs +
            params.d2d_cost * code.d2d_repair_size * rs.d2d) /
           (params.file_size * delta);
}

double d2d_download_probability(int nodes, int download_access,
                                double departure_rate, double delta) {
    require(nodes >= 1, "d2d_download_probability: nodes must be >= 1");
    require(download_access >= 1 && download_access <= nodes,
            "d2d_download_probability: download_access must lie in {1,...,nodes}");
    require(std::isfinite(departure_rate) && departure_rate > 0.0,
            "d2d_download_probability: departure_rate must be > 0");
    require(!std::isnan(delta) && delta > 0.0,
            "d2d_download_probability: delta must be > 0");

    // time average of the survival function over one interval:
    // (1/delta) sum_i a_i (1 - e^(-i mu delta)) / (i mu)
    const auto a = survival_coefficients(nodes, download_access);
    CompensatedSum acc;
    for (int i = download_access; i <= nodes; ++i) {
        // extended precision before scaling by the large alternating
        // coefficients, or their size would amplify double rounding past
        // the clamp allowance
        const long double rate = i * (long double)departure_rate;
        const long double term =
            a[i - download_access] * (-expm1l(-rate * (long double)delta)) / rate;
        acc.add(term);
    }
    const double pr = double(acc.value() / (long double)delta);

    const double overshoot = std::max(0.0 - pr, pr - 1.0);
    if (overshoot > 1e-9) {
        std::ostringstream os;
        os << "d2d_download_probability: cancellation overwhelmed the expansion "
           << "(n=" << nodes << ", h=" << download_access
           << ", mu*delta=" << departure_rate * delta << ", overshoot=" << overshoot
           << ")";
        throw numerical_error(os.str());
    }
    return std::min(1.0, std::max(0.0, pr));
}

double download_cost(const StorageCode& code, const NetworkParams& params,
                     double delta) {
    require(!std::isnan(delta) && delta > 0.0, "download_cost: delta must be > 0");
    const double pr = d2d_download_probability(code.nodes, code.download_access,
                                               params.departure_rate, delta);
    const double d2d_bill = params.d2d_cost * code.download_access *
                            code.node_storage / params.file_size;
    return params.mean_nodes * params.request_rate *
           (params.bs_cost + (d2d_bill - params.bs_cost) * pr);
}

CostBreakdown total_cost(const StorageCode& code, const NetworkParams& params,
                         double delta) {
    require(!std::isnan(delta) && delta >= 0.0, "total_cost: delta must be >= 0");
    if (delta == 0.0) return limit_delta_zero(code, params);
    CostBreakdown out;
    out.repair = repair_cost(code, params, delta);
    out.download = download_cost(code, params, delta);
    out.total = out.repair + out.download;
    out.normalized_total =
        out.total / (params.mean_nodes * params.request_rate * params.bs_cost);
    return out;
}

CostBreakdown limit_delta_zero(const StorageCode& code, const NetworkParams& params) {
    CostBreakdown out;
    out.repair = params.d2d_cost * code.d2d_repair_size * code.nodes *
                 params.departure_rate / params.file_size;
    out.download = params.mean_nodes * params.request_rate * params.d2d_cost *
                   code.download_access * code.node_storage / params.file_size;
    out.total = out.repair + out.download;
    out.normalized_total =
        out.total / (params.mean_nodes * params.request_rate * params.bs_cost);
    return out;
}

double limit_delta_infinity(const NetworkParams& params) {
    require(params.departure_rate > 0.0,
            "limit_delta_infinity: departure_rate must be > 0");
    return params.mean_nodes * params.request_rate * params.bs_cost;
}

double hypoexp_pdf(int nodes, int level, double departure_rate, double t) {
    require(nodes >= 1, "hypoexp_pdf: nodes must be >= 1");
    require(level >= 1 && level <= nodes,
            "hypoexp_pdf: level must lie in {1,...,nodes}");
    require(std::isfinite(departure_rate) && departure_rate > 0.0,
            "hypoexp_pdf: departure_rate must be > 0");
    require(!std::isnan(t) && t >= 0.0, "hypoexp_pdf: t must be >= 0");

    const auto a = survival_coefficients(nodes, level);
    CompensatedSum acc;
    long double scale = 0.0L;
    for (int i = level; i <= nodes; ++i) {
        const long double rate = i * (long double)departure_rate;
        const long double term = a[i - level] * rate * expl(-rate * (long double)t);
        acc.add(term);
        scale += fabsl(term);
    }
    const long double f = acc.value();
    if (f < 0.0L) {
        if (-f > 1e-9L * std::max(1.0L, scale)) {
            std::ostringstream os;
            os << "hypoexp_pdf: cancellation overwhelmed the expansion (n=" << nodes
               << ", level=" << level << ", mu*t=" << departure_rate * t << ")";
            throw numerical_error(os.str());
        }
        return 0.0;
    }
    return double(f);
}

double wrapped_erlang_pdf(int request_index, double request_rate, double delta,
                          double t) {
    require(request_index >= 1, "wrapped_erlang_pdf: request_index must be >= 1");
    require(std::isfinite(request_rate) && request_rate > 0.0,
            "wrapped_erlang_pdf: request_rate must be > 0");
    require(std::isfinite(delta) && delta > 0.0,
            "wrapped_erlang_pdf: delta must be > 0");
    require(!std::isnan(t) && t >= 0.0 && t < delta,
            "wrapped_erlang_pdf: t must lie in [0, delta)");

    const int l = request_index;
    const double w = request_rate;
    const double lgl = std::lgamma((double)l);
    auto erlang_pdf = [&](double u) {
        if (u == 0.0) return l == 1 ? w : 0.0;
        return std::exp(l * std::log(w) + (l - 1) * std::log(u) - w * u - lgl);
    };
    // e^(-w u) sum_{m<l} (w u)^m / m!
    auto erlang_survival = [&](double u) {
        double term = 1.0, s = 1.0;
        for (int m = 1; m < l; ++m) {
            term *= w * u / m;
            s += term;
        }
        return std::exp(-w * u) * s;
    };

    const double mode = (l - 1) / w;
    CompensatedSum acc;
    for (long i = 0;; ++i) {
        const double u = t + i * delta;
        acc.add((long double)erlang_pdf(u));
        const double next = t + (i + 1) * delta;
        // past the mode the density decreases, so the rest of the series is
        // bounded by its first term plus the tail mass spread over delta
        if (next >= mode &&
            erlang_pdf(next) + erlang_survival(next) / delta < 1e-14)
            break;
        if (i > 1000000)
            throw numerical_error(
                "wrapped_erlang_pdf: series failed to converge");
    }
    return double(acc.value());
}

}  // namespace dscost
