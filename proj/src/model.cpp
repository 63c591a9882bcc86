#include "dscost/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dscost {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

NetworkParams::NetworkParams(double mean_nodes, double arrival_rate,
                             double departure_rate, double request_rate,
                             double file_size, double budget_factor,
                             double bs_cost, double d2d_cost)
    : mean_nodes(mean_nodes),
      arrival_rate(arrival_rate),
      departure_rate(departure_rate),
      request_rate(request_rate),
      file_size(file_size),
      budget_factor(budget_factor),
      bs_cost(bs_cost),
      d2d_cost(d2d_cost) {
    require(positive(mean_nodes), "mean_nodes must be > 0");
    require(positive(arrival_rate), "arrival_rate must be > 0");
    require(positive(departure_rate), "departure_rate must be > 0");
    require(std::isfinite(request_rate) && request_rate >= 0.0,
            "request_rate must be >= 0");
    require(positive(file_size), "file_size must be > 0");
    require(std::isfinite(budget_factor) && budget_factor >= 1.0,
            "budget_factor must be >= 1");
    require(positive(bs_cost), "bs_cost must be > 0");
    require(positive(d2d_cost), "d2d_cost must be > 0");
    require(bs_cost >= d2d_cost, "bs_cost must be >= d2d_cost");
}

NetworkParams NetworkParams::with_churn(double mean_nodes, double churn_rate,
                                        double request_rate, double file_size,
                                        double budget_factor, double bs_cost,
                                        double d2d_cost) {
    return NetworkParams(mean_nodes, churn_rate, churn_rate, request_rate,
                         file_size, budget_factor, bs_cost, d2d_cost);
}

const char* family_name(CodeFamily family) {
    switch (family) {
        case CodeFamily::mds: return "mds";
        case CodeFamily::replication: return "replication";
        case CodeFamily::msr: return "msr";
        case CodeFamily::mbr: return "mbr";
    }
    return "?";
}

std::string StorageCode::label() const {
    const char* tag = family == CodeFamily::replication ? "rep" : family_name(family);
    std::ostringstream os;
    os << tag << '[' << nodes << ',' << download_access << ',' << repair_access << ']';
    return os.str();
}

StorageCode make_mds(int n, int k, double file_size) {
    require(n >= 1, "mds: n must be >= 1");
    require(k >= 1 && k <= n, "mds: k must satisfy 1 <= k <= n");
    require(positive(file_size), "mds: file_size must be > 0");
    const double alpha = file_size / k;
    return {CodeFamily::mds, n, double(k), k, k, alpha, alpha, file_size, alpha};
}

StorageCode make_replication(int n, double file_size) {
    require(n >= 1, "replication: n must be >= 1");
    require(positive(file_size), "replication: file_size must be > 0");
    return {CodeFamily::replication, n, 1.0, 1, 1,
            file_size, file_size, file_size, file_size};
}

StorageCode make_msr(int n, int k, int r, double file_size) {
    require(n >= 1, "msr: n must be >= 1");
    require(k >= 1, "msr: k must be >= 1");
    require(r >= k && r <= n - 1, "msr: r must satisfy k <= r <= n-1");
    require(positive(file_size), "msr: file_size must be > 0");
    const double alpha = file_size / k;
    const double beta = file_size / (double(k) * (r - k + 1));
    return {CodeFamily::msr, n, double(k), k, r, alpha, beta, r * beta, alpha};
}

StorageCode make_mbr(int n, int h, int r, double file_size) {
    require(n >= 1, "mbr: n must be >= 1");
    require(h >= 1, "mbr: h must be >= 1");
    require(r >= h && r <= n - 1, "mbr: r must satisfy h <= r <= n-1");
    require(positive(file_size), "mbr: file_size must be > 0");
    // full helper downloads: each repaired node stores exactly what a repair
    // transfers, and a download of h nodes collects k distinct units
    const double gamma = (file_size / h) * (2.0 * r) / (2.0 * r - h + 1);
    const double k = h * (2.0 * r - h + 1) / (2.0 * r);
    return {CodeFamily::mbr, n, k, h, r, gamma, gamma / r, gamma, gamma};
}

std::vector<StorageCode> reference_codes(double file_size) {
    return {make_mds(10, 2, file_size),    make_msr(10, 2, 5, file_size),
            make_msr(10, 2, 9, file_size), make_mbr(10, 3, 5, file_size),
            make_mbr(10, 3, 9, file_size), make_replication(5, file_size)};
}

ValidationReport validate(const StorageCode& code, const NetworkParams& params) {
    ValidationReport rep;
    auto fail = [&rep](const std::string& msg) { rep.violations.push_back(msg); };

    const double budget = params.budget_factor * params.file_size;
    if (code.nodes * code.node_storage > budget * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "storage budget exceeded: n*alpha = " << code.nodes * code.node_storage
           << " > Gamma*M = " << budget;
        fail(os.str());
    }
    if (code.rate() * params.budget_factor < 1.0 - 1e-12) {
        std::ostringstream os;
        os << "code rate " << code.rate() << " below 1/Gamma = "
           << 1.0 / params.budget_factor;
        fail(os.str());
    }
    if (code.repair_transfer > code.node_storage * (1.0 + 1e-12))
        fail("per-helper repair transfer exceeds stored size (beta > alpha)");
    if (code.download_access < 1 || code.download_access > code.nodes)
        fail("download access h outside {1,...,n}");
    if (code.family != CodeFamily::mbr &&
        code.download_access < int(std::ceil(code.dimension)))
        fail("download access h below code dimension k");
    if (code.family == CodeFamily::mbr && code.repair_access < code.download_access)
        fail("repair access r below download access h");
    if (code.repair_access < 1 || code.repair_access > code.nodes - 1)
        fail("repair access r outside {1,...,n-1}");

    if (code.nodes > params.mean_nodes / 5.0)
        rep.warnings.push_back(
            "n exceeds a fifth of the mean cell population; "
            "stable-membership assumption is strained");

    rep.feasible = rep.violations.empty();
    return rep;
}

}  // namespace dscost
