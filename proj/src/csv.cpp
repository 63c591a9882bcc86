#include "dscost/csv.hpp"

#include <cstdio>

#include <json.hpp>

namespace dscost {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_curve_csv(std::ostream& os, const CurveTable& table) {
    os << "delta,mu_delta,repair,download,total,normalized_total\n";
    for (const CurveRow& row : table.rows)
        os << format_double(row.delta) << ',' << format_double(row.mu_delta) << ','
           << format_double(row.repair) << ',' << format_double(row.download) << ','
           << format_double(row.total) << ',' << format_double(row.normalized_total)
           << '\n';
}

void write_curve_json(std::ostream& os, const CurveTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const CurveRow& row : table.rows)
        rows.push_back({{"delta", row.delta},
                        {"mu_delta", row.mu_delta},
                        {"repair", row.repair},
                        {"download", row.download},
                        {"total", row.total},
                        {"normalized_total", row.normalized_total}});
    os << nlohmann::json{{"code", table.code_label},
                         {"engine", table.engine},
                         {"rows", rows}}
              .dump(2)
       << '\n';
}

void write_rho_csv(std::ostream& os, const std::vector<RhoSweepRow>& rows) {
    os << "rho,code,mu_delta_max\n";
    for (const RhoSweepRow& row : rows) {
        os << format_double(row.rho) << ',' << row.code_label << ',';
        if (row.found)
            os << format_double(row.mu_delta_max);
        else
            os << "none";
        os << '\n';
    }
}

void write_rho_json(std::ostream& os, const std::vector<RhoSweepRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const RhoSweepRow& row : rows) {
        nlohmann::json entry{{"rho", row.rho}, {"code", row.code_label}};
        if (row.found)
            entry["mu_delta_max"] = row.mu_delta_max;
        else
            entry["mu_delta_max"] = nullptr;
        out.push_back(entry);
    }
    os << out.dump(2) << '\n';
}

}  // namespace dscost
