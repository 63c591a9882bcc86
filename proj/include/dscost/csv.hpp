#pragma once

#include <ostream>
#include <string>

#include "dscost/experiments.hpp"

namespace dscost {

// shortest-exact decimal form of a double (17 significant digits)
std::string format_double(double x);

// Fixed column order: delta,mu_delta,repair,download,total,normalized_total.
void write_curve_csv(std::ostream& os, const CurveTable& table);
void write_curve_json(std::ostream& os, const CurveTable& table);

// Columns rho,code,mu_delta_max; absent break-even intervals print "none".
void write_rho_csv(std::ostream& os, const std::vector<RhoSweepRow>& rows);
void write_rho_json(std::ostream& os, const std::vector<RhoSweepRow>& rows);

}  // namespace dscost
