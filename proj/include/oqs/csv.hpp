// csv.hpp: locale-independent numeric formatting and trajectory tables.

#pragma once

#include <ostream>
#include <string>

#include "oqs/evolution.hpp"

namespace oqs {

// Shortest general form with 9 significant digits, '.' separator, no "-0".
std::string format_number(double v);

// Header t,pop_0,...,pop_{d-1},sigma_z,entropy,rate,trace_err then one row per snapshot.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace oqs
