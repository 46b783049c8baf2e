#include "oqs/csv.hpp"

#include <charconv>
#include <cmath>

namespace oqs {

std::string format_number(double v) {
    if (v == 0.0) return "0";
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    const Eigen::Index d = traj.populations.empty() ? 0 : traj.populations.front().size();
    os << "t";
    for (Eigen::Index i = 0; i < d; ++i) os << ",pop_" << i;
    os << ",sigma_z,entropy,rate,trace_err\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        os << format_number(traj.times[k]);
        for (Eigen::Index i = 0; i < d; ++i) os << ',' << format_number(traj.populations[k](i));
        os << ',' << format_number(traj.sigma_z[k]) << ',' << format_number(traj.entropy[k]) << ','
           << format_number(traj.rate[k]) << ',' << format_number(traj.trace_err[k]) << '\n';
    }
}

}  // namespace oqs
