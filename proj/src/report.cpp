#include "gtkf/report.hpp"

#include <cstdio>
#include <ostream>

#include "gtkf/errors.hpp"

namespace gtkf {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_rmse_csv(std::ostream& os, const std::vector<MetricsReport>& reports) {
    os << "step,method,rmse_pos,rmse_vel\n";
    for (const auto& r : reports) {
        for (std::size_t k = 0; k < r.rmse_position.size(); ++k) {
            os << k + 1 << ',' << method_name(r.method) << ',' << format_number(r.rmse_position[k]) << ','
               << format_number(r.rmse_velocity[k]) << '\n';
        }
    }
}

void write_errors_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
    os << "Rb,method,pfa,pm\n";
    for (const auto& pt : points) {
        for (const auto& r : pt.reports) {
            if (!r.has_error_rates) continue;
            os << format_number(pt.rb) << ',' << method_name(r.method) << ',' << format_number(r.p_fa) << ','
               << format_number(r.p_m) << '\n';
        }
    }
}

void write_tests_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
    os << "Rb,method,avg_tests,bound\n";
    for (const auto& pt : points) {
        for (const auto& r : pt.reports) {
            if (!r.has_tests) continue;
            const auto rb = format_number(pt.rb);
            const auto bound = format_number(r.bound);
            if (r.method == Method::OneByOne) {
                os << rb << ",one_by_one," << format_number(r.nominal_chi2_tests) << ',' << bound << '\n';
                os << rb << ",one_by_one_actual," << format_number(r.avg_chi2_tests) << ',' << bound << '\n';
            } else {
                os << rb << ',' << method_name(r.method) << ',' << format_number(r.avg_chi2_tests) << ',' << bound
                   << '\n';
            }
        }
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
    os << "Rb,pfa_1,pfa_2,pm_1,pm_2,tests_1,tests_2,bound\n";
    for (const auto& pt : points) {
        const auto& one = report_for(pt.reports, Method::OneByOne);
        const auto& grp = report_for(pt.reports, Method::Proposed);
        os << format_number(pt.rb) << ',' << format_number(one.p_fa) << ',' << format_number(grp.p_fa) << ','
           << format_number(one.p_m) << ',' << format_number(grp.p_m) << ',' << format_number(one.nominal_chi2_tests)
           << ',' << format_number(grp.avg_chi2_tests) << ',' << format_number(grp.bound) << '\n';
    }
}

} // namespace gtkf
