// CSV reports. One header row; floats printed with 6 significant digits.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gtkf/harness.hpp"

namespace gtkf {

std::string format_number(double v);

/// step,method,rmse_pos,rmse_vel
void write_rmse_csv(std::ostream& os, const std::vector<MetricsReport>& reports);
/// Rb,method,pfa,pm
void write_errors_csv(std::ostream& os, const std::vector<SweepPoint>& points);
/// Rb,method,avg_tests,bound. one_by_one reports the nominal K*N cost,
/// one_by_one_actual the evaluations actually performed.
void write_tests_csv(std::ostream& os, const std::vector<SweepPoint>& points);
/// Rb,pfa_1,pfa_2,pm_1,pm_2,tests_1,tests_2,bound (1: one-by-one, 2: group testing).
void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points);

} // namespace gtkf
