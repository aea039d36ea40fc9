// Key-value experiment configuration files.
//
//   # comment
//   key = value
//
// Keys (defaults reproduce the reference scenario):
//   sensors = 150            window = 5             horizon = 50
//   sample_time = 0.1        process_noise = 0.01   meas_noise = 1
//   x0_mean = 0 1.5          x0_cov = 1000 1        (diagonal)
//   attack_q = 0.01          attack_rb = 10000
//   bias_mode = gaussian     bias_offset = 0        (used by bias_mode = constant)
//   tests = 50               sampling_p = auto      (auto: 1 / (q K N))
//   regenerate_matrix = true lambda = 1             round_threshold = 0.5
//   tail_mass = 0.0005       runs = 100             seed = 1
//   threads = 0              methods = proposed, one_by_one, all_sensors, clairvoyant
//   sweep_rb = 100 1000 5000 10000 50000
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gtkf/harness.hpp"

namespace gtkf {

struct ConfigFile {
    ExperimentConfig experiment;
    std::vector<double> sweep_rb{100.0, 1000.0, 5000.0, 10000.0, 50000.0};
};

/// Throws ConfigError on unknown keys, malformed values or an invalid experiment.
ConfigFile parse_config(std::istream& is);
ConfigFile load_config(const std::string& path);

} // namespace gtkf
