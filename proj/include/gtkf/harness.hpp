// Monte-Carlo experiment driver, baselines and metrics.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gtkf/attack.hpp"
#include "gtkf/decoder.hpp"
#include "gtkf/detector.hpp"

namespace gtkf {

enum class Method { Proposed, OneByOne, AllSensors, Clairvoyant };

std::string method_name(Method m);
/// Accepts "proposed", "one_by_one", "all_sensors", "clairvoyant".
Method parse_method(const std::string& name);

struct ExperimentConfig {
    ScenarioConfig scenario = reference_scenario();
    std::size_t tests = 50;
    /// Bernoulli parameter of Phi; unset means 1 / (q K N).
    std::optional<double> sampling_p;
    bool regenerate_matrix = true; // fresh Phi per window, else one Phi per experiment
    DecoderConfig decoder;
    DetectorConfig detector;
    std::size_t runs = 100;
    std::uint64_t seed = 1;
    std::vector<Method> methods{Method::Proposed, Method::OneByOne, Method::AllSensors, Method::Clairvoyant};
    std::size_t threads = 0; // 0: one per hardware thread

    void validate() const;
    [[nodiscard]] double effective_p() const;
    [[nodiscard]] double rb_scale() const { return scenario.attack.Rb(0, 0); }
};

/// Pooled confusion counts over (sensor, step) entries.
struct ErrorCounts {
    std::size_t false_alarms = 0;
    std::size_t negatives = 0; // truly normal entries
    std::size_t misses = 0;
    std::size_t positives = 0; // truly faulty entries

    [[nodiscard]] double p_fa() const;
    [[nodiscard]] double p_m() const; // 0 when there are no faulty entries
    ErrorCounts& operator+=(const ErrorCounts& o);
};

ErrorCounts error_counts(const FaultVector& f_hat, const FaultVector& f_true);
/// (p_fa, p_m) of a single pair.
std::pair<double, double> error_rates(const FaultVector& f_hat, const FaultVector& f_true);

/// RMSE per step and per state component: result[c][k] = sqrt(mean_r (est[r][k](c) - truth[r][k](c))^2).
std::vector<std::vector<double>> rmse(const std::vector<std::vector<Vector>>& estimates,
                                      const std::vector<std::vector<Vector>>& truth);

struct MetricsReport {
    Method method = Method::Proposed;
    std::vector<double> rmse_position; // steps 1 .. horizon
    std::vector<double> rmse_velocity;
    bool has_error_rates = false;
    ErrorCounts errors;
    double p_fa = 0.0;
    double p_m = 0.0;
    bool has_tests = false;
    double avg_chi2_tests = 0.0;    // chi-square evaluations per window
    double avg_chi2_tests_se = 0.0; // standard error over runs
    double nominal_chi2_tests = 0.0;
    double bound = 0.0; // T K (1 - (1 - p)^N)
    std::size_t evaluations = 0;  // chi-square evaluations in total
    std::size_t trips = 0;        // evaluations that tripped a channel
    /// Squared estimation errors per run and step, for paired comparisons.
    std::vector<std::vector<double>> sq_err_position;
    std::vector<std::vector<double>> sq_err_velocity;
};

std::vector<MetricsReport> run_experiment(const ExperimentConfig& cfg);

struct SweepPoint {
    double rb = 0.0;
    std::vector<MetricsReport> reports;
};

/// Repeats run_experiment with Rb = rb * I for each value (same seeds, so points are paired).
std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, const std::vector<double>& rb_values);

const MetricsReport& report_for(const std::vector<MetricsReport>& reports, Method m);

} // namespace gtkf
