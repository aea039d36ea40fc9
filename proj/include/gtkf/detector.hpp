// Per-test Kalman channels with cumulative chi-square whiteness tests, and
// real-time fused tracking on the union of the groups that keep passing.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gtkf/chi2.hpp"
#include "gtkf/dynamics.hpp"
#include "gtkf/group_testing.hpp"

namespace gtkf {

/// measurements[k][i]: measurement of sensor i at step k of the window.
using MeasurementGrid = std::vector<std::vector<Vector>>;

struct DetectorConfig {
    double tail_mass = 0.0005; // probability mass per tail of the two-sided test
    std::size_t window = 5;

    void validate() const;
};

enum class ChannelStatus { Active, Tripped };

struct TestChannel {
    std::size_t test_index = 0;
    double cum_stat = 0.0;    // running sum of nu^T S^-1 nu
    std::size_t cum_dof = 0;  // running n_z * sum of group sizes
    ChannelStatus status = ChannelStatus::Active;
    std::optional<std::size_t> tripped_at; // zero-based step within the window
};

struct WindowResult {
    OutcomeVector g;
    std::vector<GaussianState> fused_states; // posterior after each step k = 0 .. K-1
    std::size_t chi2_tests_performed = 0;
    /// Cost without early stopping: nonempty groups of Phi (K*N for one-by-one).
    std::size_t nominal_chi2_tests = 0;
    std::vector<TestChannel> channels;

    [[nodiscard]] const GaussianState& posterior() const { return fused_states.back(); }
};

/// Largest cumulative dof a window over these sensors can reach.
std::size_t max_window_dof(std::span<const SensorModel> sensors, std::size_t window);

/// One window of joint testing and tracking. `bounds` must cover max_window_dof().
WindowResult step_window(const SamplingMatrix& phi, std::span<const SensorModel> sensors, const SystemModel& model,
                         const GaussianState& prior, const MeasurementGrid& measurements, const DetectorConfig& cfg,
                         const Chi2Bounds& bounds);

WindowResult step_window(const SamplingMatrix& phi, std::span<const SensorModel> sensors, const SystemModel& model,
                         const GaussianState& prior, const MeasurementGrid& measurements, const DetectorConfig& cfg);

/// Baseline with one singleton channel per sensor (T = N). A tripped channel
/// stops testing; nominal_chi2_tests is K*N regardless.
WindowResult one_by_one_window(std::span<const SensorModel> sensors, const SystemModel& model,
                               const GaussianState& prior, const MeasurementGrid& measurements,
                               const DetectorConfig& cfg, const Chi2Bounds& bounds);

WindowResult one_by_one_window(std::span<const SensorModel> sensors, const SystemModel& model,
                               const GaussianState& prior, const MeasurementGrid& measurements,
                               const DetectorConfig& cfg);

/// Fault estimate of the one-by-one baseline: sensor i is flagged at the step its channel tripped.
FaultVector trip_pattern(const WindowResult& result, std::size_t sensors, std::size_t window);

/// Plain Kalman filter over the window using the given sensor subset at each step.
std::vector<GaussianState> filter_window(std::span<const SensorModel> sensors, const SystemModel& model,
                                         const GaussianState& prior, const MeasurementGrid& measurements,
                                         const std::vector<std::vector<std::size_t>>& used_per_step);

} // namespace gtkf
