// Ground-truth simulation, measurement synthesis and the Bernoulli adversary.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gtkf/detector.hpp"
#include "gtkf/dynamics.hpp"
#include "gtkf/group_testing.hpp"

namespace gtkf {

enum class BiasMode {
    Gaussian, // b ~ N(0, Rb), fresh per (sensor, step)
    Constant, // b = offset
};

struct AttackModel {
    double q = 0.01; // per-(sensor, step) attack probability
    Matrix Rb;       // bias covariance (n_z x n_z)
    BiasMode mode = BiasMode::Gaussian;
    Vector offset; // used by BiasMode::Constant

    void validate(Eigen::Index meas_dim) const;
};

struct ScenarioConfig {
    SystemModel model;
    std::vector<SensorModel> sensors;
    Vector x0_mean;
    Matrix x0_cov;
    std::size_t horizon = 50;
    std::size_t window = 5;
    AttackModel attack;

    /// Throws ConfigError; horizon must be a positive multiple of window.
    void validate() const;
    [[nodiscard]] std::size_t windows() const { return horizon / window; }
    [[nodiscard]] GaussianState initial_state() const { return {x0_mean, x0_cov}; }
};

/// N = 150 position sensors, T_s = 0.1, Q = 0.01, Rw = 1, q = 0.01, K = 5, horizon 50.
ScenarioConfig reference_scenario(double rb = 1e4);

/// x_0 .. x_horizon (horizon + 1 states).
std::vector<Vector> simulate_truth(const ScenarioConfig& cfg, std::uint64_t seed);

FaultVector sample_fault_pattern(const AttackModel& attack, std::size_t window, std::size_t sensors,
                                 std::uint64_t seed);

/// z^i_k = H^i x_k + w^i_k (+ b^i_k when f marks (i, k)). `truth` holds the
/// K states of the window. Noise and bias use independent substreams of `seed`,
/// and the bias is drawn for every entry so f and Rb never shift the noise.
MeasurementGrid synthesize_measurements(std::span<const Vector> truth, std::span<const SensorModel> sensors,
                                        const FaultVector& f, const AttackModel& attack, std::uint64_t seed);

/// Square-root factor L with L L^T = cov for a symmetric PSD matrix.
Matrix psd_sqrt(const Matrix& cov);

void write_truth_csv(std::ostream& os, std::span<const Vector> truth);
/// Columns: step, sensor, component, value (steps numbered from `first_step`).
void write_measurements_csv(std::ostream& os, const MeasurementGrid& z, std::size_t first_step);

} // namespace gtkf
