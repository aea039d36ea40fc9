// Linear-Gaussian system/sensor models and Kalman filter primitives.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gtkf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// x_{k+1} = F x_k + Gamma v_k,  v_k ~ N(0, Q).
struct SystemModel {
    Matrix F;
    Matrix Gamma;
    Matrix Q;

    [[nodiscard]] Eigen::Index state_dim() const { return F.rows(); }
    [[nodiscard]] Eigen::Index noise_dim() const { return Q.rows(); }

    /// Throws ConfigError when dimensions disagree or Q is not symmetric PSD.
    void validate() const;
};

/// z = H x + w,  w ~ N(0, Rw).
struct SensorModel {
    Matrix H;
    Matrix Rw;

    [[nodiscard]] Eigen::Index meas_dim() const { return H.rows(); }

    void validate(Eigen::Index state_dim) const;
};

struct GaussianState {
    Vector mean;
    Matrix cov;

    [[nodiscard]] Eigen::Index dim() const { return mean.size(); }
};

/// Measurements of a sensor group stacked in ascending sensor order.
struct StackedObservation {
    Vector z;
    Matrix H;
    Matrix R; // block diagonal, one Rw block per sensor
    std::size_t group_size = 0;
};

struct Innovation {
    Vector nu;
    Matrix S;
};

/// Reference constant-velocity model: F = [[1, dt], [0, 1]], Gamma = [dt^2/2, dt]^T, scalar Q.
SystemModel constant_velocity_model(double dt, double q);

/// Position-only sensor H = [1 0] with scalar noise variance.
SensorModel position_sensor(double noise_var);

GaussianState predict(const SystemModel& model, const GaussianState& state);

/// Throws EmptyGroup for an empty index set, ArgumentError for bad indices or
/// measurement shapes. Indices are zero-based and may come in any order.
StackedObservation stack_group(std::span<const SensorModel> sensors, std::span<const Vector> measurements,
                               std::span<const std::size_t> group);

Innovation innovate(const GaussianState& pred, const StackedObservation& obs);

/// Kalman update with gain W = P H^T S^-1 (S factored by Cholesky). The
/// covariance is computed in Joseph form and symmetrized.
GaussianState update(const GaussianState& pred, const StackedObservation& obs, const Innovation& inn);

/// nu^T S^-1 nu via Cholesky. Throws NumericError if S is not positive definite.
double normalized_innovation_squared(const Innovation& inn);

/// Largest |A(i,j) - A(j,i)|.
double max_asymmetry(const Matrix& a);

} // namespace gtkf
