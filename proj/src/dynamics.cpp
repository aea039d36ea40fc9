#include "gtkf/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gtkf/errors.hpp"

namespace gtkf {
namespace {

constexpr double kSymmetryTol = 1e-9;

void symmetrize(Matrix& a) { a = 0.5 * (a + a.transpose()).eval(); }

Eigen::LLT<Matrix> factor_spd(const Matrix& s) {
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() != Eigen::Success) {
        throw NumericError("innovation covariance is not positive definite");
    }
    return llt;
}

std::string dims(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

} // namespace

void SystemModel::validate() const {
    const auto n = F.rows();
    if (n == 0 || F.cols() != n) {
        throw ConfigError("state transition must be square and nonempty, got " + dims(F));
    }
    if (Gamma.rows() != n || Gamma.cols() != Q.rows() || Q.rows() != Q.cols()) {
        throw ConfigError("process noise dimensions inconsistent: Gamma " + dims(Gamma) + ", Q " + dims(Q));
    }
    if (Q.size() > 0) {
        if (max_asymmetry(Q) > kSymmetryTol) {
            throw ConfigError("process noise covariance is not symmetric");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> eig(Q, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -kSymmetryTol) {
            throw ConfigError("process noise covariance is not positive semidefinite");
        }
    }
}

void SensorModel::validate(Eigen::Index state_dim) const {
    if (H.rows() == 0 || H.cols() != state_dim) {
        throw ConfigError("measurement matrix " + dims(H) + " incompatible with state dimension " +
                          std::to_string(state_dim));
    }
    if (Rw.rows() != H.rows() || Rw.cols() != H.rows()) {
        throw ConfigError("measurement noise covariance " + dims(Rw) + " does not match H " + dims(H));
    }
    if (max_asymmetry(Rw) > kSymmetryTol) {
        throw ConfigError("measurement noise covariance is not symmetric");
    }
    if (Eigen::LLT<Matrix>(Rw).info() != Eigen::Success) {
        throw ConfigError("measurement noise covariance is not positive definite");
    }
}

SystemModel constant_velocity_model(double dt, double q) {
    SystemModel m;
    m.F = Matrix{{1.0, dt}, {0.0, 1.0}};
    m.Gamma = Matrix{{dt * dt / 2.0}, {dt}};
    m.Q = Matrix::Constant(1, 1, q);
    return m;
}

SensorModel position_sensor(double noise_var) {
    SensorModel s;
    s.H = Matrix{{1.0, 0.0}};
    s.Rw = Matrix::Constant(1, 1, noise_var);
    return s;
}

GaussianState predict(const SystemModel& model, const GaussianState& state) {
    const auto n = model.state_dim();
    if (state.mean.size() != n || state.cov.rows() != n || state.cov.cols() != n || model.Gamma.rows() != n ||
        model.Gamma.cols() != model.Q.rows()) {
        throw ConfigError("predict: dimension mismatch between model and state");
    }
    GaussianState out;
    out.mean = model.F * state.mean;
    out.cov = model.F * state.cov * model.F.transpose() + model.Gamma * model.Q * model.Gamma.transpose();
    symmetrize(out.cov);
    return out;
}

StackedObservation stack_group(std::span<const SensorModel> sensors, std::span<const Vector> measurements,
                               std::span<const std::size_t> group) {
    if (group.empty()) {
        throw EmptyGroup();
    }
    if (measurements.size() != sensors.size()) {
        throw ArgumentError("stack_group: one measurement per sensor required");
    }
    std::vector<std::size_t> order(group.begin(), group.end());
    std::sort(order.begin(), order.end());
    if (order.back() >= sensors.size()) {
        throw ArgumentError("stack_group: sensor index " + std::to_string(order.back()) + " out of range");
    }
    if (std::adjacent_find(order.begin(), order.end()) != order.end()) {
        throw ArgumentError("stack_group: duplicate sensor index");
    }

    Eigen::Index rows = 0;
    for (auto i : order) {
        if (measurements[i].size() != sensors[i].meas_dim()) {
            throw ArgumentError("stack_group: measurement of sensor " + std::to_string(i) + " has wrong size");
        }
        rows += sensors[i].meas_dim();
    }
    const auto nx = sensors[order.front()].H.cols();

    StackedObservation obs;
    obs.group_size = order.size();
    obs.z.resize(rows);
    obs.H.resize(rows, nx);
    obs.R = Matrix::Zero(rows, rows);
    Eigen::Index r = 0;
    for (auto i : order) {
        const auto& s = sensors[i];
        const auto nz = s.meas_dim();
        if (s.H.cols() != nx) {
            throw ArgumentError("stack_group: sensors disagree on state dimension");
        }
        obs.z.segment(r, nz) = measurements[i];
        obs.H.middleRows(r, nz) = s.H;
        obs.R.block(r, r, nz, nz) = s.Rw;
        r += nz;
    }
    return obs;
}

Innovation innovate(const GaussianState& pred, const StackedObservation& obs) {
    if (obs.group_size == 0 || obs.z.size() == 0) {
        throw EmptyGroup();
    }
    if (obs.H.cols() != pred.dim()) {
        throw ConfigError("innovate: observation and state dimensions differ");
    }
    Innovation inn;
    inn.nu = obs.z - obs.H * pred.mean;
    inn.S = obs.H * pred.cov * obs.H.transpose() + obs.R;
    symmetrize(inn.S);
    return inn;
}

GaussianState update(const GaussianState& pred, const StackedObservation& obs, const Innovation& inn) {
    const auto llt = factor_spd(inn.S);
    // W^T = S^-1 H P
    const Matrix gain = llt.solve(obs.H * pred.cov).transpose();
    const auto n = pred.dim();
    const Matrix ikh = Matrix::Identity(n, n) - gain * obs.H;

    GaussianState out;
    out.mean = pred.mean + gain * inn.nu;
    out.cov = ikh * pred.cov * ikh.transpose() + gain * obs.R * gain.transpose();
    symmetrize(out.cov);
    return out;
}

double normalized_innovation_squared(const Innovation& inn) {
    const auto llt = factor_spd(inn.S);
    const Vector y = llt.matrixL().solve(inn.nu);
    return y.squaredNorm();
}

double max_asymmetry(const Matrix& a) {
    if (a.rows() != a.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return (a - a.transpose()).cwiseAbs().maxCoeff();
}

} // namespace gtkf
