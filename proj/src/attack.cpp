#include "gtkf/attack.hpp"

#include <ostream>
#include <random>
#include <string>

#include "gtkf/errors.hpp"
#include "gtkf/rng.hpp"

namespace gtkf {
namespace {

Vector standard_normal(Rng& rng, Eigen::Index n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
}

} // namespace

void AttackModel::validate(Eigen::Index meas_dim) const {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw ConfigError("attack probability q must lie in [0, 1]");
    }
    if (Rb.rows() != meas_dim || Rb.cols() != meas_dim) {
        throw ConfigError("bias covariance must be " + std::to_string(meas_dim) + "x" + std::to_string(meas_dim));
    }
    if (max_asymmetry(Rb) > 1e-9) {
        throw ConfigError("bias covariance is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(Rb, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-9) {
        throw ConfigError("bias covariance is not positive semidefinite");
    }
    if (mode == BiasMode::Constant && offset.size() != meas_dim) {
        throw ConfigError("constant bias offset must have " + std::to_string(meas_dim) + " entries");
    }
}

void ScenarioConfig::validate() const {
    model.validate();
    const auto nx = model.state_dim();
    if (sensors.empty()) {
        throw ConfigError("scenario needs at least one sensor");
    }
    for (const auto& s : sensors) s.validate(nx);
    for (const auto& s : sensors) {
        if (s.meas_dim() != sensors.front().meas_dim()) {
            throw ConfigError("all sensors must share the measurement dimension");
        }
    }
    if (x0_mean.size() != nx || x0_cov.rows() != nx || x0_cov.cols() != nx) {
        throw ConfigError("initial state dimensions do not match the model");
    }
    if (window == 0 || horizon == 0 || horizon % window != 0) {
        throw ConfigError("horizon (" + std::to_string(horizon) + ") must be a positive multiple of the window (" +
                          std::to_string(window) + ")");
    }
    attack.validate(sensors.front().meas_dim());
}

ScenarioConfig reference_scenario(double rb) {
    ScenarioConfig cfg;
    cfg.model = constant_velocity_model(0.1, 0.01);
    cfg.sensors.assign(150, position_sensor(1.0));
    cfg.x0_mean = Vector{{0.0, 1.5}};
    cfg.x0_cov = Vector{{1000.0, 1.0}}.asDiagonal();
    cfg.horizon = 50;
    cfg.window = 5;
    cfg.attack.q = 0.01;
    cfg.attack.Rb = Matrix::Constant(1, 1, rb);
    return cfg;
}

Matrix psd_sqrt(const Matrix& cov) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal();
}

std::vector<Vector> simulate_truth(const ScenarioConfig& cfg, std::uint64_t seed) {
    cfg.model.validate();
    if (cfg.x0_mean.size() != cfg.model.state_dim()) {
        throw ConfigError("initial state dimension does not match the model");
    }
    Rng init_rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::InitialState)}));
    Rng proc_rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::ProcessNoise)}));
    const Matrix x0_root = psd_sqrt(cfg.x0_cov);
    const Matrix q_root = psd_sqrt(cfg.model.Q);

    std::vector<Vector> truth;
    truth.reserve(cfg.horizon + 1);
    truth.push_back(cfg.x0_mean + x0_root * standard_normal(init_rng, cfg.x0_mean.size()));
    for (std::size_t k = 0; k < cfg.horizon; ++k) {
        const Vector v = q_root * standard_normal(proc_rng, cfg.model.noise_dim());
        truth.push_back(cfg.model.F * truth.back() + cfg.model.Gamma * v);
    }
    return truth;
}

FaultVector sample_fault_pattern(const AttackModel& attack, std::size_t window, std::size_t sensors,
                                 std::uint64_t seed) {
    if (!(attack.q >= 0.0 && attack.q <= 1.0)) {
        throw ConfigError("attack probability q must lie in [0, 1]");
    }
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::AttackPattern)}));
    std::bernoulli_distribution coin(attack.q);
    FaultVector f(window * sensors);
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (coin(rng)) f.set(j);
    }
    return f;
}

MeasurementGrid synthesize_measurements(std::span<const Vector> truth, std::span<const SensorModel> sensors,
                                        const FaultVector& f, const AttackModel& attack, std::uint64_t seed) {
    const auto window = truth.size();
    const auto n = sensors.size();
    if (f.size() != window * n) {
        throw ArgumentError("fault vector length does not match window x sensors");
    }
    Rng noise_rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::MeasurementNoise)}));
    Rng bias_rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::Bias)}));

    std::vector<Matrix> noise_roots;
    noise_roots.reserve(n);
    for (const auto& s : sensors) noise_roots.push_back(psd_sqrt(s.Rw));
    const Matrix bias_root = attack.Rb.size() > 0 ? psd_sqrt(attack.Rb) : Matrix();

    MeasurementGrid z(window, std::vector<Vector>(n));
    for (std::size_t k = 0; k < window; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto& s = sensors[i];
            const auto nz = s.meas_dim();
            z[k][i] = s.H * truth[k] + noise_roots[i] * standard_normal(noise_rng, nz);
            const Vector eps = standard_normal(bias_rng, nz);
            if (f.test(column_index(i, k, n))) {
                if (attack.mode == BiasMode::Constant) {
                    z[k][i] += attack.offset;
                } else if (bias_root.size() > 0) {
                    z[k][i] += bias_root * eps;
                }
            }
        }
    }
    return z;
}

void write_truth_csv(std::ostream& os, std::span<const Vector> truth) {
    os << "step";
    if (!truth.empty()) {
        for (Eigen::Index c = 0; c < truth.front().size(); ++c) os << ",x" << c;
    }
    os << '\n';
    for (std::size_t k = 0; k < truth.size(); ++k) {
        os << k;
        for (Eigen::Index c = 0; c < truth[k].size(); ++c) os << ',' << truth[k](c);
        os << '\n';
    }
}

void write_measurements_csv(std::ostream& os, const MeasurementGrid& z, std::size_t first_step) {
    os << "step,sensor,component,value\n";
    for (std::size_t k = 0; k < z.size(); ++k) {
        for (std::size_t i = 0; i < z[k].size(); ++i) {
            for (Eigen::Index c = 0; c < z[k][i].size(); ++c) {
                os << first_step + k << ',' << i + 1 << ',' << c << ',' << z[k][i](c) << '\n';
            }
        }
    }
}

} // namespace gtkf
