#include "gtkf/detector.hpp"

#include <algorithm>
#include <string>

#include "gtkf/errors.hpp"

namespace gtkf {

void DetectorConfig::validate() const {
    if (!(tail_mass > 0.0 && tail_mass < 0.5)) {
        throw ConfigError("detector tail_mass must lie in (0, 0.5)");
    }
    if (window == 0) {
        throw ConfigError("detector window must be >= 1");
    }
}

std::size_t max_window_dof(std::span<const SensorModel> sensors, std::size_t window) {
    std::size_t per_step = 0;
    for (const auto& s : sensors) per_step += static_cast<std::size_t>(s.meas_dim());
    return std::max<std::size_t>(1, per_step * window);
}

namespace {

void check_shapes(const SamplingMatrix& phi, std::span<const SensorModel> sensors, const GaussianState& prior,
                  const MeasurementGrid& measurements, const DetectorConfig& cfg) {
    cfg.validate();
    if (phi.window() != cfg.window) {
        throw ArgumentError("sampling matrix window " + std::to_string(phi.window()) + " != detector window " +
                            std::to_string(cfg.window));
    }
    if (phi.sensors() != sensors.size()) {
        throw ArgumentError("sampling matrix covers " + std::to_string(phi.sensors()) + " sensors, got " +
                            std::to_string(sensors.size()));
    }
    if (measurements.size() != cfg.window) {
        throw ArgumentError("measurements cover " + std::to_string(measurements.size()) + " steps, window is " +
                            std::to_string(cfg.window));
    }
    for (const auto& step : measurements) {
        if (step.size() != sensors.size()) {
            throw ArgumentError("measurements must hold one vector per sensor at every step");
        }
        for (std::size_t i = 0; i < sensors.size(); ++i) {
            if (step[i].size() != sensors[i].meas_dim()) {
                throw ArgumentError("measurement of sensor " + std::to_string(i) + " has wrong size");
            }
        }
    }
    if (prior.dim() == 0) {
        throw ArgumentError("prior state is empty");
    }
}

GaussianState fuse(std::span<const SensorModel> sensors, const GaussianState& pred, const std::vector<Vector>& z,
                   const std::vector<std::size_t>& used) {
    if (used.empty()) return pred;
    const auto obs = stack_group(sensors, z, used);
    const auto inn = innovate(pred, obs);
    return update(pred, obs, inn);
}

} // namespace

WindowResult step_window(const SamplingMatrix& phi, std::span<const SensorModel> sensors, const SystemModel& model,
                         const GaussianState& prior, const MeasurementGrid& measurements, const DetectorConfig& cfg,
                         const Chi2Bounds& bounds) {
    check_shapes(phi, sensors, prior, measurements, cfg);
    if (bounds.tail_mass() != cfg.tail_mass) {
        throw ConfigError("chi-square bounds were built for a different tail mass");
    }
    const auto tests = phi.tests();
    const auto window = cfg.window;

    WindowResult res;
    res.g = OutcomeVector(tests);
    res.channels.resize(tests);
    for (std::size_t t = 0; t < tests; ++t) res.channels[t].test_index = t;
    res.fused_states.reserve(window);

    GaussianState fused = prior;
    std::vector<bool> in_union(sensors.size());
    for (std::size_t k = 0; k < window; ++k) {
        const auto pred = predict(model, fused);
        const auto& z = measurements[k];
        std::fill(in_union.begin(), in_union.end(), false);

        for (auto& ch : res.channels) {
            const auto group = group_at(phi, ch.test_index, k);
            if (group.empty()) continue;
            ++res.nominal_chi2_tests;
            if (ch.status == ChannelStatus::Tripped) continue;

            const auto obs = stack_group(sensors, z, group);
            const auto inn = innovate(pred, obs);
            ch.cum_stat += normalized_innovation_squared(inn);
            ch.cum_dof += static_cast<std::size_t>(obs.z.size());
            ++res.chi2_tests_performed;
            if (!bounds.accepts(ch.cum_stat, ch.cum_dof)) {
                ch.status = ChannelStatus::Tripped;
                ch.tripped_at = k;
                res.g.set(ch.test_index);
                continue;
            }
            for (auto i : group) in_union[i] = true;
        }

        std::vector<std::size_t> used;
        for (std::size_t i = 0; i < sensors.size(); ++i) {
            if (in_union[i]) used.push_back(i);
        }
        fused = fuse(sensors, pred, z, used);
        res.fused_states.push_back(fused);
    }
    return res;
}

WindowResult step_window(const SamplingMatrix& phi, std::span<const SensorModel> sensors, const SystemModel& model,
                         const GaussianState& prior, const MeasurementGrid& measurements, const DetectorConfig& cfg) {
    cfg.validate();
    const Chi2Bounds bounds(cfg.tail_mass, max_window_dof(sensors, cfg.window));
    return step_window(phi, sensors, model, prior, measurements, cfg, bounds);
}

WindowResult one_by_one_window(std::span<const SensorModel> sensors, const SystemModel& model,
                               const GaussianState& prior, const MeasurementGrid& measurements,
                               const DetectorConfig& cfg, const Chi2Bounds& bounds) {
    cfg.validate();
    const auto phi = SamplingMatrix::one_by_one(cfg.window, sensors.size());
    auto res = step_window(phi, sensors, model, prior, measurements, cfg, bounds);
    res.nominal_chi2_tests = cfg.window * sensors.size();
    return res;
}

WindowResult one_by_one_window(std::span<const SensorModel> sensors, const SystemModel& model,
                               const GaussianState& prior, const MeasurementGrid& measurements,
                               const DetectorConfig& cfg) {
    cfg.validate();
    const Chi2Bounds bounds(cfg.tail_mass, max_window_dof(sensors, cfg.window));
    return one_by_one_window(sensors, model, prior, measurements, cfg, bounds);
}

FaultVector trip_pattern(const WindowResult& result, std::size_t sensors, std::size_t window) {
    if (result.channels.size() != sensors) {
        throw ArgumentError("trip_pattern: expected one channel per sensor");
    }
    FaultVector f(sensors * window);
    for (const auto& ch : result.channels) {
        if (ch.tripped_at) f.set(column_index(ch.test_index, *ch.tripped_at, sensors));
    }
    return f;
}

std::vector<GaussianState> filter_window(std::span<const SensorModel> sensors, const SystemModel& model,
                                         const GaussianState& prior, const MeasurementGrid& measurements,
                                         const std::vector<std::vector<std::size_t>>& used_per_step) {
    if (used_per_step.size() != measurements.size()) {
        throw ArgumentError("filter_window: one sensor subset per step required");
    }
    std::vector<GaussianState> out;
    out.reserve(measurements.size());
    GaussianState state = prior;
    for (std::size_t k = 0; k < measurements.size(); ++k) {
        if (measurements[k].size() != sensors.size()) {
            throw ArgumentError("filter_window: measurement grid does not match sensors");
        }
        state = fuse(sensors, predict(model, state), measurements[k], used_per_step[k]);
        out.push_back(state);
    }
    return out;
}

} // namespace gtkf
