#include "gtkf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "gtkf/errors.hpp"
#include "gtkf/rng.hpp"

namespace gtkf {

std::string method_name(Method m) {
    switch (m) {
    case Method::Proposed: return "proposed";
    case Method::OneByOne: return "one_by_one";
    case Method::AllSensors: return "all_sensors";
    case Method::Clairvoyant: return "clairvoyant";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    for (auto m : {Method::Proposed, Method::OneByOne, Method::AllSensors, Method::Clairvoyant}) {
        if (method_name(m) == name) return m;
    }
    throw ConfigError("unknown method '" + name + "'");
}

void ExperimentConfig::validate() const {
    scenario.validate();
    if (tests == 0) throw ConfigError("number of tests T must be >= 1");
    if (runs == 0) throw ConfigError("number of runs must be >= 1");
    if (methods.empty()) throw ConfigError("at least one method is required");
    if (detector.window != scenario.window) {
        throw ConfigError("detector window differs from scenario window");
    }
    detector.validate();
    decoder.validate();
    const double p = effective_p();
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError("sampling probability " + std::to_string(p) + " outside [0, 1]");
    }
}

double ExperimentConfig::effective_p() const {
    if (sampling_p) return *sampling_p;
    const double denom = scenario.attack.q * static_cast<double>(scenario.window * scenario.sensors.size());
    if (!(denom > 0.0)) {
        throw ConfigError("sampling_p = auto needs q > 0 (p = 1 / (q K N))");
    }
    return std::min(1.0, 1.0 / denom);
}

double ErrorCounts::p_fa() const {
    return negatives == 0 ? 0.0 : static_cast<double>(false_alarms) / static_cast<double>(negatives);
}

double ErrorCounts::p_m() const {
    return positives == 0 ? 0.0 : static_cast<double>(misses) / static_cast<double>(positives);
}

ErrorCounts& ErrorCounts::operator+=(const ErrorCounts& o) {
    false_alarms += o.false_alarms;
    negatives += o.negatives;
    misses += o.misses;
    positives += o.positives;
    return *this;
}

ErrorCounts error_counts(const FaultVector& f_hat, const FaultVector& f_true) {
    if (f_hat.size() != f_true.size()) {
        throw ArgumentError("error_rates: length mismatch");
    }
    ErrorCounts c;
    for (std::size_t j = 0; j < f_true.size(); ++j) {
        const bool truth = f_true.test(j);
        const bool flagged = f_hat.test(j);
        if (truth) {
            ++c.positives;
            c.misses += !flagged;
        } else {
            ++c.negatives;
            c.false_alarms += flagged;
        }
    }
    return c;
}

std::pair<double, double> error_rates(const FaultVector& f_hat, const FaultVector& f_true) {
    const auto c = error_counts(f_hat, f_true);
    return {c.p_fa(), c.p_m()};
}

std::vector<std::vector<double>> rmse(const std::vector<std::vector<Vector>>& estimates,
                                      const std::vector<std::vector<Vector>>& truth) {
    if (estimates.size() != truth.size() || estimates.empty()) {
        throw ArgumentError("rmse: run counts differ or are zero");
    }
    const auto steps = estimates.front().size();
    const auto dim = steps == 0 ? Eigen::Index{0} : estimates.front().front().size();
    std::vector<std::vector<double>> out(static_cast<std::size_t>(dim), std::vector<double>(steps, 0.0));
    for (std::size_t r = 0; r < estimates.size(); ++r) {
        if (estimates[r].size() != steps || truth[r].size() != steps) {
            throw ArgumentError("rmse: trajectories differ in length");
        }
        for (std::size_t k = 0; k < steps; ++k) {
            if (estimates[r][k].size() != dim || truth[r][k].size() != dim) {
                throw ArgumentError("rmse: state dimensions differ");
            }
            for (Eigen::Index c = 0; c < dim; ++c) {
                const double e = estimates[r][k](c) - truth[r][k](c);
                out[static_cast<std::size_t>(c)][k] += e * e;
            }
        }
    }
    const auto runs = static_cast<double>(estimates.size());
    for (auto& comp : out) {
        for (auto& v : comp) v = std::sqrt(v / runs);
    }
    return out;
}

namespace {

struct MethodRun {
    std::vector<Vector> estimates; // steps 1 .. horizon
    ErrorCounts errors;
    std::size_t tests = 0;
    std::size_t nominal = 0;
    std::size_t trips = 0;
};

struct RunResult {
    std::vector<Vector> truth; // steps 1 .. horizon
    std::vector<MethodRun> methods;
};

RunResult run_once(const ExperimentConfig& cfg, std::size_t run, const Chi2Bounds& bounds,
                   const std::optional<SamplingMatrix>& fixed_phi) {
    const auto& scn = cfg.scenario;
    const auto K = scn.window;
    const auto N = scn.sensors.size();
    const double p = cfg.effective_p();

    const auto truth = simulate_truth(scn, derive_seed(cfg.seed, {run}));
    RunResult out;
    out.truth.assign(truth.begin() + 1, truth.end());
    out.methods.resize(cfg.methods.size());

    std::vector<GaussianState> state(cfg.methods.size(), scn.initial_state());
    std::vector<std::size_t> all(N);
    for (std::size_t i = 0; i < N; ++i) all[i] = i;

    for (std::size_t w = 0; w < scn.windows(); ++w) {
        const auto window_seed = derive_seed(cfg.seed, {run, w});
        const auto f = sample_fault_pattern(scn.attack, K, N, window_seed);
        const std::span<const Vector> window_truth(truth.data() + 1 + w * K, K);
        const auto z = synthesize_measurements(window_truth, scn.sensors, f, scn.attack, window_seed);

        for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
            auto& mr = out.methods[mi];
            std::vector<GaussianState> states;
            switch (cfg.methods[mi]) {
            case Method::Proposed: {
                const auto phi = fixed_phi ? *fixed_phi
                                           : generate_matrix(cfg.tests, K, N, p,
                                                             derive_seed(cfg.seed, {static_cast<std::uint64_t>(
                                                                                        Stream::SamplingMatrix),
                                                                                    run, w}));
                auto res = step_window(phi, scn.sensors, scn.model, state[mi], z, cfg.detector, bounds);
                mr.errors += error_counts(decode(phi, res.g, cfg.decoder), f);
                mr.tests += res.chi2_tests_performed;
                mr.nominal += res.nominal_chi2_tests;
                mr.trips += res.g.count();
                states = std::move(res.fused_states);
                break;
            }
            case Method::OneByOne: {
                auto res = one_by_one_window(scn.sensors, scn.model, state[mi], z, cfg.detector, bounds);
                mr.errors += error_counts(trip_pattern(res, N, K), f);
                mr.tests += res.chi2_tests_performed;
                mr.nominal += res.nominal_chi2_tests;
                mr.trips += res.g.count();
                states = std::move(res.fused_states);
                break;
            }
            case Method::AllSensors:
                states = filter_window(scn.sensors, scn.model, state[mi], z,
                                       std::vector<std::vector<std::size_t>>(K, all));
                break;
            case Method::Clairvoyant: {
                std::vector<std::vector<std::size_t>> normal(K);
                for (std::size_t k = 0; k < K; ++k) {
                    for (std::size_t i = 0; i < N; ++i) {
                        if (!f.test(column_index(i, k, N))) normal[k].push_back(i);
                    }
                }
                states = filter_window(scn.sensors, scn.model, state[mi], z, normal);
                break;
            }
            }
            state[mi] = states.back();
            for (auto& s : states) mr.estimates.push_back(std::move(s.mean));
        }
    }
    return out;
}

std::size_t worker_count(const ExperimentConfig& cfg) {
    std::size_t n = cfg.threads != 0 ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
    return std::min(n, cfg.runs);
}

} // namespace

std::vector<MetricsReport> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto& scn = cfg.scenario;
    const Chi2Bounds bounds(cfg.detector.tail_mass, max_window_dof(scn.sensors, scn.window));
    std::optional<SamplingMatrix> fixed_phi;
    if (!cfg.regenerate_matrix) {
        fixed_phi = generate_matrix(cfg.tests, scn.window, scn.sensors.size(), cfg.effective_p(),
                                    derive_seed(cfg.seed, {static_cast<std::uint64_t>(Stream::SamplingMatrix)}));
    }

    // Results are stored by run index and reduced in order, so the report does
    // not depend on how runs were scheduled across workers.
    std::vector<RunResult> results(cfg.runs);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const auto r = next.fetch_add(1);
            if (r >= cfg.runs) return;
            try {
                results[r] = run_once(cfg, r, bounds, fixed_phi);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = cfg.runs;
                return;
            }
        }
    };
    const auto nthreads = worker_count(cfg);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(nthreads);
        for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    const double windows = static_cast<double>(scn.windows());
    const double bound =
        expected_chi2_upper_bound(cfg.tests, scn.window, cfg.effective_p(), scn.sensors.size());
    std::vector<std::vector<Vector>> truth;
    truth.reserve(cfg.runs);
    for (auto& r : results) truth.push_back(r.truth);

    std::vector<MetricsReport> reports;
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        MetricsReport rep;
        rep.method = cfg.methods[mi];
        std::vector<std::vector<Vector>> est;
        est.reserve(cfg.runs);
        std::vector<double> per_run_tests;
        double nominal = 0.0;
        for (auto& r : results) {
            const auto& mr = r.methods[mi];
            est.push_back(mr.estimates);
            rep.errors += mr.errors;
            rep.evaluations += mr.tests;
            rep.trips += mr.trips;
            per_run_tests.push_back(static_cast<double>(mr.tests) / windows);
            nominal += static_cast<double>(mr.nominal) / windows;
        }
        const auto curves = rmse(est, truth);
        rep.rmse_position = curves.at(0);
        rep.rmse_velocity = curves.size() > 1 ? curves[1] : std::vector<double>(curves[0].size(), 0.0);

        const auto nx = static_cast<std::size_t>(curves.size());
        rep.sq_err_position.resize(cfg.runs);
        rep.sq_err_velocity.resize(cfg.runs);
        for (std::size_t r = 0; r < cfg.runs; ++r) {
            for (std::size_t k = 0; k < est[r].size(); ++k) {
                const Vector e = est[r][k] - truth[r][k];
                rep.sq_err_position[r].push_back(e(0) * e(0));
                rep.sq_err_velocity[r].push_back(nx > 1 ? e(1) * e(1) : 0.0);
            }
        }

        rep.has_error_rates = rep.method == Method::Proposed || rep.method == Method::OneByOne;
        rep.has_tests = rep.has_error_rates;
        rep.p_fa = rep.errors.p_fa();
        rep.p_m = rep.errors.p_m();
        rep.bound = bound;
        if (rep.has_tests) {
            double mean = 0.0;
            for (auto v : per_run_tests) mean += v;
            mean /= static_cast<double>(cfg.runs);
            double var = 0.0;
            for (auto v : per_run_tests) var += (v - mean) * (v - mean);
            const double n = static_cast<double>(cfg.runs);
            rep.avg_chi2_tests = mean;
            rep.avg_chi2_tests_se = cfg.runs > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
            rep.nominal_chi2_tests = nominal / n;
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, const std::vector<double>& rb_values) {
    if (rb_values.empty()) throw ConfigError("sweep needs at least one Rb value");
    std::vector<SweepPoint> out;
    for (double rb : rb_values) {
        if (!(rb >= 0.0)) throw ConfigError("Rb values must be >= 0");
        auto point_cfg = cfg;
        const auto nz = cfg.scenario.sensors.front().meas_dim();
        point_cfg.scenario.attack.Rb = rb * Matrix::Identity(nz, nz);
        out.push_back({rb, run_experiment(point_cfg)});
    }
    return out;
}

const MetricsReport& report_for(const std::vector<MetricsReport>& reports, Method m) {
    for (const auto& r : reports) {
        if (r.method == m) return r;
    }
    throw ArgumentError("no report for method " + method_name(m));
}

} // namespace gtkf
