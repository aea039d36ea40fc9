#include "gtkf/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gtkf/config.hpp"
#include "gtkf/decoder.hpp"
#include "gtkf/errors.hpp"
#include "gtkf/report.hpp"

namespace gtkf {
namespace {

namespace fs = std::filesystem;

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> threads;
    std::vector<std::string> methods;
    std::string out_dir = ".";
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
    cmd->add_option("--config", o.config, "Experiment config file (key = value)");
    cmd->add_option("--seed", o.seed, "Master seed (overrides config)");
    cmd->add_option("--runs", o.runs, "Monte-Carlo runs (overrides config)");
    cmd->add_option("--threads", o.threads, "Worker threads, 0 = hardware concurrency");
    cmd->add_option("--method", o.methods, "Method to run (repeatable): proposed, one_by_one, all_sensors, clairvoyant");
    cmd->add_option("--out", o.out_dir, "Output directory");
}

ConfigFile resolve(const RunOptions& o) {
    ConfigFile cfg = o.config.empty() ? ConfigFile{} : load_config(o.config);
    auto& ex = cfg.experiment;
    if (o.seed) ex.seed = *o.seed;
    if (o.runs) ex.runs = *o.runs;
    if (o.threads) ex.threads = *o.threads;
    if (!o.methods.empty()) {
        ex.methods.clear();
        for (const auto& m : o.methods) ex.methods.push_back(parse_method(m));
    }
    ex.validate();
    return cfg;
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    const auto path = fs::path(dir) / name;
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write '" + path.string() + "'");
    return os;
}

template <typename T>
T read_file(const std::string& path, T (*reader)(std::istream&)) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    return reader(in);
}

int fail(std::ostream& err, int code, const char* kind, const std::string& msg) {
    err << "error: code=" << code << " kind=" << kind << " message=" << msg << '\n';
    return code;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Joint group testing and Kalman filtering for time-varying faulty sensors"};
    app.require_subcommand(1);

    RunOptions sim_opts;
    auto* simulate = app.add_subcommand("simulate", "Run an experiment; writes rmse.csv, errors.csv, tests.csv");
    add_run_options(simulate, sim_opts);

    RunOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Vary Rb; writes sweep.csv, errors.csv, tests.csv");
    add_run_options(sweep, sweep_opts);

    std::string matrix_path, outcome_path;
    DecoderConfig dec_cfg;
    auto* decode_cmd = app.add_subcommand("decode", "Decode faults from a matrix file and an outcome file");
    decode_cmd->add_option("--matrix", matrix_path, "Sampling matrix file")->required();
    decode_cmd->add_option("--outcome", outcome_path, "Outcome vector file")->required();
    decode_cmd->add_option("--lambda", dec_cfg.lambda, "Slack weight");
    decode_cmd->add_option("--threshold", dec_cfg.round_threshold, "Rounding threshold");

    std::string disjunct_path;
    std::size_t disjunct_d = 1;
    auto* disjunct = app.add_subcommand("disjunct", "Certify d-disjunctness of a matrix file by brute force");
    disjunct->add_option("--matrix", disjunct_path, "Sampling matrix file")->required();
    disjunct->add_option("-d,--d", disjunct_d, "Disjunctness order")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        return fail(err, kExitConfig, "usage", e.what());
    }

    try {
        if (*simulate) {
            const auto cfg = resolve(sim_opts);
            const auto reports = run_experiment(cfg.experiment);
            const std::vector<SweepPoint> points{{cfg.experiment.rb_scale(), reports}};
            auto rmse_os = open_output(sim_opts.out_dir, "rmse.csv");
            write_rmse_csv(rmse_os, reports);
            auto err_os = open_output(sim_opts.out_dir, "errors.csv");
            write_errors_csv(err_os, points);
            auto tests_os = open_output(sim_opts.out_dir, "tests.csv");
            write_tests_csv(tests_os, points);
        } else if (*sweep) {
            if (sweep_opts.methods.empty()) sweep_opts.methods = {"proposed", "one_by_one"};
            const auto cfg = resolve(sweep_opts);
            auto& methods = cfg.experiment.methods;
            const auto has = [&](Method m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };
            if (!has(Method::Proposed) || !has(Method::OneByOne)) {
                throw ConfigError("sweep needs both the proposed and one_by_one methods");
            }
            const auto points = run_sweep(cfg.experiment, cfg.sweep_rb);
            auto sweep_os = open_output(sweep_opts.out_dir, "sweep.csv");
            write_sweep_csv(sweep_os, points);
            auto err_os = open_output(sweep_opts.out_dir, "errors.csv");
            write_errors_csv(err_os, points);
            auto tests_os = open_output(sweep_opts.out_dir, "tests.csv");
            write_tests_csv(tests_os, points);
        } else if (*decode_cmd) {
            const auto phi = read_file<SamplingMatrix>(matrix_path, &read_matrix);
            const auto g = read_file<BitVector>(outcome_path, &read_bits);
            const auto f = decode(phi, g, dec_cfg);
            out << "column,sensor,time\n";
            for (auto j : f.ones()) {
                out << j + 1 << ',' << j % phi.sensors() + 1 << ',' << j / phi.sensors() + 1 << '\n';
            }
        } else if (*disjunct) {
            const auto phi = read_file<SamplingMatrix>(disjunct_path, &read_matrix);
            const bool ok = is_d_disjunct(phi, disjunct_d);
            out << "d,disjunct\n" << disjunct_d << ',' << (ok ? "true" : "false") << '\n';
        }
    } catch (const NumericError& e) {
        return fail(err, kExitNumeric, "numeric", e.what());
    } catch (const ConfigError& e) {
        return fail(err, kExitConfig, "config", e.what());
    } catch (const ArgumentError& e) {
        return fail(err, kExitConfig, "argument", e.what());
    } catch (const BudgetExceeded& e) {
        return fail(err, kExitConfig, "budget", e.what());
    } catch (const std::exception& e) {
        return fail(err, 1, "internal", e.what());
    }
    return kExitOk;
}

} // namespace gtkf
