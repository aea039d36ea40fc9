#include "gtkf/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "gtkf/errors.hpp"

namespace gtkf {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
    std::string s = v;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string tok; is >> tok;) out.push_back(tok);
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
    }
    return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("config key '" + key + "': '" + v + "' is not a non-negative integer");
    }
    return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& tok : split_list(v)) out.push_back(to_double(key, tok));
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + v + "'");
}

} // namespace

ConfigFile parse_config(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        }
        if (!kv.emplace(key, value).second) {
            throw ConfigError("config key '" + key + "' given twice");
        }
    }

    std::size_t sensors = 150, window = 5, horizon = 50;
    double dt = 0.1, qproc = 0.01, rw = 1.0, q = 0.01, rb = 1e4;
    std::vector<double> x0_mean{0.0, 1.5}, x0_cov{1000.0, 1.0};
    std::string bias_mode = "gaussian";
    double bias_offset = 0.0;
    ConfigFile out;
    auto& ex = out.experiment;

    for (const auto& [key, v] : kv) {
        if (key == "sensors") {
            sensors = to_uint(key, v);
        } else if (key == "window") {
            window = to_uint(key, v);
        } else if (key == "horizon") {
            horizon = to_uint(key, v);
        } else if (key == "sample_time") {
            dt = to_double(key, v);
        } else if (key == "process_noise") {
            qproc = to_double(key, v);
        } else if (key == "meas_noise") {
            rw = to_double(key, v);
        } else if (key == "x0_mean") {
            x0_mean = to_doubles(key, v);
        } else if (key == "x0_cov") {
            x0_cov = to_doubles(key, v);
        } else if (key == "attack_q") {
            q = to_double(key, v);
        } else if (key == "attack_rb") {
            rb = to_double(key, v);
        } else if (key == "bias_mode") {
            bias_mode = v;
        } else if (key == "bias_offset") {
            bias_offset = to_double(key, v);
        } else if (key == "tests") {
            ex.tests = to_uint(key, v);
        } else if (key == "sampling_p") {
            if (v == "auto") {
                ex.sampling_p.reset();
            } else {
                ex.sampling_p = to_double(key, v);
            }
        } else if (key == "regenerate_matrix") {
            ex.regenerate_matrix = to_bool(key, v);
        } else if (key == "lambda") {
            ex.decoder.lambda = to_double(key, v);
        } else if (key == "round_threshold") {
            ex.decoder.round_threshold = to_double(key, v);
        } else if (key == "tail_mass") {
            ex.detector.tail_mass = to_double(key, v);
        } else if (key == "runs") {
            ex.runs = to_uint(key, v);
        } else if (key == "seed") {
            ex.seed = to_uint(key, v);
        } else if (key == "threads") {
            ex.threads = to_uint(key, v);
        } else if (key == "methods") {
            ex.methods.clear();
            for (const auto& name : split_list(v)) ex.methods.push_back(parse_method(name));
        } else if (key == "sweep_rb") {
            out.sweep_rb = to_doubles(key, v);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }

    if (x0_mean.size() != 2 || x0_cov.size() != 2) {
        throw ConfigError("x0_mean and x0_cov take two values (position, velocity)");
    }
    if (!(rw > 0.0)) throw ConfigError("meas_noise must be > 0");
    if (!(rb >= 0.0)) throw ConfigError("attack_rb must be >= 0");

    auto& scn = ex.scenario;
    scn.model = constant_velocity_model(dt, qproc);
    scn.sensors.assign(sensors, position_sensor(rw));
    scn.x0_mean = Vector{{x0_mean[0], x0_mean[1]}};
    scn.x0_cov = Vector{{x0_cov[0], x0_cov[1]}}.asDiagonal();
    scn.horizon = horizon;
    scn.window = window;
    scn.attack.q = q;
    scn.attack.Rb = Matrix::Constant(1, 1, rb);
    if (bias_mode == "gaussian") {
        scn.attack.mode = BiasMode::Gaussian;
    } else if (bias_mode == "constant") {
        scn.attack.mode = BiasMode::Constant;
        scn.attack.offset = Vector::Constant(1, bias_offset);
    } else {
        throw ConfigError("bias_mode must be 'gaussian' or 'constant'");
    }
    ex.detector.window = window;
    ex.validate();
    return out;
}

ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

} // namespace gtkf
