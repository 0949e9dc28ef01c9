#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qh::cli {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "problem.kind",
        "problem.eigenvalues",
        "problem.linear",
        "problem.noise",
        "problem.noise_sigma",
        "problem.dim",
        "problem.cov_eigenvalues",
        "problem.label_sigma",
        "problem.weights_seed",
        "problem.samples",
        "problem.features",
        "problem.classes",
        "problem.separation",
        "problem.feature_scale",
        "problem.l2_coeff",
        "problem.minibatch",
        "problem.data_seed",
        "optimizer.family",
        "optimizer.nu",
        "optimizer.beta",
        "optimizer.nu1",
        "optimizer.beta1",
        "optimizer.nu2",
        "optimizer.beta2",
        "optimizer.eps",
        "optimizer.bias_correction",
        "schedule.base_alpha",
        "schedule.warmup_steps",
        "schedule.decay_every",
        "schedule.decay_factor",
        "run.steps",
        "run.record_every",
        "run.seed",
        "sweep.nu_grid",
        "sweep.beta_grid",
        "sweep.seeds",
        "sweep.steps",
        "sweep.jobs",
        "output.path",
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::stringstream ss(text);
    std::string line;
    long lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key=value");
        }
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
    if (known_keys().count(key) == 0) {
        throw std::runtime_error("unknown config key: " + key);
    }
    values_[key] = value;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config key " + key + ": not a number: " + it->second);
    }
}

long Config::get_long(const std::string& key, long fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const long v = std::stol(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config key " + key + ": not an integer: " + it->second);
    }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw std::runtime_error("config key " + key + ": expected true/false: " + it->second);
}

std::vector<double> Config::get_doubles(const std::string& key,
                                        const std::vector<double>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    for (const auto& tok : split_commas(it->second)) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::runtime_error("config key " + key + ": not a number: " + tok);
        }
    }
    if (out.empty()) throw std::runtime_error("config key " + key + ": empty list");
    return out;
}

std::vector<std::uint64_t> Config::get_seeds(const std::string& key,
                                             const std::vector<std::uint64_t>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<std::uint64_t> out;
    for (const auto& tok : split_commas(it->second)) {
        try {
            out.push_back(std::stoull(tok));
        } catch (const std::exception&) {
            throw std::runtime_error("config key " + key + ": not an integer: " + tok);
        }
    }
    if (out.empty()) throw std::runtime_error("config key " + key + ": empty list");
    return out;
}

} // namespace qh::cli
