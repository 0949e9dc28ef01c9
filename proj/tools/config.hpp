#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qh::cli {

// Flat key=value configuration document. '#' starts a comment, blank lines
// are skipped, keys are dotted (problem.*, optimizer.*, schedule.*, run.*,
// sweep.*, output.*). Unknown keys are rejected by name. Command-line flags
// override file values.
class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key,
                                    const std::vector<double>& fallback) const;
    std::vector<std::uint64_t> get_seeds(const std::string& key,
                                         const std::vector<std::uint64_t>& fallback) const;

private:
    std::map<std::string, std::string> values_;
};

} // namespace qh::cli
