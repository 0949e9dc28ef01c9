#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace qh::cli {

// Exit codes shared by all subcommands:
//   0 success, 1 failed check, 2 usage/config error, 3 run explosion,
//   4 infeasible conversion.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitExploded = 3;
inline constexpr int kExitInfeasible = 4;

int cmd_run(const Config& cfg, std::optional<std::uint64_t> seed,
            const std::optional<std::string>& out, std::optional<long> steps);

int cmd_sweep(const Config& cfg, std::optional<int> jobs, std::optional<std::uint64_t> seed,
              const std::optional<std::string>& out);

struct ConvertArgs {
    std::map<std::string, double> num; // present numeric flags by name
    std::vector<double> betas;         // --betas list

    bool has(const std::string& k) const { return num.count(k) > 0; }
    double get(const std::string& k) const;
    double get(const std::string& k, double fallback) const;
};

int cmd_convert(const std::string& from, const std::string& to, const ConvertArgs& args);

int cmd_bound(double nu1, double nu2, double beta1, double beta2, std::optional<long> t,
              bool sweep_nu2, const std::optional<std::string>& out);

int cmd_variance(double nu, double beta, long n, std::uint64_t seed);

int cmd_oracle_check(const std::string& a, const std::string& b, double alpha, double nu,
                     double beta, double eps, long steps, long dim);

} // namespace qh::cli
