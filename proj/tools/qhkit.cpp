#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "commands.hpp"
#include "config.hpp"

namespace {

using qh::cli::Config;

Config load_config(const std::optional<std::string>& path) {
    return path.has_value() ? Config::from_file(*path) : Config();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qhkit: quasi-hyperbolic momentum toolkit"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    std::optional<std::string> out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;

    // --- run ---
    auto* run = app.add_subcommand("run", "single optimization run, trajectory CSV");
    std::optional<long> run_steps;
    run->add_option("--config", config_path, "config file");
    run->add_option("--seed", seed, "run seed");
    run->add_option("--out", out_path, "output CSV path");
    run->add_option("--steps", run_steps, "step budget");

    // --- sweep ---
    auto* sweep = app.add_subcommand("sweep", "nu x beta grid sweep, summary CSV");
    sweep->add_option("--config", config_path, "config file");
    sweep->add_option("--seed", seed, "single seed override");
    sweep->add_option("--jobs", jobs, "parallel workers");
    sweep->add_option("--out", out_path, "output CSV path");

    // --- convert ---
    auto* convert = app.add_subcommand("convert", "closed-form parameter mappings");
    convert->set_help_flag("--help", "print help"); // frees -h for the TSO coefficient
    std::string from_family;
    std::string to_family;
    convert->add_option("from", from_family, "source family")->required();
    convert->add_option("to", to_family, "target family");
    qh::cli::ConvertArgs cargs;
    std::vector<std::pair<std::string, std::optional<double>>> convert_flags;
    const char* names[] = {"alpha", "nu",    "beta", "eps", "gamma", "beta1", "beta2",
                           "kp",    "ki",    "kd",   "r",   "delta", "kappa", "xi",
                           "h",     "k",     "l",    "m",   "q",     "z"};
    for (const char* n : names) convert_flags.emplace_back(n, std::nullopt);
    for (auto& [name, slot] : convert_flags) {
        convert->add_option("--" + name, slot, "");
    }
    std::string betas_csv;
    convert->add_option("--betas", betas_csv, "comma-separated discount factors");

    // --- bound ---
    auto* bound = app.add_subcommand("bound", "tight (QH)Adam update bound");
    double b_nu1 = 1.0, b_nu2 = 1.0, b_beta1 = 0.9, b_beta2 = 0.999;
    std::optional<long> b_t;
    bool b_sweep = false;
    bound->add_option("--nu1", b_nu1, "");
    bound->add_option("--nu2", b_nu2, "");
    bound->add_option("--beta1", b_beta1, "")->required();
    bound->add_option("--beta2", b_beta2, "")->required();
    bound->add_option("--t", b_t, "finite horizon (default: limit)");
    bound->add_flag("--sweep-nu2", b_sweep, "emit nu2,bound CSV");
    bound->add_option("--out", out_path, "CSV path for --sweep-nu2");

    // --- variance ---
    auto* variance = app.add_subcommand("variance", "empirical variance ratio vs rho");
    double v_nu = 1.0, v_beta = 0.9;
    long v_n = 100000;
    variance->add_option("--nu", v_nu, "")->required();
    variance->add_option("--beta", v_beta, "")->required();
    variance->add_option("--n", v_n, "sample count");
    variance->add_option("--seed", seed, "rng seed");

    // --- oracle-check ---
    auto* oracle = app.add_subcommand("oracle-check", "trajectory equivalence of a mapped pair");
    std::string oc_a, oc_b;
    double oc_alpha = 1.0, oc_nu = 0.7, oc_beta = 0.9, oc_eps = 0.7;
    long oc_steps = 50, oc_dim = 10;
    oracle->add_option("a", oc_a, "first optimizer")->required();
    oracle->add_option("b", oc_b, "second optimizer")->required();
    oracle->add_option("--alpha", oc_alpha, "");
    oracle->add_option("--nu", oc_nu, "");
    oracle->add_option("--beta", oc_beta, "");
    oracle->add_option("--eps", oc_eps, "AccSGD eps");
    oracle->add_option("--steps", oc_steps, "");
    oracle->add_option("--dim", oc_dim, "");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qh::cli::kExitUsage;
    }

    try {
        if (run->parsed()) {
            return qh::cli::cmd_run(load_config(config_path), seed, out_path, run_steps);
        }
        if (sweep->parsed()) {
            return qh::cli::cmd_sweep(load_config(config_path), jobs, seed, out_path);
        }
        if (convert->parsed()) {
            for (auto& [name, slot] : convert_flags) {
                if (slot.has_value()) cargs.num[name] = *slot;
            }
            if (!betas_csv.empty()) {
                std::size_t pos = 0;
                while (pos < betas_csv.size()) {
                    const auto comma = betas_csv.find(',', pos);
                    const std::string tok = betas_csv.substr(
                        pos, comma == std::string::npos ? std::string::npos : comma - pos);
                    cargs.betas.push_back(std::stod(tok));
                    if (comma == std::string::npos) break;
                    pos = comma + 1;
                }
            }
            return qh::cli::cmd_convert(from_family, to_family, cargs);
        }
        if (bound->parsed()) {
            return qh::cli::cmd_bound(b_nu1, b_nu2, b_beta1, b_beta2, b_t, b_sweep, out_path);
        }
        if (variance->parsed()) {
            return qh::cli::cmd_variance(v_nu, v_beta, v_n, seed.value_or(42));
        }
        if (oracle->parsed()) {
            return qh::cli::cmd_oracle_check(oc_a, oc_b, oc_alpha, oc_nu, oc_beta, oc_eps,
                                             oc_steps, oc_dim);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return qh::cli::kExitUsage;
    }
    return qh::cli::kExitUsage;
}
