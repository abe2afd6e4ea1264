// Command-line front end: analyze a model's closed-form variance comparison,
// run the Monte Carlo protocol, or verify the analytic derivatives.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or configuration
// error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fincmp/fincmp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
    std::string config_path;
    std::string format = "table";
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool allow_csv) {
    cmd->add_option("config", opts.config_path, "model configuration JSON file")->required();
    std::string formats = allow_csv ? "table, json or csv" : "table or json";
    cmd->add_option("--format", opts.format, "output format (" + formats + ")")
        ->check(allow_csv ? CLI::IsMember({"table", "json", "csv"})
                          : CLI::IsMember({"table", "json"}));
}

int run_analyze(const CommonOptions& opts, bool naive) {
    const fincmp::ModelConfig cfg = fincmp::load_model_config(opts.config_path);
    const auto model = fincmp::model_from_config(cfg);
    const fincmp::AnalysisReport report = fincmp::analyze(*model, cfg, naive);
    if (opts.format == "json") {
        std::cout << fincmp::to_json(report).dump(2) << '\n';
    } else if (opts.format == "csv") {
        std::cout << fincmp::to_csv(report);
    } else {
        std::cout << fincmp::to_table(report);
    }
    return kExitOk;
}

int run_simulate(const CommonOptions& opts, const fincmp::SimulationConfig& sim_cfg,
                 int n_override) {
    fincmp::ModelConfig cfg = fincmp::load_model_config(opts.config_path);
    if (n_override > 0) cfg.n = n_override;
    fincmp::SimulationConfig sc = sim_cfg;
    sc.n = cfg.n;
    sc.validate();

    const auto model = fincmp::model_from_config(cfg);
    const fincmp::SimulationResult result = fincmp::run_full_experiment(*model, sc);
    if (opts.format == "json") {
        std::cout << fincmp::to_json(result, cfg, sc).dump(2) << '\n';
    } else if (opts.format == "csv") {
        std::cout << fincmp::to_csv(result, cfg, sc);
    } else {
        std::cout << fincmp::to_table(result, cfg, sc);
    }
    return kExitOk;
}

int run_verify(const CommonOptions& opts, std::uint64_t seed) {
    const fincmp::ModelConfig cfg = fincmp::load_model_config(opts.config_path);
    const auto model = fincmp::model_from_config(cfg);
    const fincmp::VerificationOutcome outcome = fincmp::run_verification(*model, seed);
    if (opts.format == "json") {
        std::cout << fincmp::to_json(outcome, cfg).dump(2) << '\n';
    } else {
        std::cout << fincmp::to_table(outcome, cfg);
    }
    return outcome.pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compare the squared-score and negated-Hessian estimators of the Fisher "
                 "information number"};
    app.require_subcommand(1);

    CommonOptions analyze_opts;
    bool naive = false;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "closed-form variance approximations, conditions and recommendation");
    add_common(analyze, analyze_opts, /*allow_csv=*/true);
    analyze->add_flag("--naive", naive,
                      "include the wrong-expansion diagnostic (expanding g^2 directly)");

    CommonOptions sim_opts;
    fincmp::SimulationConfig sim_cfg;
    int n_override = 0;
    std::string mode = "per-observation";
    CLI::App* simulate =
        app.add_subcommand("simulate", "seeded Monte Carlo protocol with one-sided t test");
    add_common(simulate, sim_opts, /*allow_csv=*/true);
    simulate->add_option("--n", n_override, "samples per replicate (overrides config n)")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--replicates", sim_cfg.n_replicates, "replicates per trial")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--trials", sim_cfg.n_trials, "trials for the t test")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim_cfg.master_seed, "master seed");
    simulate->add_option("--mode", mode, "variance target: per-observation or estimator")
        ->check(CLI::IsMember({"per-observation", "estimator"}));

    CommonOptions verify_opts;
    std::uint64_t verify_seed = 20240901;
    CLI::App* verify = app.add_subcommand(
        "verify", "finite-difference, score zero-mean and information-identity checks");
    add_common(verify, verify_opts, /*allow_csv=*/false);
    verify->add_option("--seed", verify_seed, "seed for the Monte Carlo checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (analyze->parsed()) return run_analyze(analyze_opts, naive);
        if (simulate->parsed()) {
            sim_cfg.variance_target = fincmp::variance_target_from_string(mode);
            return run_simulate(sim_opts, sim_cfg, n_override);
        }
        return run_verify(verify_opts, verify_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
