// Command-line driver for the constrained Schrodinger-Poisson solver.
//
//   smx run   --config cfg.json [--seed N] [--out DIR]
//   smx study --config cfg.json --grids 8,16,32 [--seed N] [--out DIR]
//
// `run` exits 0 iff the verifier passes, 1 if it fails, 2 on errors.

#include "smx/pipeline.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>

namespace {

smx::ExperimentConfig load_with_overrides(const std::string& path, const std::optional<std::uint64_t>& seed,
                                          const std::optional<std::string>& out) {
    smx::ExperimentConfig config = smx::load_config(path);
    if (seed) config.seed = *seed;
    if (out) config.output_path = *out;
    return config;
}

int run_command(const smx::ExperimentConfig& config) {
    const smx::SolveReport report = smx::run_experiment(config);
    smx::write_outputs(report, config.output_path);
    const auto& v = report.verification;
    std::cout << "r1 = " << report.ball.r1 << ", m = " << report.ball.m << ", ||h||_L3 = " << report.h_norm << '\n'
              << "beta = " << report.beta << " after " << report.trace_summary.iterations << " iterations ("
              << report.trace_summary.stop_reason << ")\n"
              << "fixed-point residual = " << v.fixed_point_rel_residual
              << ", pde residual = " << v.pde_rel_residual << ", VI violations = " << v.vi_violations << "/"
              << v.vi_samples << ", u2 in ball = " << std::boolalpha << v.u2_in_ball << '\n'
              << "verification " << (v.passed ? "PASSED" : "FAILED") << "; outputs in " << config.output_path << '\n';
    return v.passed ? 0 : 1;
}

int study_command(const smx::ExperimentConfig& config, const std::vector<int>& grids) {
    const auto rows = smx::convergence_study(config, grids);
    std::filesystem::create_directories(config.output_path);
    const std::string csv = smx::study_csv(rows);
    std::ofstream(std::filesystem::path(config.output_path) / "study.csv") << csv;
    std::cout << csv;
    for (const auto& row : rows) {
        if (!row.error.empty() || !row.passed.value_or(false)) return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained energy minimisation and fixed-point verification for the Schrodinger-Poisson system"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::vector<int> grids;

    auto* run = app.add_subcommand("run", "run the full pipeline once");
    run->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "override the config seed");
    run->add_option("--out", out, "override the output directory");

    auto* study = app.add_subcommand("study", "manufactured-solution and pipeline study over several grids");
    study->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    study->add_option("--grids", grids, "comma-separated grid sizes")->required()->delimiter(',');
    study->add_option("--seed", seed, "override the config seed");
    study->add_option("--out", out, "override the output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        const smx::ExperimentConfig config = load_with_overrides(config_path, seed, out);
        if (*run) return run_command(config);
        return study_command(config, grids);
    } catch (const smx::ForcingTooLargeError& e) {
        std::cerr << "error: " << e.what() << " (admissible m = " << e.bound() << ")\n";
        return 2;
    } catch (const smx::StageError& e) {
        std::cerr << "error in stage " << e.stage() << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
