#pragma once

#include "smx/ball.hpp"
#include "smx/errors.hpp"
#include "smx/minimizer.hpp"
#include "smx/poisson.hpp"
#include "smx/verifier.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace smx {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "0.1.0";

/// Recipe for a coefficient field. K accepts constant and sine_bump; h also
/// accepts scaled_to_m, whose value is the fraction of m in (0, 1].
struct FieldRecipe {
    enum class Kind { constant, sine_bump, scaled_to_m };
    Kind kind = Kind::constant;
    double value = 1.0;

    friend bool operator==(const FieldRecipe&, const FieldRecipe&) = default;
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    int grid_n = 8;
    double p = 7.0;
    FieldRecipe K{FieldRecipe::Kind::constant, 1.0};
    FieldRecipe h{FieldRecipe::Kind::scaled_to_m, 1.0};
    double safety = 2.0;
    int samples = 64;
    std::uint64_t seed = 7;
    LinearSolveOptions linear;
    MinimizeOptions minimize;
    VerifyOptions verify;
    std::string output_path = "out";

    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

struct Seeds {
    std::uint64_t estimation = 0;
    std::uint64_t minimize = 0;
    std::uint64_t verification = 0;
};

struct TraceSummary {
    int iterations = 0;
    bool converged = false;
    bool on_boundary = false;
    std::string stop_reason;
    double initial_energy = 0.0;
    double final_energy = 0.0;
};

struct SolveReport {
    ExperimentConfig config;
    BallSpec ball;
    double max_ratio1 = 0.0;
    double max_ratio2 = 0.0;
    double h_norm = 0.0;
    double beta = 0.0;
    TraceSummary trace_summary;
    VerificationReport verification;
    std::map<std::string, double> wall_time;
    std::string version = kArtifactVersion;
    Seeds seeds;
    /// Written to trace.csv, not to report.json.
    std::vector<TraceEntry> trace;
};

/// A pipeline stage failed; carries the stage name.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json report_to_json(const SolveReport& report);
SolveReport report_from_json(const nlohmann::json& j);

/// sin(pi x) sin(pi y) sin(pi z) scaled to unit L^3 norm.
ScalarField unit_sine_bump(const DomainGrid& grid);

/// Stages: estimate_constants -> compute_r1 -> admit_forcing -> minimize -> verify.
/// Throws ForcingTooLargeError (naming m) when an absolute h exceeds the bound,
/// StageError for any other stage failure.
SolveReport run_experiment(const ExperimentConfig& config);

std::string trace_csv(const std::vector<TraceEntry>& trace);
/// Writes report.json and trace.csv into `dir` (created if missing).
void write_outputs(const SolveReport& report, const std::filesystem::path& dir);

/// Relative discrete L^2 error of the solve for -Delta w = 3 pi^2 sin sin sin
/// against the analytic sin(pi x) sin(pi y) sin(pi z).
double manufactured_poisson_error(int n, const LinearSolveOptions& opts = {});

struct StudyRow {
    int n = 0;
    std::optional<double> manufactured_error;
    std::optional<double> observed_order;
    std::optional<double> beta;
    std::optional<double> pde_rel_residual;
    std::optional<bool> passed;
    std::string error;
};

/// Manufactured Poisson error and the full pipeline on each grid. Per-grid
/// failures are recorded in the row and the study continues.
std::vector<StudyRow> convergence_study(const ExperimentConfig& base, const std::vector<int>& grids);
std::string study_csv(const std::vector<StudyRow>& rows);

}  // namespace smx
