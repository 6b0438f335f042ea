#pragma once

// The pipeline stages behind each CLI subcommand. Every stage writes its
// artifacts into config.output_dir and returns what it wrote. Errors are
// reported by exception: ConfigError and DomainError for bad input,
// NumericalError for bracket or convergence failures.

#include "eit/app/config.hpp"
#include "eit/app/diagnostics.hpp"
#include "eit/app/serialization.hpp"
#include "eit/montecarlo.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace eit::app {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitNumerical = 3 };

/// Maps the exception in flight to an exit code and prints its message.
int report_exception(std::ostream& err);

/// Noiseless prediction for the configured truth and electrodes, or noisy
/// data from seed base_seed. Writes data.json.
DataFile cmd_forward(const RunConfig& config, bool noisy, std::ostream& log);

/// Inverts a data file. The penalty weight is `lambda` if given, else the
/// config's, else 0 for noiseless data, else Morozov. Writes inversion.json.
InversionFile cmd_invert(const RunConfig& config, const std::filesystem::path& data_path,
                         std::optional<double> lambda, std::ostream& log);

/// Optimizes the electrodes at the estimate of an inversion file. Writes design.json.
DesignFile cmd_design(const RunConfig& config, const std::filesystem::path& inversion_path, std::ostream& log);

struct McArgs {
    std::string label = "study";
    std::optional<std::filesystem::path> design_path;    ///< electrodes from phi_opt
    std::optional<std::filesystem::path> inversion_path; ///< lambda from the file
    std::optional<double> lambda;
};

/// Writes mc_<label>.csv and mc_<label>.json (and .svg when enabled).
StudyResult cmd_mc(const RunConfig& config, const McArgs& args, std::ostream& log);

struct StageResult {
    std::string label;
    DataFile data;
    InversionFile inversion;
    StudyResult study;
};

struct PipelineResult {
    StageResult initial;
    DesignFile design;
    StageResult optimal;
    nlohmann::json report;
};

/// Two-stage procedure: data and inversion at the configured electrodes,
/// design at that estimate, new data and inversion at the optimized
/// electrodes, then a Monte Carlo study for each design and a comparison
/// report. Artifacts already written stay in place when a stage fails.
PipelineResult cmd_pipeline(const RunConfig& config, std::ostream& log);

/// Prints the forward map against the quadrature oracle for the configured
/// truth with shrinking area.
OracleDiagnostic cmd_diag_oracle(const RunConfig& config, std::ostream& log);

} // namespace eit::app
