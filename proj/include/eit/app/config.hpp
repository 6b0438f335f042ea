#pragma once

// Run configuration for the command-line pipeline. Read from a JSON file;
// every key is optional and command-line flags override the file.

#include "eit/design.hpp"
#include "eit/geometry.hpp"
#include "eit/inversion.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace eit::app {

struct RunConfig {
    EllipseParams ground_truth = reference_ellipse();
    /// First-stage electrodes.
    ElectrodeConfig electrodes = ElectrodeConfig::uniform();
    double epsilon = 0.01;
    RegularizationSpec reg;

    /// Data for the first-stage design use base_seed, the re-measurement at
    /// the optimized design base_seed + 1, and Monte Carlo trial i of either
    /// study base_seed + kTrialSeedOffset + i.
    std::uint64_t base_seed = 7;
    std::uint64_t design_seed = 7;

    int max_iterations = 500;
    int design_evaluations = 4000;
    int trials = 100;

    /// Fixed penalty weight; unset means Morozov (or 0 when epsilon is 0).
    std::optional<double> lambda;

    SearchStrategy design_strategy = SearchStrategy::MultistartPattern;
    Criterion design_criterion = Criterion::DOptimal;

    std::filesystem::path output_dir = "out";
    bool emit_svg = false;
};

inline constexpr std::uint64_t kTrialSeedOffset = 1000;

/// Throws ConfigError naming the first violated invariant.
void validate(const RunConfig& config);

/// Parses and validates; unknown keys are rejected.
[[nodiscard]] RunConfig config_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json to_json(const RunConfig& config);

/// Throws ConfigError when the file is missing or malformed.
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

[[nodiscard]] MinimizeOptions minimize_options(const RunConfig& config);
[[nodiscard]] DesignOptions design_options(const RunConfig& config);

} // namespace eit::app
