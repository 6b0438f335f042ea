#pragma once

// JSON and CSV forms of everything the CLI writes, with loaders for each.
// Doubles are written in shortest round-trip form so a reload is exact.

#include "eit/design.hpp"
#include "eit/geometry.hpp"
#include "eit/inversion.hpp"
#include "eit/montecarlo.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace eit::app {

using nlohmann::json;

json to_json(const EllipseParams& t);
EllipseParams ellipse_from_json(const json& j);

json to_json(const ElectrodeConfig& cfg);
ElectrodeConfig electrodes_from_json(const json& j);

/// Measurement file: values in pair order plus the electrodes they belong to.
struct DataFile {
    MeasurementVector data;
    ElectrodeConfig electrodes;
    std::optional<EllipseParams> ground_truth;
    std::optional<std::uint64_t> seed;
};
json to_json(const DataFile& f);
DataFile data_file_from_json(const json& j);

/// Inversion file. `method` is "morozov" or "fixed".
struct InversionFile {
    InversionResult result;
    ElectrodeConfig electrodes;
    std::string method = "fixed";
    double epsilon = 0.0;
    double target_residual = 0.0;
    std::vector<BisectionStep> trace;
};
json to_json(const InversionFile& f);
InversionFile inversion_file_from_json(const json& j);

/// Design file, with the criterion at the uniform layout for comparison.
struct DesignFile {
    DesignResult result;
    EllipseParams t_star;
    double lambda = 0.0;
    int budget = 0;
    double uniform_value = 0.0;
    double e_value = 0.0;
};
json to_json(const DesignFile& f);
DesignFile design_file_from_json(const json& j);

json to_json(const ParamStats& s);
ParamStats param_stats_from_json(const json& j);
json to_json(const TrialSummary& s);
TrialSummary trial_summary_from_json(const json& j);

/// Columns trial,seed,b1,b2,A,r,xi,residual,converged.
std::string trials_csv(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> parse_trials_csv(const std::string& text);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

} // namespace eit::app
