#pragma once

// Repeated noisy inversions under a fixed design and penalty weight.

#include "eit/geometry.hpp"
#include "eit/inversion.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eit {

struct TrialRecord {
    int trial_index = 0;
    std::uint64_t seed = 0;
    EllipseParams t_hat;  ///< canonical form
    double residual_norm = 0.0;
    bool converged = false;
};

struct ParamStats {
    double mean = 0.0;
    double stddev = 0.0;  ///< sample (n - 1) standard deviation
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct TrialSummary {
    std::string label;
    int n_trials = 0;
    int n_converged = 0;
    /// Fewer than 90% of the trials converged.
    bool degraded = false;
    /// Statistics use, per trial, the equivalent (r, xi) representative
    /// nearest this reference: the ground truth when known, else the sample
    /// median.
    EllipseParams reference;
    bool reference_is_truth = false;
    std::array<ParamStats, kNumParams> stats{};
    double mean_residual = 0.0;
};

struct StudyResult {
    std::vector<TrialRecord> records;
    TrialSummary summary;
};

/// Member of the equivalence class of t, {(r, xi + k pi), (1/r, xi + pi/2 + k pi)},
/// nearest `reference` in (log r, xi); xi ends up within pi/2 of reference.
[[nodiscard]] EllipseParams nearest_representative(const EllipseParams& t, const EllipseParams& reference);

/// Componentwise |t_a - t_b| after replacing t_a by its representative nearest
/// t_b; the xi entry is a distance modulo pi.
[[nodiscard]] ParamVector equivalence_distance(const EllipseParams& t_a, const EllipseParams& t_b);

/// Order statistics, mean and sample standard deviation. Quartiles use linear
/// interpolation between order statistics.
[[nodiscard]] ParamStats describe(std::vector<double> values);

/// Summary over the converged records; `truth` selects study mode.
[[nodiscard]] TrialSummary summarize(const std::vector<TrialRecord>& records, const std::optional<EllipseParams>& truth,
                                     const std::string& label);

struct StudyOptions {
    MinimizeOptions minimize;
    std::size_t workers = 0;  ///< 0 uses worker_count()
};

/// Trial i draws data with seed base_seed + i and inverts it at the fixed
/// lambda. Records come back ordered by trial index.
[[nodiscard]] StudyResult run_study(const EllipseParams& t0, const ElectrodeConfig& cfg, double lambda, double epsilon,
                                    int n_trials, std::uint64_t base_seed, const RegularizationSpec& reg = {},
                                    const std::string& label = "study", const StudyOptions& options = {});

} // namespace eit
