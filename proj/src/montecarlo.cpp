#include "eit/montecarlo.hpp"

#include "eit/errors.hpp"
#include "eit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace eit {
namespace {

// xi shifted by a multiple of pi into [center - pi/2, center + pi/2).
double shift_near(double xi, double center) {
    return center + wrap(xi - center + 0.5 * kPi, kPi) - 0.5 * kPi;
}

double quantile(const std::vector<double>& sorted, double p) {
    const double pos = p * (sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
}

EllipseParams median_reference(const std::vector<TrialRecord>& records) {
    std::array<std::vector<double>, kNumParams> columns;
    for (const TrialRecord& rec : records) {
        if (!rec.converged) continue;
        const ParamVector v = rec.t_hat.to_array();
        for (std::size_t k = 0; k < kNumParams; ++k) columns[k].push_back(v[k]);
    }
    ParamVector med{};
    for (std::size_t k = 0; k < kNumParams; ++k)
        if (!columns[k].empty()) med[k] = describe(columns[k]).median;
    return EllipseParams::from_array(med);
}

} // namespace

EllipseParams nearest_representative(const EllipseParams& t, const EllipseParams& reference) {
    EllipseParams best = t;
    double best_dist = std::numeric_limits<double>::infinity();
    for (EllipseParams cand : {t, swap_axes(t)}) {
        cand.orientation = shift_near(cand.orientation, reference.orientation);
        const double dr = std::log(cand.aspect_ratio / reference.aspect_ratio);
        const double dxi = cand.orientation - reference.orientation;
        const double dist = dr * dr + dxi * dxi;
        if (dist < best_dist) {
            best_dist = dist;
            best = cand;
        }
    }
    return best;
}

ParamVector equivalence_distance(const EllipseParams& t_a, const EllipseParams& t_b) {
    const EllipseParams rep = nearest_representative(t_a, t_b);
    return {std::abs(rep.center_x - t_b.center_x), std::abs(rep.center_y - t_b.center_y),
            std::abs(rep.area - t_b.area), std::abs(rep.aspect_ratio - t_b.aspect_ratio),
            periodic_distance(rep.orientation, t_b.orientation, kPi)};
}

ParamStats describe(std::vector<double> values) {
    ParamStats s;
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    s.min = values.front();
    s.max = values.back();
    s.q1 = quantile(values, 0.25);
    s.median = quantile(values, 0.5);
    s.q3 = quantile(values, 0.75);
    return s;
}

TrialSummary summarize(const std::vector<TrialRecord>& records, const std::optional<EllipseParams>& truth,
                       const std::string& label) {
    TrialSummary summary;
    summary.label = label;
    summary.n_trials = static_cast<int>(records.size());
    summary.reference_is_truth = truth.has_value();
    summary.reference = truth ? *truth : median_reference(records);

    std::array<std::vector<double>, kNumParams> columns;
    double residual_sum = 0.0;
    for (const TrialRecord& rec : records) {
        if (!rec.converged) continue;
        ++summary.n_converged;
        residual_sum += rec.residual_norm;
        const ParamVector v = nearest_representative(rec.t_hat, summary.reference).to_array();
        for (std::size_t k = 0; k < kNumParams; ++k) columns[k].push_back(v[k]);
    }
    for (std::size_t k = 0; k < kNumParams; ++k) summary.stats[k] = describe(columns[k]);
    summary.mean_residual = summary.n_converged > 0 ? residual_sum / summary.n_converged : 0.0;
    summary.degraded = summary.n_converged < 0.9 * summary.n_trials;
    return summary;
}

StudyResult run_study(const EllipseParams& t0, const ElectrodeConfig& cfg, double lambda, double epsilon,
                      int n_trials, std::uint64_t base_seed, const RegularizationSpec& reg, const std::string& label,
                      const StudyOptions& options) {
    if (n_trials < 1) throw ConfigError("a study needs at least one trial");
    validate(t0);
    validate(cfg);

    StudyResult out;
    out.records.resize(n_trials);
    const std::size_t workers = options.workers > 0 ? options.workers : worker_count();
    parallel_for(
        static_cast<std::size_t>(n_trials),
        [&](std::size_t i) {
            const std::uint64_t seed = base_seed + i;
            const MeasurementVector g = synthesize_data(t0, cfg, epsilon, seed);
            const InversionResult res = minimize(g, cfg, lambda, reg, options.minimize);
            out.records[i] = {static_cast<int>(i), seed, res.t_star, res.residual_norm, res.converged};
        },
        workers);
    out.summary = summarize(out.records, t0, label);
    return out;
}

} // namespace eit
