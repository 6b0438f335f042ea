#pragma once

// Box plots of Monte Carlo estimates: one panel per parameter, one box per
// study (quartile box, median line, min/max whiskers), truth as a dashed line.

#include "eit/geometry.hpp"
#include "eit/montecarlo.hpp"

#include <optional>
#include <string>
#include <vector>

namespace eit::app {

struct BoxSeries {
    std::string label;
    TrialSummary summary;
};

[[nodiscard]] std::string render_boxplots(const std::vector<BoxSeries>& series, const std::optional<EllipseParams>& truth);

/// Reads trial CSVs, summarizes them against `truth` and renders the plot.
[[nodiscard]] std::string boxplots_from_csv(const std::vector<std::pair<std::string, std::string>>& labelled_csv_text,
                                            const std::optional<EllipseParams>& truth);

} // namespace eit::app
