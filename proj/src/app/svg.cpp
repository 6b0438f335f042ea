#include "eit/app/svg.hpp"

#include "eit/app/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <limits>

namespace eit::app {
namespace {

constexpr double kPanelWidth = 180.0;
constexpr double kPanelHeight = 260.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 40.0;
constexpr double kMarginLeft = 60.0;
constexpr const char* kColors[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52"};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_boxplots(const std::vector<BoxSeries>& series, const std::optional<EllipseParams>& truth) {
    const double width = kMarginLeft + kNumParams * (kPanelWidth + kMarginLeft);
    const double height = kMarginTop + kPanelHeight + kMarginBottom + 20.0 * series.size();
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
                    "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t k = 0; k < kNumParams; ++k) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const BoxSeries& b : series) {
            if (b.summary.n_converged == 0) continue;
            lo = std::min(lo, b.summary.stats[k].min);
            hi = std::max(hi, b.summary.stats[k].max);
        }
        if (truth) {
            lo = std::min(lo, truth->to_array()[k]);
            hi = std::max(hi, truth->to_array()[k]);
        }
        if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
        if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) lo -= 0.5, hi += 0.5;
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;

        const double x0 = kMarginLeft + k * (kPanelWidth + kMarginLeft);
        const auto y = [&](double v) { return kMarginTop + kPanelHeight * (hi - v) / (hi - lo); };

        s += "<g>\n";
        s += "<rect x=\"" + num(x0) + "\" y=\"" + num(kMarginTop) + "\" width=\"" + num(kPanelWidth) + "\" height=\"" +
             num(kPanelHeight) + "\" fill=\"none\" stroke=\"#888\"/>\n";
        s += "<text x=\"" + num(x0 + kPanelWidth / 2) + "\" y=\"" + num(kMarginTop - 10) +
             "\" text-anchor=\"middle\" font-size=\"14\">" + kParamNames[k] + "</text>\n";
        for (int i = 0; i <= 4; ++i) {
            const double v = lo + (hi - lo) * i / 4.0;
            s += "<text x=\"" + num(x0 - 4) + "\" y=\"" + num(y(v) + 4) + "\" text-anchor=\"end\">" + tick(v) +
                 "</text>\n";
        }
        if (truth) {
            const double yt = y(truth->to_array()[k]);
            s += "<line x1=\"" + num(x0) + "\" x2=\"" + num(x0 + kPanelWidth) + "\" y1=\"" + num(yt) + "\" y2=\"" +
                 num(yt) + "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
        }
        const double slot = kPanelWidth / std::max<std::size_t>(series.size(), 1);
        for (std::size_t i = 0; i < series.size(); ++i) {
            const TrialSummary& sum = series[i].summary;
            if (sum.n_converged == 0) continue;
            const ParamStats& st = sum.stats[k];
            const double cx = x0 + slot * (i + 0.5);
            const double bw = 0.5 * slot;
            const char* color = kColors[i % std::size(kColors)];
            s += "<line x1=\"" + num(cx) + "\" x2=\"" + num(cx) + "\" y1=\"" + num(y(st.max)) + "\" y2=\"" +
                 num(y(st.min)) + "\" stroke=\"" + color + "\"/>\n";
            for (double w : {st.min, st.max})
                s += "<line x1=\"" + num(cx - bw / 4) + "\" x2=\"" + num(cx + bw / 4) + "\" y1=\"" + num(y(w)) +
                     "\" y2=\"" + num(y(w)) + "\" stroke=\"" + color + "\"/>\n";
            s += "<rect x=\"" + num(cx - bw / 2) + "\" y=\"" + num(y(st.q3)) + "\" width=\"" + num(bw) +
                 "\" height=\"" + num(std::max(y(st.q1) - y(st.q3), 0.5)) + "\" fill=\"" + color +
                 "\" fill-opacity=\"0.35\" stroke=\"" + color + "\"/>\n";
            s += "<line x1=\"" + num(cx - bw / 2) + "\" x2=\"" + num(cx + bw / 2) + "\" y1=\"" + num(y(st.median)) +
                 "\" y2=\"" + num(y(st.median)) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        }
        s += "</g>\n";
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        const double ly = kMarginTop + kPanelHeight + kMarginBottom / 2 + 20.0 * i;
        s += "<rect x=\"" + num(kMarginLeft) + "\" y=\"" + num(ly - 9) + "\" width=\"12\" height=\"12\" fill=\"" +
             kColors[i % std::size(kColors)] + "\"/>\n";
        s += "<text x=\"" + num(kMarginLeft + 18) + "\" y=\"" + num(ly + 1) + "\">" + escape(series[i].label) + " (" +
             std::to_string(series[i].summary.n_converged) + "/" + std::to_string(series[i].summary.n_trials) +
             " converged)</text>\n";
    }
    s += "</svg>\n";
    return s;
}

std::string boxplots_from_csv(const std::vector<std::pair<std::string, std::string>>& labelled_csv_text,
                              const std::optional<EllipseParams>& truth) {
    std::vector<BoxSeries> series;
    for (const auto& [label, text] : labelled_csv_text)
        series.push_back({label, summarize(parse_trials_csv(text), truth, label)});
    return render_boxplots(series, truth);
}

} // namespace eit::app
