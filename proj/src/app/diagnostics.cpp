#include "eit/app/diagnostics.hpp"

#include "eit/errors.hpp"
#include "eit/forward_map.hpp"

#include <cmath>

namespace eit::app {

OracleDiagnostic oracle_diagnostic(const EllipseParams& t, const ElectrodeConfig& cfg, const std::vector<double>& scales,
                                   const oracle::QuadratureSpec& spec) {
    if (scales.size() < 2) throw ConfigError("the oracle diagnostic needs at least two scales");
    OracleDiagnostic out;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (double s : scales) {
        if (!(s > 0.0)) throw ConfigError("scales must be positive");
        OracleRow row;
        row.scale = s;
        EllipseParams ts = t;
        ts.area = t.area * s;
        row.area = ts.area;
        const MeasurementVector f = forward_map(ts, cfg);
        double diff2 = 0.0, qq = 0.0, qo = 0.0;
        for (std::size_t m = 0; m < kNumMeasurements; ++m) {
            const auto [a, b] = kPairs[m];
            row.forward[m] = f.values[m];
            row.oracle[m] = oracle::quadrature_voltage(ts, cfg.phi[a], cfg.phi[b], spec);
            row.first_order[m] =
                ts.area * kernel_and_derivatives(ts.center_x, ts.center_y, cfg.phi[a], cfg.phi[b]).value;
            const double d = row.forward[m] - row.oracle[m];
            diff2 += d * d;
            const double q_f = row.forward[m] - row.first_order[m];
            const double q_o = row.oracle[m] - row.first_order[m];
            qq += q_f * q_o;
            qo += q_o * q_o;
        }
        row.difference = std::sqrt(diff2);
        row.quadratic_ratio = qo > 0.0 ? qq / qo : 0.0;
        const double x = std::log(s), y = std::log(row.difference);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        out.rows.push_back(row);
    }
    const double n = static_cast<double>(scales.size());
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return out;
}

} // namespace eit::app
