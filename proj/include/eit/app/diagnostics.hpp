#pragma once

// Comparison of the expanded forward map against the quadrature oracle for
// a family of shrinking inclusions of fixed shape.

#include "eit/geometry.hpp"
#include "eit/oracle.hpp"

#include <array>
#include <vector>

namespace eit::app {

struct OracleRow {
    double scale = 0.0;
    double area = 0.0;
    std::array<double, kNumMeasurements> forward{};
    std::array<double, kNumMeasurements> oracle{};
    /// A P(b1, b2), the term both expressions share.
    std::array<double, kNumMeasurements> first_order{};
    /// Euclidean norm of forward - oracle.
    double difference = 0.0;
    /// Projection of the expanded second-order term onto the quadrature
    /// one, (q_f . q_o) / (q_o . q_o) with q = value - A P.
    double quadratic_ratio = 0.0;
};

struct OracleDiagnostic {
    std::vector<OracleRow> rows;
    /// Least-squares slope of log(difference) against log(scale).
    double slope = 0.0;
};

/// Area of t multiplied by each scale in turn, everything else held fixed.
[[nodiscard]] OracleDiagnostic oracle_diagnostic(const EllipseParams& t, const ElectrodeConfig& cfg,
                                                 const std::vector<double>& scales,
                                                 const oracle::QuadratureSpec& spec = {});

} // namespace eit::app
