#pragma once

// Model parameters, electrode layouts and measurement vectors for a small
// elliptical inclusion in the unit disk.

#include <array>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>

namespace eit {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Largest admissible distance of the inclusion center from the origin.
inline constexpr double kInteriorRadius = 0.9;
/// Smallest admissible angular separation between two electrodes (radians).
inline constexpr double kMinElectrodeGap = 0.05;

inline constexpr std::size_t kNumElectrodes = 4;
inline constexpr std::size_t kNumMeasurements = 6;
inline constexpr std::size_t kNumParams = 5;

/// Position of each model parameter in flat 5-vectors (columns of the
/// Jacobian, rows of CSV output, regularization weights).
enum ParamIndex : std::size_t { kCenterX = 0, kCenterY = 1, kArea = 2, kAspect = 3, kOrientation = 4 };

/// Short names used in files and reports, in ParamIndex order.
inline constexpr std::array<const char*, kNumParams> kParamNames = {"b1", "b2", "A", "r", "xi"};

/// Electrode pairs of the six measurements, in output order.
inline constexpr std::array<std::pair<std::size_t, std::size_t>, kNumMeasurements> kPairs = {{
    {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3},
}};

using ParamVector = std::array<double, kNumParams>;

/// Ellipse t = (b1, b2, A, r, xi). The major axis a1 points along
/// (cos xi, sin xi); a1 = sqrt(A r / pi), a2 = sqrt(A / (pi r)).
struct EllipseParams {
    double center_x = 0.0;
    double center_y = 0.0;
    double area = 0.0;
    double aspect_ratio = 1.0;
    double orientation = 0.0;

    [[nodiscard]] double semi_axis_major() const;
    [[nodiscard]] double semi_axis_minor() const;
    [[nodiscard]] double center_radius() const;

    [[nodiscard]] ParamVector to_array() const;
    [[nodiscard]] static EllipseParams from_array(const ParamVector& v);

    friend bool operator==(const EllipseParams&, const EllipseParams&) = default;
};

/// Ground truth of the reference numerical study.
[[nodiscard]] EllipseParams reference_ellipse();

/// True when A > 0, r > 0, the center lies within kInteriorRadius and the
/// ellipse lies strictly inside the unit disk.
[[nodiscard]] bool is_admissible(const EllipseParams& t) noexcept;

/// Throws DomainError naming the first violated invariant.
void validate(const EllipseParams& t);

/// (r, xi) -> (1/r, xi + pi/2); the forward map is invariant under it.
[[nodiscard]] EllipseParams swap_axes(const EllipseParams& t);

/// Canonical representative: r >= 1 and xi in [0, pi).
[[nodiscard]] EllipseParams canonicalize(const EllipseParams& t);

/// x reduced to [0, period).
[[nodiscard]] double wrap(double x, double period);

/// Distance between two angles modulo `period`, in [0, period/2].
[[nodiscard]] double periodic_distance(double a, double b, double period);

/// Four point electrodes on the unit circle.
struct ElectrodeConfig {
    std::array<double, kNumElectrodes> phi{};

    /// Equally spaced electrodes (0, pi/2, pi, 3pi/2).
    [[nodiscard]] static ElectrodeConfig uniform();

    /// Angles sorted increasingly.
    [[nodiscard]] ElectrodeConfig sorted() const;

    /// All electrodes rotated by `angle`, wrapped back into [0, 2pi).
    [[nodiscard]] ElectrodeConfig rotated(double angle) const;

    /// Smallest circular separation between any two electrodes.
    [[nodiscard]] double min_gap() const;

    friend bool operator==(const ElectrodeConfig&, const ElectrodeConfig&) = default;
};

/// Throws DomainError if an angle is outside [0, 2pi) or two electrodes are
/// closer than kMinElectrodeGap.
void validate(const ElectrodeConfig& cfg);

/// Six voltage differences in kPairs order, with the relative noise level
/// of the data (0 for noiseless predictions).
struct MeasurementVector {
    std::array<double, kNumMeasurements> values{};
    double epsilon = 0.0;

    [[nodiscard]] double norm() const;

    friend bool operator==(const MeasurementVector&, const MeasurementVector&) = default;
};

[[nodiscard]] std::string to_string(const EllipseParams& t);

} // namespace eit
