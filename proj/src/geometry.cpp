#include "eit/geometry.hpp"

#include "eit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eit {

double EllipseParams::semi_axis_major() const { return std::sqrt(area * aspect_ratio / kPi); }

double EllipseParams::semi_axis_minor() const { return std::sqrt(area / (kPi * aspect_ratio)); }

double EllipseParams::center_radius() const { return std::hypot(center_x, center_y); }

ParamVector EllipseParams::to_array() const {
    return {center_x, center_y, area, aspect_ratio, orientation};
}

EllipseParams EllipseParams::from_array(const ParamVector& v) {
    return {v[kCenterX], v[kCenterY], v[kArea], v[kAspect], v[kOrientation]};
}

EllipseParams reference_ellipse() { return {0.452, -0.165, 0.025, 2.323, 0.864}; }

namespace {

const char* first_violation(const EllipseParams& t) noexcept {
    for (double v : t.to_array())
        if (!std::isfinite(v)) return "parameters must be finite";
    if (!(t.area > 0.0)) return "area A must be positive";
    if (!(t.aspect_ratio > 0.0)) return "aspect ratio r must be positive";
    if (t.center_x * t.center_x + t.center_y * t.center_y > kInteriorRadius * kInteriorRadius)
        return "center must satisfy b1^2 + b2^2 <= 0.9^2";
    const double reach = t.center_radius() + std::max(t.semi_axis_major(), t.semi_axis_minor());
    if (!(reach < 1.0)) return "ellipse must lie strictly inside the unit disk";
    return nullptr;
}

} // namespace

bool is_admissible(const EllipseParams& t) noexcept { return first_violation(t) == nullptr; }

void validate(const EllipseParams& t) {
    if (const char* msg = first_violation(t)) throw DomainError(std::string(msg) + " (" + to_string(t) + ")");
}

EllipseParams swap_axes(const EllipseParams& t) {
    EllipseParams s = t;
    s.aspect_ratio = 1.0 / t.aspect_ratio;
    s.orientation = t.orientation + 0.5 * kPi;
    return s;
}

EllipseParams canonicalize(const EllipseParams& t) {
    EllipseParams c = t.aspect_ratio < 1.0 ? swap_axes(t) : t;
    c.orientation = wrap(c.orientation, kPi);
    return c;
}

double wrap(double x, double period) {
    double y = std::fmod(x, period);
    if (y < 0.0) y += period;
    // fmod of a tiny negative number can round up to exactly `period`
    return y >= period ? 0.0 : y;
}

double periodic_distance(double a, double b, double period) {
    const double d = wrap(a - b, period);
    return std::min(d, period - d);
}

ElectrodeConfig ElectrodeConfig::uniform() { return {{0.0, 0.5 * kPi, kPi, 1.5 * kPi}}; }

ElectrodeConfig ElectrodeConfig::sorted() const {
    ElectrodeConfig s = *this;
    std::sort(s.phi.begin(), s.phi.end());
    return s;
}

ElectrodeConfig ElectrodeConfig::rotated(double angle) const {
    ElectrodeConfig r = *this;
    for (double& p : r.phi) p = wrap(p + angle, kTwoPi);
    return r;
}

double ElectrodeConfig::min_gap() const {
    double gap = kTwoPi;
    for (std::size_t i = 0; i < kNumElectrodes; ++i)
        for (std::size_t j = i + 1; j < kNumElectrodes; ++j)
            gap = std::min(gap, periodic_distance(phi[i], phi[j], kTwoPi));
    return gap;
}

void validate(const ElectrodeConfig& cfg) {
    for (double p : cfg.phi) {
        if (!std::isfinite(p) || p < 0.0 || p >= kTwoPi) {
            std::ostringstream os;
            os << "electrode angle " << p << " outside [0, 2pi)";
            throw DomainError(os.str());
        }
    }
    if (const double gap = cfg.min_gap(); gap < kMinElectrodeGap) {
        std::ostringstream os;
        os << "electrode separation " << gap << " rad is below delta_min = " << kMinElectrodeGap << " rad";
        throw DomainError(os.str());
    }
}

double MeasurementVector::norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
}

std::string to_string(const EllipseParams& t) {
    std::ostringstream os;
    os.precision(6);
    os << "b1=" << t.center_x << " b2=" << t.center_y << " A=" << t.area << " r=" << t.aspect_ratio
       << " xi=" << t.orientation;
    return os.str();
}

} // namespace eit
