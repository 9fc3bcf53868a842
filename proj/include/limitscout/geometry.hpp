#pragma once
// Polar / hyperspherical offsets around a center point.
//
// Angle conventions for dimension n:
//   n = 2:  one angle phi in [0, 2pi)
//   n >= 3: phi_1..phi_{n-2} in [0, pi], phi_{n-1} in [0, 2pi)
// and the map is
//   x_1 = r cos phi_1
//   x_k = r sin phi_1 ... sin phi_{k-1} cos phi_k
//   x_n = r sin phi_1 ... sin phi_{n-1}
// which for n = 2 is exactly (r cos phi, r sin phi).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "limitscout/errors.hpp"

namespace limitscout {

using Vec = std::vector<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Offsets below this radius collapse to the canonical zero offset.
inline constexpr double kZeroRadius = 1e-300;

/// The point P0 a limit is taken at.
class Center {
public:
    explicit Center(Vec coords) : coords_(std::move(coords)) {
        if (coords_.size() < 2) throw UsageError("center must have dimension >= 2");
        for (double c : coords_)
            if (!std::isfinite(c)) throw UsageError("center coordinates must be finite");
    }

    std::size_t dim() const noexcept { return coords_.size(); }
    const Vec& coords() const noexcept { return coords_; }
    double operator[](std::size_t i) const { return coords_[i]; }

private:
    Vec coords_;
};

struct PolarOffset {
    double r = 0.0;
    Vec angles;  // length n - 1

    friend bool operator==(const PolarOffset&, const PolarOffset&) = default;
};

/// Maps an angle into [0, 2pi).
inline double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

inline double norm(std::span<const double> v) {
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::fabs(x));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double sum = 0.0;
    for (double x : v) {
        const double s = x / scale;
        sum += s * s;
    }
    return scale * std::sqrt(sum);
}

inline double distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw DimensionError("distance: dimensions " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    Vec d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return norm(d);
}

/// Circular distance between two angles, in [0, pi].
inline double angle_distance(double a, double b) {
    const double d = std::fabs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, kTwoPi - d);
}

/// cos and sin, exact at the double nearest each multiple of pi/2 so that
/// axis rays stay on their axis (std::sin(kPi) is 1.2e-16, not 0).
inline void axis_exact_sincos(double a, double& c, double& s) {
    static constexpr double quarter = kPi / 2.0;
    static constexpr double axes[][3] = {{0.0, 1.0, 0.0},          {quarter, 0.0, 1.0},       {kPi, -1.0, 0.0},
                                         {3.0 * quarter, 0.0, -1.0}, {kTwoPi, 1.0, 0.0},        {-quarter, 0.0, -1.0},
                                         {-kPi, -1.0, 0.0}};
    for (const auto& ax : axes) {
        if (a == ax[0]) {
            c = ax[1];
            s = ax[2];
            return;
        }
    }
    c = std::cos(a);
    s = std::sin(a);
}

/// Cartesian offset (without the center) of a polar offset; angles need not be canonical.
inline Vec polar_direction(double r, std::span<const double> angles) {
    const std::size_t n = angles.size() + 1;
    Vec x(n);
    double prod = r;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double c = 0.0;
        double s = 0.0;
        axis_exact_sincos(angles[k], c, s);
        x[k] = prod * c;
        prod *= s;
    }
    x[n - 1] = prod;
    return x;
}

inline Vec from_polar(const Center& center, const PolarOffset& offset) {
    if (offset.angles.size() + 1 != center.dim())
        throw DimensionError("from_polar: " + std::to_string(offset.angles.size()) + " angles for a " +
                             std::to_string(center.dim()) + "-d center");
    Vec x = polar_direction(offset.r, offset.angles);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += center[i];
    return x;
}

inline PolarOffset to_polar(const Center& center, std::span<const double> point) {
    const std::size_t n = center.dim();
    if (point.size() != n)
        throw DimensionError("to_polar: point has dimension " + std::to_string(point.size()) + ", center " +
                             std::to_string(n));
    Vec d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = point[i] - center[i];

    PolarOffset out;
    out.r = norm(d);
    out.angles.assign(n - 1, 0.0);
    if (!(out.r >= kZeroRadius)) {
        out.r = 0.0;
        return out;
    }
    // Polar angles from the tail norms; the last angle is an azimuth.
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const double tail = norm(std::span<const double>(d).subspan(k + 1));
        out.angles[k] = std::atan2(tail, d[k]);
    }
    out.angles[n - 2] = wrap_angle(std::atan2(d[n - 1], d[n - 2]));
    return out;
}

/// Deterministic direction grid: `per` = ceil(count^(1/(n-1))) values per angle,
/// leading angles at cell midpoints of [0, pi], the last angle on 2pi*j/per.
/// For n = 2 this is exactly `count` equally spaced angles starting at 0.
inline std::vector<Vec> direction_grid(std::size_t dim, std::size_t count) {
    if (dim < 2) throw UsageError("direction_grid: dimension must be >= 2");
    if (count == 0) return {};
    const std::size_t m = dim - 1;
    std::size_t per = 1;
    if (m == 1) {
        per = count;
    } else {
        per = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(count), 1.0 / static_cast<double>(m)) - 1e-9));
        per = std::max<std::size_t>(per, 1);
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < m; ++i) total *= per;

    std::vector<Vec> out;
    out.reserve(total);
    std::vector<std::size_t> idx(m, 0);
    for (std::size_t t = 0; t < total; ++t) {
        Vec angles(m);
        for (std::size_t k = 0; k + 1 < m; ++k)
            angles[k] = (static_cast<double>(idx[k]) + 0.5) * kPi / static_cast<double>(per);
        angles[m - 1] = kTwoPi * static_cast<double>(idx[m - 1]) / static_cast<double>(per);
        out.push_back(std::move(angles));
        // last angle varies fastest
        for (std::size_t k = m; k-- > 0;) {
            if (++idx[k] < per) break;
            idx[k] = 0;
        }
    }
    return out;
}

}  // namespace limitscout
