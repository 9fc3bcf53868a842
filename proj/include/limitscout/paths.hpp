#pragma once
// Approach paths P(r) to a center, parameterized by the distance r to it.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "limitscout/construction.hpp"
#include "limitscout/errors.hpp"
#include "limitscout/geometry.hpp"

namespace limitscout {

class OutOfRangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

struct Ray {
    Vec phi0;  // hyperspherical angles, length n - 1
    friend bool operator==(const Ray&, const Ray&) = default;
};

/// y = c * x^(m/n) near the center, approached from x > 0 (branch = +1) or
/// x < 0 (branch = -1, needs odd n). Two-dimensional only.
struct PowerCurve {
    double c = 1.0;
    int m = 1;
    int n = 1;
    int branch = 1;
    friend bool operator==(const PowerCurve&, const PowerCurve&) = default;
};

/// Last angle phi(r) = phi0 + amplitude * r^q, q > 0.
struct Spiral {
    Vec phi0;
    double amplitude = 1.0;
    double q = 1.0;
    friend bool operator==(const Spiral&, const Spiral&) = default;
};

/// Vertices ordered by strictly decreasing distance to the center.
struct Polyline {
    std::vector<Vec> vertices;
    friend bool operator==(const Polyline&, const Polyline&) = default;
};

/// A bare point sequence, probed in the given order.
struct SampleSeq {
    std::vector<Vec> points;
    friend bool operator==(const SampleSeq&, const SampleSeq&) = default;
};

using PathSpec = std::variant<Ray, PowerCurve, Spiral, Polyline, SampleSeq>;

struct DescentTriangle {
    double angle_at_center = 0.0;  // A
    double side_ratio = 0.0;       // |P0 P_k| / |P0 P_{k+1}|
    double cos_far = 0.0;          // cos C, angle at P_{k+1}
};

struct DescentCertificate {
    std::vector<DescentTriangle> triangles;
    bool ok = false;
};

inline bool triangle_passes(const DescentTriangle& t) {
    return t.angle_at_center <= kPi / 4.0 && t.side_ratio > 2.0 && t.cos_far < 0.0;
}

namespace detail {

inline Vec diff(const Vec& a, const Vec& b) {
    Vec d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return d;
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Angle between two nonzero vectors, accurate at both ends of [0, pi].
inline double vector_angle(const Vec& u, const Vec& v) {
    const double nu = norm(u);
    const double nv = norm(v);
    Vec s(u.size()), d(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        s[i] = u[i] / nu + v[i] / nv;
        d[i] = u[i] / nu - v[i] / nv;
    }
    return 2.0 * std::atan2(norm(d), norm(s));
}

inline void validate(const PowerCurve& p) {
    if (p.c == 0.0 || !std::isfinite(p.c)) throw UsageError("power curve: c must be a nonzero finite number");
    if (p.m < 1 || p.n < 1) throw UsageError("power curve: m and n must be positive");
    if (std::gcd(p.m, p.n) != 1) throw UsageError("power curve: m and n must be coprime");
    if (p.branch != 1 && p.branch != -1) throw UsageError("power curve: branch must be +1 or -1");
    if (p.branch == -1 && p.n % 2 == 0) throw UsageError("power curve: x < 0 branch needs odd n");
}

inline Vec power_curve_offset(const PowerCurve& p, double t) {
    const double q = static_cast<double>(p.m) / static_cast<double>(p.n);
    double y = p.c * std::pow(t, q);
    if (p.branch < 0 && p.m % 2 == 1) y = -y;
    return {p.branch * t, y};
}

// Solves |(x(t), y(t))| = r for t > 0; the distance is increasing in t.
inline double power_curve_parameter(const PowerCurve& p, double r) {
    const double q = static_cast<double>(p.m) / static_cast<double>(p.n);
    const double ac = std::fabs(p.c);
    auto dist = [&](double t) { return std::hypot(t, ac * std::pow(t, q)); };
    double hi = std::min(r, std::pow(r / ac, 1.0 / q));
    double lo = std::min(r / std::sqrt(2.0), std::pow(r / (std::sqrt(2.0) * ac), 1.0 / q));
    if (dist(hi) < r) hi *= 2.0;  // rounding guard
    if (dist(lo) > r) lo *= 0.5;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dist(mid) < r) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline void require_angles(const Vec& angles, const Center& center, const char* what) {
    if (angles.size() + 1 != center.dim())
        throw DimensionError(std::string(what) + ": " + std::to_string(angles.size()) + " angles for a " +
                             std::to_string(center.dim()) + "-d center");
}

}  // namespace detail

/// Law-of-cosines certificate that the distance to the center decreases
/// monotonically along each segment P_k -> P_{k+1}.
inline DescentCertificate check_descent(const Polyline& path, const Center& center) {
    if (path.vertices.size() < 2) throw UsageError("check_descent: polyline needs at least 2 vertices");
    DescentCertificate cert;
    cert.ok = true;
    for (std::size_t k = 0; k + 1 < path.vertices.size(); ++k) {
        const Vec& pk = path.vertices[k];
        const Vec& pn = path.vertices[k + 1];
        if (pk.size() != center.dim() || pn.size() != center.dim())
            throw DimensionError("check_descent: vertex dimension does not match center");
        const Vec u = detail::diff(pk, center.coords());
        const Vec v = detail::diff(pn, center.coords());
        const double c = norm(u);                       // |P0 P_k|
        const double b = norm(v);                       // |P0 P_{k+1}|
        const double a = distance(pk, pn);              // |P_k P_{k+1}|
        if (a == 0.0) throw UsageError("check_descent: coincident vertices at position " + std::to_string(k + 1));
        if (b == 0.0 || c == 0.0) throw UsageError("check_descent: vertex coincides with the center");
        DescentTriangle t;
        t.angle_at_center = detail::vector_angle(u, v);
        t.side_ratio = c / b;
        t.cos_far = (a * a + b * b - c * c) / (2.0 * a * b);
        cert.ok = cert.ok && triangle_passes(t);
        cert.triangles.push_back(t);
    }
    return cert;
}

/// The path point at distance r from the center, or nullopt when r lies
/// outside the stretch the path covers.
inline std::optional<Vec> point_at(const PathSpec& path, const Center& center, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw UsageError("point_at: r must be positive and finite");
    return std::visit(
        [&](const auto& p) -> std::optional<Vec> {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Ray>) {
                detail::require_angles(p.phi0, center, "ray");
                return from_polar(center, PolarOffset{r, p.phi0});
            } else if constexpr (std::is_same_v<T, Spiral>) {
                detail::require_angles(p.phi0, center, "spiral");
                if (!(p.q > 0.0)) throw UsageError("spiral: q must be positive");
                Vec angles = p.phi0;
                angles.back() += p.amplitude * std::pow(r, p.q);
                return from_polar(center, PolarOffset{r, angles});
            } else if constexpr (std::is_same_v<T, PowerCurve>) {
                if (center.dim() != 2) throw DimensionError("power curve paths are two-dimensional");
                detail::validate(p);
                const double t = detail::power_curve_parameter(p, r);
                Vec x = detail::power_curve_offset(p, t);
                if (!std::isfinite(x[0]) || !std::isfinite(x[1])) return std::nullopt;
                x[0] += center[0];
                x[1] += center[1];
                return x;
            } else if constexpr (std::is_same_v<T, Polyline>) {
                if (!check_descent(p, center).ok)
                    throw UsageError("point_at: polyline has no valid descent certificate");
                const auto& vs = p.vertices;
                const double first = distance(vs.front(), center.coords());
                const double last = distance(vs.back(), center.coords());
                if (r > first || r < last) return std::nullopt;
                std::size_t k = 0;
                while (k + 2 < vs.size() && distance(vs[k + 1], center.coords()) > r) ++k;
                // Solve |b + t v| = r from the inner vertex b outward. The
                // obtuse angle there gives b.v > 0, so the root below has no
                // cancellation even when the segment spans many decades.
                const Vec b = detail::diff(vs[k + 1], center.coords());
                const Vec v = detail::diff(vs[k], vs[k + 1]);
                const double nb = norm(b);
                const double A = detail::dot(v, v);
                const double B = detail::dot(b, v);
                const double C = (nb - r) * (nb + r);
                const double disc = std::max(0.0, B * B - A * C);
                double t = -C / (B + std::sqrt(disc));
                if (!std::isfinite(t)) t = 0.0;
                t = std::clamp(t, 0.0, 1.0);
                Vec x(b.size());
                for (std::size_t i = 0; i < x.size(); ++i) x[i] = vs[k + 1][i] + t * v[i];
                return x;
            } else {
                for (const Vec& pt : p.points) {
                    const double d = distance(pt, center.coords());
                    if (std::fabs(d - r) <= 1e-12 * r) return pt;
                }
                return std::nullopt;
            }
        },
        path);
}

/// Polyline through the witness picks from the third onward (where the
/// nested intervals are at most pi/4 wide), ordered by decreasing radius.
inline Polyline polyline_from_witness(const BisectionWitness& witness) {
    if (witness.picked.size() < 4)
        throw UsageError("polyline_from_witness: need at least 4 picked samples, got " +
                         std::to_string(witness.picked.size()));
    std::vector<PolarSample> tail(witness.picked.begin() + 2, witness.picked.end());
    std::stable_sort(tail.begin(), tail.end(),
                     [](const PolarSample& a, const PolarSample& b) { return a.offset.r > b.offset.r; });
    Polyline out;
    for (std::size_t i = 0; i < tail.size(); ++i) {
        if (i > 0 && !(tail[i].offset.r < tail[i - 1].offset.r))
            throw UsageError("polyline_from_witness: picked radii are not strictly decreasing");
        out.vertices.push_back(tail[i].point);
    }
    return out;
}

struct AngleSample {
    double r = 0.0;
    Vec angles;
};

/// phi(r) along the path: the polar angles of point_at(path, r).
inline std::vector<AngleSample> angle_function(const PathSpec& path, const Center& center,
                                               const std::vector<double>& r_schedule) {
    std::vector<AngleSample> out;
    out.reserve(r_schedule.size());
    for (double r : r_schedule) {
        // Rays and spirals carry phi(r) in closed form.
        if (const auto* ray = std::get_if<Ray>(&path)) {
            detail::require_angles(ray->phi0, center, "ray");
            Vec angles = ray->phi0;
            angles.back() = wrap_angle(angles.back());
            out.push_back({r, std::move(angles)});
            continue;
        }
        if (const auto* sp = std::get_if<Spiral>(&path)) {
            detail::require_angles(sp->phi0, center, "spiral");
            Vec angles = sp->phi0;
            angles.back() = wrap_angle(angles.back() + sp->amplitude * std::pow(r, sp->q));
            out.push_back({r, std::move(angles)});
            continue;
        }
        const auto p = point_at(path, center, r);
        if (!p) throw OutOfRangeError("angle_function: path not defined at r = " + std::to_string(r));
        out.push_back({r, to_polar(center, *p).angles});
    }
    return out;
}

inline const char* path_kind(const PathSpec& p) {
    static constexpr const char* names[] = {"ray", "power", "spiral", "polyline", "sequence"};
    return names[p.index()];
}

}  // namespace limitscout
