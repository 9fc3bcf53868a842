#pragma once
// Refutation machinery for a claimed limit L:
//
//  * violation_sequence: points with |f(P) - L| >= eps on shrinking shells,
//    each shell strictly inside half the previous point's radius;
//  * bisect_angles: nested dyadic angle intervals I_k (|I_k| = pi / 2^(k-1))
//    with an increasing-index pick from each, so the picked directions
//    converge to phi0;
//  * bw_subsequence: finite Bolzano-Weierstrass extraction by repeated range
//    bisection over selected coordinates.
//
// The sequences in the proofs are infinite; everything here works on finite
// prefixes and reports shorter witnesses instead of inventing samples.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "limitscout/errors.hpp"
#include "limitscout/expr.hpp"
#include "limitscout/geometry.hpp"

namespace limitscout {

inline constexpr int kMaxBisectionDepth = 40;
inline constexpr std::size_t kAngleStrata = 64;

struct PolarSample {
    std::size_t index = 0;  // 1-based position in the violation sequence
    Vec point;
    PolarOffset offset;
    double value = 0.0;

    /// Azimuthal angle (the only angle in 2-D).
    double angle() const { return offset.angles.back(); }
};

/// [lo * pi / 2^e, (lo + 1) * pi / 2^e] with e = depth - 1.
struct AngleInterval {
    std::int64_t lo = 0;
    int exponent = 0;
    int depth = 1;

    double lower() const { return std::ldexp(static_cast<double>(lo) * kPi, -exponent); }
    double upper() const { return std::ldexp(static_cast<double>(lo + 1) * kPi, -exponent); }
    double width() const { return std::ldexp(kPi, -exponent); }
    double midpoint() const { return std::ldexp((static_cast<double>(lo) + 0.5) * kPi, -exponent); }
    bool contains(double angle) const { return angle >= lower() && angle <= upper(); }

    AngleInterval lower_half() const { return {2 * lo, exponent + 1, depth + 1}; }
    AngleInterval upper_half() const { return {2 * lo + 1, exponent + 1, depth + 1}; }

    /// Exact nesting test on the integer representation.
    bool within(const AngleInterval& outer) const {
        if (exponent < outer.exponent) return false;
        return (lo >> (exponent - outer.exponent)) == outer.lo;
    }

    friend bool operator==(const AngleInterval&, const AngleInterval&) = default;
};

struct BisectionWitness {
    std::vector<AngleInterval> intervals;
    std::vector<PolarSample> picked;
    double phi0 = 0.0;
    /// Sample indices kept by the Bolzano-Weierstrass pre-filter on the
    /// leading hyperspherical angles (empty in 2-D).
    std::vector<std::size_t> prefilter;
};

struct NotFound {
    std::size_t shell = 0;
    friend bool operator==(const NotFound&, const NotFound&) = default;
};

struct ViolationSearch {
    double target = 0.0;  // L
    double epsilon = 1e-5;
    double r1 = 1.0;
    std::size_t count = 10;
    std::size_t budget = 100000;  // evaluations per shell
    std::uint64_t seed = 0;
};

using ViolationResult = std::variant<std::vector<PolarSample>, NotFound>;

namespace detail {

inline double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::mt19937_64 shell_rng(std::uint64_t seed, std::size_t shell) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(shell), 0x5eed1u};
    return std::mt19937_64(seq);
}

// Direction with the last angle confined to stratum s; leading angles
// follow the uniform distribution on the sphere.
inline Vec stratified_angles(std::size_t dim, std::size_t stratum, std::mt19937_64& rng) {
    Vec angles(dim - 1, 0.0);
    const double width = kTwoPi / static_cast<double>(kAngleStrata);
    angles.back() = (static_cast<double>(stratum) + unit_draw(rng)) * width;
    if (dim > 2) {
        Vec g(dim);
        std::normal_distribution<double> normal;
        for (double& x : g) x = normal(rng);
        const Center origin(Vec(dim, 0.0));
        const PolarOffset o = to_polar(origin, g);
        for (std::size_t k = 0; k + 2 < dim; ++k) angles[k] = o.angles[k];
    }
    return angles;
}

// Draw near the previous shell's violation direction. Even draws nudge each
// angle by a log-uniform amount in [1e-30, 1]; odd draws rescale each
// angle's deviation from the nearest multiple of pi/2 by a log-uniform
// factor in [1e-4, 1], which tracks violation sets that pinch toward an
// axis like a cusp (angle ~ r^p).
inline Vec focused_angles(const Vec& around, std::mt19937_64& rng, bool rescale) {
    Vec angles = around;
    for (double& a : angles) {
        if (rescale) {
            const double axis = std::nearbyint(a / (kPi / 2.0)) * (kPi / 2.0);
            a = axis + (a - axis) * std::pow(10.0, -4.0 * unit_draw(rng));
        } else {
            const double mag = std::pow(10.0, -30.0 * unit_draw(rng));
            a += (unit_draw(rng) < 0.5 ? -mag : mag);
        }
    }
    return angles;
}

}  // namespace detail

/// Searches shell after shell for points that violate |f - L| < eps.
/// Shell 1 draws r in (r1/2, r1]; shell k >= 2 draws r in (b/2, b) with
/// b = r_{k-1} / 2, so r_k <= r1 / 2^(k-1) and r_k / r_{k+1} > 2.
inline ViolationResult violation_sequence(const Expression& f, const Center& center, const ViolationSearch& q) {
    const std::size_t dim = center.dim();
    if (static_cast<std::size_t>(f.arity()) != dim)
        throw DimensionError("violation_sequence: expression arity " + std::to_string(f.arity()) +
                             " does not match center dimension " + std::to_string(dim));
    if (!(q.epsilon > 0.0)) throw UsageError("violation_sequence: epsilon must be positive");
    if (!(q.r1 > 0.0) || !std::isfinite(q.r1)) throw UsageError("violation_sequence: r1 must be positive");
    if (q.count == 0) throw UsageError("violation_sequence: count must be positive");
    if (q.budget == 0) throw UsageError("violation_sequence: budget must be positive");

    const std::vector<Vec> grid = direction_grid(dim, kAngleStrata);
    std::vector<PolarSample> out;
    double bound = q.r1;

    for (std::size_t shell = 1; shell <= q.count; ++shell) {
        const bool closed = shell == 1;
        std::mt19937_64 rng = detail::shell_rng(q.seed, shell);
        std::size_t used = 0;
        std::optional<PolarSample> hit;

        auto attempt = [&](double r, const Vec& angles) {
            ++used;
            Vec point = from_polar(center, PolarOffset{r, angles});
            PolarOffset off = to_polar(center, point);
            if (!(off.r > 0.0)) return false;
            if (closed ? off.r > bound : off.r >= bound) return false;
            const EvalResult v = f.evaluate(point);
            if (!v || std::fabs(*v - q.target) < q.epsilon) return false;
            hit = PolarSample{shell, std::move(point), std::move(off), *v};
            return true;
        };
        auto annulus_radius = [&] { return bound * (0.5 + 0.5 * detail::unit_draw(rng)); };

        for (const Vec& angles : grid) {
            if (used >= q.budget || attempt(0.75 * bound, angles)) break;
        }
        const Vec* previous = out.empty() ? nullptr : &out.back().offset.angles;
        while (!hit && used < q.budget) {
            for (std::size_t s = 0; s < kAngleStrata && !hit && used < q.budget; ++s) {
                const double r = annulus_radius();
                attempt(r, detail::stratified_angles(dim, s, rng));
                if (!hit && previous && used < q.budget) {
                    const double rf = annulus_radius();
                    attempt(rf, detail::focused_angles(*previous, rng, s % 2 == 1));
                }
            }
        }
        if (!hit) return NotFound{shell};
        bound = hit->offset.r * 0.5;
        out.push_back(std::move(*hit));
    }
    return out;
}

/// Nested dyadic bisection of [0, 2pi] on the samples' azimuthal angles.
/// At every level the half holding more eligible samples (index above the
/// last pick) is kept, ties going to the lower half, and the smallest
/// eligible index inside it is picked. Stops early once neither half has an
/// eligible sample.
inline BisectionWitness bisect_angles(const std::vector<PolarSample>& samples, int depth) {
    if (samples.empty()) throw UsageError("bisect_angles: no samples");
    if (depth < 1 || depth > kMaxBisectionDepth)
        throw UsageError("bisect_angles: depth must be in [1, " + std::to_string(kMaxBisectionDepth) + "]");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (samples[i].index <= samples[i - 1].index) throw UsageError("bisect_angles: samples must be sorted by index");

    BisectionWitness w;
    std::size_t last_index = 0;
    std::optional<AngleInterval> current;

    for (int level = 1; level <= depth; ++level) {
        const AngleInterval lower = current ? current->lower_half() : AngleInterval{0, 0, 1};
        const AngleInterval upper = current ? current->upper_half() : AngleInterval{1, 0, 1};
        std::size_t n_lower = 0;
        std::size_t n_upper = 0;
        for (const PolarSample& s : samples) {
            if (s.index <= last_index) continue;
            if (lower.contains(s.angle())) ++n_lower;
            if (upper.contains(s.angle())) ++n_upper;
        }
        if (n_lower == 0 && n_upper == 0) break;
        const AngleInterval kept = n_upper > n_lower ? upper : lower;
        const auto pick = std::find_if(samples.begin(), samples.end(), [&](const PolarSample& s) {
            return s.index > last_index && kept.contains(s.angle());
        });
        w.intervals.push_back(kept);
        w.picked.push_back(*pick);
        last_index = pick->index;
        current = kept;
    }
    w.phi0 = w.intervals.back().midpoint();
    return w;
}

struct BwSelection {
    std::vector<std::size_t> indices;  // 1-based, strictly increasing
    std::vector<int> passes;           // bisections applied, per tracked coordinate
    std::vector<double> initial_range; // max - min over the whole list, per tracked coordinate
};

inline constexpr double kMaxBwRange = 1e12;

/// Finite Bolzano-Weierstrass: bisects the value range of each tracked
/// coordinate in turn (round-robin), keeping the more populated half (ties
/// to the lower half [a, m]; the upper half is (m, b]) as long as at least
/// `target_length` survivors remain. Returns the first `target_length`
/// survivors. `coordinates` are 0-based.
inline BwSelection bw_subsequence(const std::vector<Vec>& values, const std::set<std::size_t>& coordinates,
                                  std::size_t target_length) {
    if (target_length == 0) throw UsageError("bw_subsequence: target_length must be positive");
    if (values.size() < target_length) throw UsageError("bw_subsequence: fewer values than target_length");
    const std::vector<std::size_t> coords(coordinates.begin(), coordinates.end());

    BwSelection sel;
    std::vector<double> lo(coords.size()), hi(coords.size());
    for (std::size_t c = 0; c < coords.size(); ++c) {
        double mn = std::numeric_limits<double>::infinity();
        double mx = -mn;
        for (const Vec& v : values) {
            if (coords[c] >= v.size()) throw DimensionError("bw_subsequence: coordinate out of range");
            const double x = v[coords[c]];
            if (!std::isfinite(x)) throw UsageError("bw_subsequence: non-finite coordinate value");
            mn = std::min(mn, x);
            mx = std::max(mx, x);
        }
        if (mx - mn > kMaxBwRange) throw UsageError("bw_subsequence: coordinate is unbounded (range > 1e12)");
        lo[c] = mn;
        hi[c] = mx;
        sel.initial_range.push_back(mx - mn);
    }
    sel.passes.assign(coords.size(), 0);

    std::vector<std::size_t> alive(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) alive[i] = i;
    std::vector<bool> done(coords.size(), false);

    auto all_done = [&] { return std::all_of(done.begin(), done.end(), [](bool d) { return d; }); };
    while (!coords.empty() && !all_done()) {
        for (std::size_t c = 0; c < coords.size(); ++c) {
            if (done[c]) continue;
            const double mid = lo[c] + 0.5 * (hi[c] - lo[c]);
            if (!(mid > lo[c] && mid < hi[c])) {  // zero width or out of resolution
                done[c] = true;
                continue;
            }
            std::vector<std::size_t> low_half, high_half;
            for (std::size_t i : alive) (values[i][coords[c]] <= mid ? low_half : high_half).push_back(i);
            const bool take_high = high_half.size() > low_half.size();
            std::vector<std::size_t>& kept = take_high ? high_half : low_half;
            if (kept.size() < target_length) {
                done[c] = true;
                continue;
            }
            if (take_high) lo[c] = mid;
            else hi[c] = mid;
            alive = std::move(kept);
            ++sel.passes[c];
        }
    }
    const std::size_t n = std::min(target_length, alive.size());
    for (std::size_t i = 0; i < n; ++i) sel.indices.push_back(alive[i] + 1);
    return sel;
}

}  // namespace limitscout
