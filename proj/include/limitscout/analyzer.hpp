#pragma once
// Verdict engine: probe path limits over ray / power-curve / spiral
// families, compare them, and try to refute the consensus value with a
// violation sequence.
//
// NO_LIMIT is backed by a witness (two disagreeing paths, one path without
// a limit, or a violation sequence). LIMIT_EXISTS only means no refutation
// was found at the configured scale; the underlying criteria quantify over
// every sequence, which no finite probe exhausts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "limitscout/construction.hpp"
#include "limitscout/expr.hpp"
#include "limitscout/format.hpp"
#include "limitscout/geometry.hpp"
#include "limitscout/paths.hpp"

namespace limitscout {

inline constexpr double kDivergenceBound = 1e12;
inline constexpr double kLeftDomainFraction = 0.25;

struct SpiralSeed {
    double phi0 = 0.0;  // last angle; leading angles (n >= 3) sit at pi/2
    double amplitude = 1.0;
    double q = 1.0;
    friend bool operator==(const SpiralSeed&, const SpiralSeed&) = default;
};

inline std::vector<PowerCurve> default_power_grid() {
    static constexpr double cs[] = {1.0, -1.0, 2.0, -2.0, 0.5, -0.5};
    static constexpr int mn[][2] = {{1, 1}, {2, 1}, {3, 1}, {1, 2}, {3, 2}, {1, 3}};
    std::vector<PowerCurve> out;
    for (const auto& e : mn)
        for (double c : cs)
            for (int branch : {1, -1}) {
                if (branch < 0 && e[1] % 2 == 0) continue;
                out.push_back({c, e[0], e[1], branch});
            }
    return out;
}

inline std::vector<SpiralSeed> default_spiral_grid() {
    std::vector<SpiralSeed> out;
    for (double q : {0.5, 1.0})
        for (double phi : {0.0, kPi / 2.0, kPi, 3.0 * kPi / 2.0}) out.push_back({phi, 1.0, q});
    return out;
}

struct AnalyzerConfig {
    double r1 = 1.0;
    double rho = 0.5;
    int steps = 60;
    double tol = 1e-6;
    int k = 8;
    int ray_count = 64;
    std::vector<PowerCurve> power_curve_grid = default_power_grid();
    std::vector<SpiralSeed> spiral_grid = default_spiral_grid();
    std::optional<double> epsilon_refute;  // defaults to 10 * tol
    std::size_t budget = 100000;
    std::uint64_t seed = 42;
    bool refute = true;
    std::size_t refute_count = 30;

    double refute_epsilon() const { return epsilon_refute.value_or(10.0 * tol); }
    double disagreement() const { return 10.0 * tol; }

    void validate() const {
        if (!(r1 > 0.0) || !std::isfinite(r1)) throw UsageError("config: r1 must be positive");
        if (!(rho > 0.0 && rho < 1.0)) throw UsageError("config: rho must lie in (0, 1)");
        if (!(tol > 0.0)) throw UsageError("config: tol must be positive");
        if (ray_count < 4) throw UsageError("config: ray_count must be >= 4");
        if (k < 1) throw UsageError("config: k must be positive");
        if (steps + 1 < k) throw UsageError("config: steps + 1 must be >= k");
        if (!(refute_epsilon() > 0.0)) throw UsageError("config: epsilon_refute must be positive");
        if (budget == 0) throw UsageError("config: budget must be positive");
        if (refute_count == 0) throw UsageError("config: refute_count must be positive");
    }
};

enum class ProbeStatus { Converged, Diverged, Oscillating, LeftDomain };

inline const char* to_string(ProbeStatus s) {
    switch (s) {
    case ProbeStatus::Converged: return "converged";
    case ProbeStatus::Diverged: return "diverged";
    case ProbeStatus::Oscillating: return "oscillating";
    case ProbeStatus::LeftDomain: return "left_domain";
    }
    return "?";
}

struct ProbeResult {
    PathSpec path;
    ProbeStatus status = ProbeStatus::Oscillating;
    double limit = 0.0;    // Converged only
    double left_at = 0.0;  // LeftDomain only: r of the first undefined tail value
    std::vector<double> tail_r;
    std::vector<EvalResult> tail;

    bool converged() const { return status == ProbeStatus::Converged; }
};

enum class VerdictKind { LimitExists, NoLimit, Inconclusive };

inline const char* to_string(VerdictKind k) {
    switch (k) {
    case VerdictKind::LimitExists: return "LIMIT_EXISTS";
    case VerdictKind::NoLimit: return "NO_LIMIT";
    case VerdictKind::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

struct Verdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    std::optional<double> limit;
    std::vector<ProbeResult> witnesses;
    std::optional<BisectionWitness> refutation;
    std::optional<double> refuted_value;  // the L the refutation was run against
    std::vector<ProbeResult> probes;
    AnalyzerConfig config;
    std::string note;
};

using RefuteResult = std::variant<BisectionWitness, NotFound>;

/// Evaluates f along the path at r_j = r1 * rho^j, j = 0..steps (SampleSeq
/// paths are evaluated at their points in order) and classifies the tail.
inline ProbeResult path_limit(const Expression& f, const Center& center, const PathSpec& path,
                              const AnalyzerConfig& config) {
    if (static_cast<std::size_t>(f.arity()) != center.dim())
        throw DimensionError("path_limit: expression arity does not match center dimension");
    ProbeResult res;
    res.path = path;

    std::vector<double> rs;
    std::vector<EvalResult> values;
    if (const auto* seq = std::get_if<SampleSeq>(&path)) {
        for (const Vec& p : seq->points) {
            if (p.size() != center.dim()) throw DimensionError("path_limit: sequence point dimension mismatch");
            rs.push_back(distance(p, center.coords()));
            values.push_back(f.evaluate(p));
        }
    } else {
        double r = config.r1;
        for (int j = 0; j <= config.steps; ++j) {
            const auto p = point_at(path, center, r);
            rs.push_back(r);
            values.push_back(p ? f.evaluate(*p) : std::nullopt);
            r *= config.rho;
        }
    }

    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(config.k), values.size());
    res.tail_r.assign(rs.end() - static_cast<std::ptrdiff_t>(k), rs.end());
    res.tail.assign(values.end() - static_cast<std::ptrdiff_t>(k), values.end());

    std::size_t undefined = 0;
    std::vector<double> defined;
    for (std::size_t i = 0; i < res.tail.size(); ++i) {
        if (res.tail[i]) {
            defined.push_back(*res.tail[i]);
        } else {
            if (undefined == 0) res.left_at = res.tail_r[i];
            ++undefined;
        }
    }
    if (k == 0 || defined.empty() ||
        static_cast<double>(undefined) > kLeftDomainFraction * static_cast<double>(res.tail.size())) {
        res.status = ProbeStatus::LeftDomain;
        if (k == 0) res.left_at = config.r1;
        return res;
    }
    res.left_at = 0.0;
    for (double v : defined) {
        if (std::fabs(v) > kDivergenceBound) {
            res.status = ProbeStatus::Diverged;
            return res;
        }
    }
    const auto [mn, mx] = std::minmax_element(defined.begin(), defined.end());
    // offset from the first value keeps constant tails exact
    double shift = 0.0;
    for (double v : defined) shift += v - defined.front();
    const double mean = defined.front() + shift / static_cast<double>(defined.size());
    bool close = *mx - *mn <= config.tol;
    for (double v : defined) close = close && std::fabs(v - mean) <= config.tol;
    if (close) {
        res.status = ProbeStatus::Converged;
        res.limit = mean;
    } else {
        res.status = ProbeStatus::Oscillating;
    }
    return res;
}

/// Tries to build a violation sequence against L and bisect it into a
/// direction-convergent witness. In n >= 3 the samples are first filtered
/// so their leading hyperspherical angles settle (Bolzano-Weierstrass), and
/// the bisection runs on the azimuthal angle.
inline RefuteResult refute(const Expression& f, const Center& center, double target, const AnalyzerConfig& config) {
    ViolationSearch q;
    q.target = target;
    q.epsilon = config.refute_epsilon();
    q.r1 = config.r1;
    q.count = config.refute_count;
    q.budget = config.budget;
    q.seed = config.seed;
    ViolationResult vs = violation_sequence(f, center, q);
    if (const auto* nf = std::get_if<NotFound>(&vs)) return *nf;
    std::vector<PolarSample> samples = std::get<std::vector<PolarSample>>(std::move(vs));

    std::vector<std::size_t> prefilter;
    if (center.dim() > 2) {
        std::vector<Vec> leading;
        for (const PolarSample& s : samples)
            leading.emplace_back(s.offset.angles.begin(), s.offset.angles.end() - 1);
        std::set<std::size_t> coords;
        for (std::size_t c = 0; c + 2 < center.dim(); ++c) coords.insert(c);
        const std::size_t target_len = std::min(samples.size(), std::max<std::size_t>(4, samples.size() / 4));
        const BwSelection sel = bw_subsequence(leading, coords, target_len);
        std::vector<PolarSample> kept;
        for (std::size_t idx : sel.indices) {
            kept.push_back(samples[idx - 1]);
            prefilter.push_back(samples[idx - 1].index);
        }
        samples = std::move(kept);
    }
    const int depth = static_cast<int>(std::min<std::size_t>(kMaxBisectionDepth, samples.size()));
    BisectionWitness w = bisect_angles(samples, depth);
    w.prefilter = std::move(prefilter);
    return w;
}

/// The probe family for a center: rays, then power curves (2-D only), then spirals.
inline std::vector<PathSpec> probe_family(std::size_t dim, const AnalyzerConfig& config) {
    std::vector<PathSpec> paths;
    for (Vec& angles : direction_grid(dim, static_cast<std::size_t>(config.ray_count)))
        paths.emplace_back(Ray{std::move(angles)});
    if (dim == 2)
        for (const PowerCurve& p : config.power_curve_grid) paths.emplace_back(p);
    for (const SpiralSeed& s : config.spiral_grid) {
        Vec phi0(dim - 1, kPi / 2.0);
        phi0.back() = s.phi0;
        paths.emplace_back(Spiral{std::move(phi0), s.amplitude, s.q});
    }
    return paths;
}

inline Verdict analyze(const Expression& f, const Center& center, const AnalyzerConfig& config) {
    config.validate();
    if (static_cast<std::size_t>(f.arity()) != center.dim())
        throw DimensionError("analyze: expression arity does not match center dimension");

    Verdict v;
    v.config = config;
    for (const PathSpec& p : probe_family(center.dim(), config)) v.probes.push_back(path_limit(f, center, p, config));

    // Widest disagreement among converged probes; first occurrence wins ties.
    std::optional<std::size_t> lo_i, hi_i;
    std::vector<double> limits;
    for (std::size_t i = 0; i < v.probes.size(); ++i) {
        const ProbeResult& p = v.probes[i];
        if (!p.converged()) continue;
        limits.push_back(p.limit);
        if (!lo_i || p.limit < v.probes[*lo_i].limit) lo_i = i;
        if (!hi_i || p.limit > v.probes[*hi_i].limit) hi_i = i;
    }
    if (lo_i && v.probes[*hi_i].limit - v.probes[*lo_i].limit > config.disagreement()) {
        v.kind = VerdictKind::NoLimit;
        const std::size_t a = std::min(*lo_i, *hi_i);
        const std::size_t b = std::max(*lo_i, *hi_i);
        v.witnesses = {v.probes[a], v.probes[b]};
        v.note = "path limits disagree by more than " + format_double(config.disagreement());
        return v;
    }
    for (const ProbeResult& p : v.probes) {
        if (p.status == ProbeStatus::Diverged || p.status == ProbeStatus::Oscillating) {
            v.kind = VerdictKind::NoLimit;
            v.witnesses = {p};
            v.note = std::string("path limit does not exist (") + to_string(p.status) + ")";
            return v;
        }
    }
    if (limits.empty()) {
        v.kind = VerdictKind::Inconclusive;
        v.note = "no probe converged";
        return v;
    }

    std::sort(limits.begin(), limits.end());
    const std::size_t m = limits.size() / 2;
    const double candidate = limits.size() % 2 == 1 ? limits[m] : 0.5 * (limits[m - 1] + limits[m]);

    if (config.refute) {
        RefuteResult r = refute(f, center, candidate, config);
        if (auto* w = std::get_if<BisectionWitness>(&r)) {
            v.kind = VerdictKind::NoLimit;
            v.refutation = std::move(*w);
            v.refuted_value = candidate;
            v.note = "violation sequence against L = " + format_double(candidate) +
                     " at eps = " + format_double(config.refute_epsilon());
            return v;
        }
        v.note = "heuristic: no refutation found at eps = " + format_double(config.refute_epsilon()) +
                 ", budget = " + std::to_string(config.budget) + " per shell (stopped at shell " +
                 std::to_string(std::get<NotFound>(r).shell) + ")";
    } else {
        v.note = "heuristic: converged path limits agree; refutation disabled";
    }
    v.kind = VerdictKind::LimitExists;
    v.limit = candidate;
    return v;
}

}  // namespace limitscout
