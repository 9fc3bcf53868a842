#pragma once
// Built-in classification corpus. Every expected verdict comes from hand
// substitution along the named paths; the `oracle` string records it.

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "limitscout/analyzer.hpp"
#include "limitscout/expr.hpp"
#include "limitscout/format.hpp"

namespace limitscout {

enum class CorpusConfig { Default, RaysOnly, RaysWithRefutation };

struct CorpusEntry {
    std::string name;
    std::string expr;
    int dim = 2;
    Vec center;
    CorpusConfig config = CorpusConfig::Default;
    VerdictKind expected = VerdictKind::NoLimit;
    std::optional<double> expected_limit;
    double limit_tol = 1e-5;
    std::string oracle;
};

inline std::vector<CorpusEntry> builtin_corpus() {
    return {
        {"xy-ratio", "x*y/(x^2+y^2)", 2, {0, 0}, CorpusConfig::Default, VerdictKind::NoLimit, std::nullopt, 1e-5,
         "x=r cos t, y=r sin t: f = cos t sin t; t=0 gives 0, t=pi/4 gives 1/2"},
        {"xy-ratio/rays", "x*y/(x^2+y^2)", 2, {0, 0}, CorpusConfig::RaysOnly, VerdictKind::NoLimit, std::nullopt, 1e-5,
         "ray limits cos t sin t already differ, no curve needed"},
        {"hyperbolic", "(x^2-y^2)/(x^2+y^2)", 2, {0, 0}, CorpusConfig::Default, VerdictKind::NoLimit, std::nullopt,
         1e-5, "f = cos 2t on the ray at angle t: 1 on the x-axis, -1 on the y-axis"},
        {"parabola", "x^2*y/(x^4+y^2)", 2, {0, 0}, CorpusConfig::Default, VerdictKind::NoLimit, std::nullopt, 1e-5,
         "ray y=kx: f = k x/(x^2+k^2) -> 0; curve y=c x^2: f = c/(1+c^2), 1/2 at c=1"},
        {"parabola/rays", "x^2*y/(x^4+y^2)", 2, {0, 0}, CorpusConfig::RaysOnly, VerdictKind::LimitExists, 0.0, 1e-5,
         "every ray limit is 0 (x-axis: f = 0), so rays alone cannot see the parabola"},
        {"parabola/rays+refute", "x^2*y/(x^4+y^2)", 2, {0, 0}, CorpusConfig::RaysWithRefutation,
         VerdictKind::NoLimit, std::nullopt, 1e-5,
         "rays agree on 0 but |f| = |c|/(1+c^2) >= eps on y = c x^2 at every radius"},
        {"cubic-over-square", "x^2*y/(x^2+y^2)", 2, {0, 0}, CorpusConfig::Default, VerdictKind::LimitExists, 0.0,
         1e-5, "|f| = r cos^2 t |sin t| <= r -> 0"},
        {"sinc-radial", "sin(x^2+y^2)/(x^2+y^2)", 2, {0, 0}, CorpusConfig::Default, VerdictKind::LimitExists, 1.0,
         1e-5, "s = r^2: sin(s)/s = 1 - s^2/6 + ... -> 1"},
        {"xyz-ratio", "x*y*z/(x^2+y^2+z^2)^(3/2)", 3, {0, 0, 0}, CorpusConfig::Default, VerdictKind::NoLimit,
         std::nullopt, 1e-5, "f = u1 u2 u3 for the unit direction u: 0 on the axes, 3^(-3/2) on the diagonal"},
        {"quartic-cusp", "x^4*y/(x^8+y^2)", 2, {0, 0}, CorpusConfig::Default, VerdictKind::NoLimit, std::nullopt,
         1e-5,
         "rays and every grid curve y = c x^(m/n), m/n <= 3, give 0; on y = c x^4 f = c/(1+c^2), so only the "
         "violation sequence sees it"},
        {"constant", "0.7", 2, {3, 4}, CorpusConfig::Default, VerdictKind::LimitExists, 0.7, 1e-12,
         "f is constant"},
    };
}

inline AnalyzerConfig corpus_config(CorpusConfig kind, std::uint64_t seed) {
    AnalyzerConfig c;
    c.seed = seed;
    if (kind != CorpusConfig::Default) {
        c.power_curve_grid.clear();
        c.spiral_grid.clear();
        c.refute = kind == CorpusConfig::RaysWithRefutation;
    }
    return c;
}

struct CorpusOutcome {
    CorpusEntry entry;
    Verdict verdict;
    bool pass = false;
};

inline bool matches_expectation(const CorpusEntry& e, const Verdict& v) {
    if (v.kind != e.expected) return false;
    if (e.expected_limit) return v.limit && std::fabs(*v.limit - *e.expected_limit) <= e.limit_tol;
    return true;
}

inline std::vector<CorpusOutcome> run_corpus(std::uint64_t seed) {
    std::vector<CorpusOutcome> out;
    for (const CorpusEntry& e : builtin_corpus()) {
        const Expression f = parse(e.expr, e.dim);
        Verdict v = analyze(f, Center(e.center), corpus_config(e.config, seed));
        const bool pass = matches_expectation(e, v);
        out.push_back({e, std::move(v), pass});
    }
    return out;
}

inline std::string witness_summary(const Verdict& v) {
    if (v.refutation) {
        return "refutation depth " + std::to_string(v.refutation->intervals.size()) +
               " phi0=" + format_double(v.refutation->phi0);
    }
    std::string s;
    for (const ProbeResult& p : v.witnesses) {
        if (!s.empty()) s += " vs ";
        s += path_kind(p.path);
        s += p.converged() ? "->" + format_double(p.limit) : std::string("->") + to_string(p.status);
    }
    return s.empty() ? "-" : s;
}

inline std::string corpus_table(const std::vector<CorpusOutcome>& outcomes) {
    std::ostringstream os;
    os << "name\tverdict\tlimit\texpected\twitness\tresult\n";
    for (const CorpusOutcome& o : outcomes) {
        os << o.entry.name << '\t' << to_string(o.verdict.kind) << '\t'
           << (o.verdict.limit ? format_double(*o.verdict.limit) : "-") << '\t' << to_string(o.entry.expected)
           << (o.entry.expected_limit ? "(" + format_double(*o.entry.expected_limit) + ")" : "") << '\t'
           << witness_summary(o.verdict) << '\t' << (o.pass ? "PASS" : "FAIL") << '\n';
    }
    return os.str();
}

}  // namespace limitscout
