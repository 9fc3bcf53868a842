#pragma once
// JSON and CSV encodings shared by the CLI and report files.
//
//   PathSpec     {"type": "ray"|"power"|"spiral"|"polyline"|"sequence", ...}
//   Verdict      {"verdict", "limit", "witnesses", "probes", "config", ...}
//   samples CSV  index,r,phi...,value,x1..xn   (header row, LF endings)
//   intervals    {"phi0", "intervals": [{"lo", "width_exponent", "depth"}]}
//
// Doubles are written in shortest round-trip form so witnesses can be
// re-verified bit for bit.

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "limitscout/analyzer.hpp"
#include "limitscout/construction.hpp"
#include "limitscout/errors.hpp"
#include "limitscout/format.hpp"
#include "limitscout/paths.hpp"

namespace limitscout {

using nlohmann::json;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- paths ----------------------------------------------------------------

inline json path_to_json(const PathSpec& path) {
    return std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Ray>) {
                return {{"type", "ray"}, {"phi0", p.phi0}};
            } else if constexpr (std::is_same_v<T, PowerCurve>) {
                return {{"type", "power"}, {"c", p.c}, {"m", p.m}, {"n", p.n}, {"branch", p.branch}};
            } else if constexpr (std::is_same_v<T, Spiral>) {
                return {{"type", "spiral"}, {"phi0", p.phi0}, {"amplitude", p.amplitude}, {"q", p.q}};
            } else if constexpr (std::is_same_v<T, Polyline>) {
                return {{"type", "polyline"}, {"vertices", p.vertices}};
            } else {
                return {{"type", "sequence"}, {"points", p.points}};
            }
        },
        path);
}

inline Vec angles_field(const json& j, const char* key) {
    const json& v = j.at(key);
    if (v.is_number()) return {v.get<double>()};
    return v.get<Vec>();
}

inline PathSpec path_from_json(const json& j) {
    try {
        const std::string type = j.at("type").get<std::string>();
        if (type == "ray") return Ray{angles_field(j, "phi0")};
        if (type == "power")
            return PowerCurve{j.at("c").get<double>(), j.at("m").get<int>(), j.at("n").get<int>(),
                              j.value("branch", 1)};
        if (type == "spiral")
            return Spiral{angles_field(j, "phi0"), j.value("amplitude", 1.0), j.value("q", 1.0)};
        if (type == "polyline") return Polyline{j.at("vertices").get<std::vector<Vec>>()};
        if (type == "sequence") return SampleSeq{j.at("points").get<std::vector<Vec>>()};
        throw FormatError("unknown path type '" + type + "'");
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed path spec: ") + e.what());
    }
}

/// Short single-token label, e.g. "ray(0.785398)" or "power(c=1;m=2;n=1;+)".
inline std::string path_label(const PathSpec& path) {
    auto join = [](const Vec& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_double(v[i]);
        return s;
    };
    return std::visit(
        [&](const auto& p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Ray>) {
                return "ray(" + join(p.phi0) + ")";
            } else if constexpr (std::is_same_v<T, PowerCurve>) {
                return "power(c=" + format_double(p.c) + ";m=" + std::to_string(p.m) + ";n=" + std::to_string(p.n) +
                       ";" + (p.branch > 0 ? "+" : "-") + ")";
            } else if constexpr (std::is_same_v<T, Spiral>) {
                return "spiral(" + join(p.phi0) + ";a=" + format_double(p.amplitude) + ";q=" + format_double(p.q) + ")";
            } else if constexpr (std::is_same_v<T, Polyline>) {
                return "polyline(" + std::to_string(p.vertices.size()) + " vertices)";
            } else {
                return "sequence(" + std::to_string(p.points.size()) + " points)";
            }
        },
        path);
}

// ---- construction artifacts ------------------------------------------------

inline json interval_to_json(const AngleInterval& iv) {
    return {{"lo", iv.lo}, {"width_exponent", iv.exponent}, {"depth", iv.depth}};
}

inline AngleInterval interval_from_json(const json& j) {
    return {j.at("lo").get<std::int64_t>(), j.at("width_exponent").get<int>(), j.at("depth").get<int>()};
}

inline json sample_to_json(const PolarSample& s) {
    return {{"index", s.index}, {"r", s.offset.r}, {"angles", s.offset.angles}, {"point", s.point}, {"value", s.value}};
}

inline PolarSample sample_from_json(const json& j) {
    PolarSample s;
    s.index = j.at("index").get<std::size_t>();
    s.offset.r = j.at("r").get<double>();
    s.offset.angles = j.at("angles").get<Vec>();
    s.point = j.at("point").get<Vec>();
    s.value = j.at("value").get<double>();
    return s;
}

inline json witness_to_json(const BisectionWitness& w) {
    json intervals = json::array();
    for (const AngleInterval& iv : w.intervals) intervals.push_back(interval_to_json(iv));
    json picked = json::array();
    for (const PolarSample& s : w.picked) picked.push_back(sample_to_json(s));
    return {{"phi0", w.phi0}, {"intervals", intervals}, {"picked", picked}, {"prefilter", w.prefilter}};
}

inline BisectionWitness witness_from_json(const json& j) {
    try {
        BisectionWitness w;
        w.phi0 = j.at("phi0").get<double>();
        for (const json& iv : j.at("intervals")) w.intervals.push_back(interval_from_json(iv));
        if (j.contains("picked"))
            for (const json& s : j.at("picked")) w.picked.push_back(sample_from_json(s));
        if (j.contains("prefilter")) w.prefilter = j.at("prefilter").get<std::vector<std::size_t>>();
        return w;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed witness: ") + e.what());
    }
}

inline json certificate_to_json(const DescentCertificate& c) {
    json tris = json::array();
    for (const DescentTriangle& t : c.triangles)
        tris.push_back({{"A", t.angle_at_center}, {"side_ratio", t.side_ratio}, {"cosC", t.cos_far}});
    return {{"ok", c.ok}, {"triangles", tris}};
}

inline void write_samples_csv(std::ostream& os, const std::vector<PolarSample>& samples) {
    if (samples.empty()) {
        os << "index,r,phi,value\n";
        return;
    }
    const std::size_t n_angles = samples.front().offset.angles.size();
    const std::size_t dim = samples.front().point.size();
    os << "index,r";
    if (n_angles == 1) os << ",phi";
    else
        for (std::size_t i = 1; i <= n_angles; ++i) os << ",phi" << i;
    os << ",value";
    for (std::size_t i = 1; i <= dim; ++i) os << ",x" << i;
    os << '\n';
    for (const PolarSample& s : samples) {
        os << s.index << ',' << format_double(s.offset.r);
        for (double a : s.offset.angles) os << ',' << format_double(a);
        os << ',' << format_double(s.value);
        for (double x : s.point) os << ',' << format_double(x);
        os << '\n';
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

inline std::vector<PolarSample> read_samples_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("samples CSV: missing header");
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "index" || header[1] != "r")
        throw FormatError("samples CSV: unexpected header '" + line + "'");
    std::size_t value_col = 0;
    for (std::size_t i = 2; i < header.size(); ++i)
        if (header[i] == "value") value_col = i;
    if (value_col < 3) throw FormatError("samples CSV: no value column after the angles");
    const std::size_t n_angles = value_col - 2;
    const std::size_t dim = header.size() - value_col - 1;

    std::vector<PolarSample> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw FormatError("samples CSV line " + std::to_string(lineno) + ": expected " +
                              std::to_string(header.size()) + " fields");
        try {
            PolarSample s;
            s.index = static_cast<std::size_t>(std::stoull(cells[0]));
            s.offset.r = parse_double(cells[1]);
            for (std::size_t i = 0; i < n_angles; ++i) s.offset.angles.push_back(parse_double(cells[2 + i]));
            s.value = parse_double(cells[value_col]);
            for (std::size_t i = 0; i < dim; ++i) s.point.push_back(parse_double(cells[value_col + 1 + i]));
            out.push_back(std::move(s));
        } catch (const std::exception& e) {
            throw FormatError("samples CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

// ---- analyzer ------------------------------------------------------------

inline json probe_to_json(const ProbeResult& p) {
    json tail = json::array();
    for (std::size_t i = 0; i < p.tail.size(); ++i)
        tail.push_back({{"r", p.tail_r[i]}, {"value", p.tail[i] ? json(*p.tail[i]) : json(nullptr)}});
    return {{"path", path_to_json(p.path)},
            {"status", to_string(p.status)},
            {"limit", p.converged() ? json(p.limit) : json(nullptr)},
            {"left_at", p.status == ProbeStatus::LeftDomain ? json(p.left_at) : json(nullptr)},
            {"tail", tail}};
}

inline ProbeStatus probe_status_from_string(const std::string& s) {
    for (ProbeStatus st : {ProbeStatus::Converged, ProbeStatus::Diverged, ProbeStatus::Oscillating,
                           ProbeStatus::LeftDomain})
        if (s == to_string(st)) return st;
    throw FormatError("unknown probe status '" + s + "'");
}

inline ProbeResult probe_from_json(const json& j) {
    ProbeResult p;
    p.path = path_from_json(j.at("path"));
    p.status = probe_status_from_string(j.at("status").get<std::string>());
    if (!j.at("limit").is_null()) p.limit = j.at("limit").get<double>();
    if (!j.at("left_at").is_null()) p.left_at = j.at("left_at").get<double>();
    for (const json& t : j.at("tail")) {
        p.tail_r.push_back(t.at("r").get<double>());
        p.tail.push_back(t.at("value").is_null() ? EvalResult{} : EvalResult{t.at("value").get<double>()});
    }
    return p;
}

inline json config_to_json(const AnalyzerConfig& c) {
    json power = json::array();
    for (const PowerCurve& p : c.power_curve_grid) power.push_back({{"c", p.c}, {"m", p.m}, {"n", p.n}, {"branch", p.branch}});
    json spiral = json::array();
    for (const SpiralSeed& s : c.spiral_grid) spiral.push_back({{"phi0", s.phi0}, {"amplitude", s.amplitude}, {"q", s.q}});
    return {{"r1", c.r1},
            {"rho", c.rho},
            {"steps", c.steps},
            {"tol", c.tol},
            {"k", c.k},
            {"ray_count", c.ray_count},
            {"power_curve_grid", power},
            {"spiral_grid", spiral},
            {"epsilon_refute", c.refute_epsilon()},
            {"budget", c.budget},
            {"seed", c.seed},
            {"refute", c.refute},
            {"refute_count", c.refute_count}};
}

inline AnalyzerConfig config_from_json(const json& j) {
    AnalyzerConfig c;
    c.r1 = j.at("r1").get<double>();
    c.rho = j.at("rho").get<double>();
    c.steps = j.at("steps").get<int>();
    c.tol = j.at("tol").get<double>();
    c.k = j.at("k").get<int>();
    c.ray_count = j.at("ray_count").get<int>();
    c.power_curve_grid.clear();
    for (const json& p : j.at("power_curve_grid"))
        c.power_curve_grid.push_back({p.at("c").get<double>(), p.at("m").get<int>(), p.at("n").get<int>(),
                                      p.at("branch").get<int>()});
    c.spiral_grid.clear();
    for (const json& s : j.at("spiral_grid"))
        c.spiral_grid.push_back({s.at("phi0").get<double>(), s.at("amplitude").get<double>(), s.at("q").get<double>()});
    c.epsilon_refute = j.at("epsilon_refute").get<double>();
    c.budget = j.at("budget").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.refute = j.at("refute").get<bool>();
    c.refute_count = j.at("refute_count").get<std::size_t>();
    return c;
}

inline json verdict_to_json(const Verdict& v) {
    json witnesses = json::array();
    for (const ProbeResult& p : v.witnesses) witnesses.push_back(probe_to_json(p));
    json probes = json::array();
    for (const ProbeResult& p : v.probes) probes.push_back(probe_to_json(p));
    return {{"verdict", to_string(v.kind)},
            {"limit", v.limit ? json(*v.limit) : json(nullptr)},
            {"note", v.note},
            {"witnesses", witnesses},
            {"refutation", v.refutation ? witness_to_json(*v.refutation) : json(nullptr)},
            {"refuted_value", v.refuted_value ? json(*v.refuted_value) : json(nullptr)},
            {"probes", probes},
            {"config", config_to_json(v.config)}};
}

inline Verdict verdict_from_json(const json& j) {
    try {
        Verdict v;
        const std::string kind = j.at("verdict").get<std::string>();
        if (kind == "LIMIT_EXISTS") v.kind = VerdictKind::LimitExists;
        else if (kind == "NO_LIMIT") v.kind = VerdictKind::NoLimit;
        else if (kind == "INCONCLUSIVE") v.kind = VerdictKind::Inconclusive;
        else throw FormatError("unknown verdict '" + kind + "'");
        if (!j.at("limit").is_null()) v.limit = j.at("limit").get<double>();
        v.note = j.value("note", std::string());
        for (const json& p : j.at("witnesses")) v.witnesses.push_back(probe_from_json(p));
        if (j.contains("refutation") && !j.at("refutation").is_null())
            v.refutation = witness_from_json(j.at("refutation"));
        if (j.contains("refuted_value") && !j.at("refuted_value").is_null())
            v.refuted_value = j.at("refuted_value").get<double>();
        for (const json& p : j.at("probes")) v.probes.push_back(probe_from_json(p));
        v.config = config_from_json(j.at("config"));
        return v;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed verdict: ") + e.what());
    }
}

inline void write_probes_csv(std::ostream& os, const std::vector<ProbeResult>& probes) {
    os << "probe,path,status,limit,left_at\n";
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const ProbeResult& p = probes[i];
        os << i + 1 << ',' << path_label(p.path) << ',' << to_string(p.status) << ','
           << (p.converged() ? format_double(p.limit) : std::string()) << ','
           << (p.status == ProbeStatus::LeftDomain ? format_double(p.left_at) : std::string()) << '\n';
    }
}

}  // namespace limitscout
