// limitscout: command-line front end.
//
//   limitscout analyze       --expr E --at x0,y0[,...] [config overrides]
//   limitscout path-limit    --expr E --at ... --path '{"type":"ray","phi0":[0]}'
//   limitscout construct     --expr E --at ... --L v --epsilon e [--samples f.csv ...]
//   limitscout check-witness --expr E --at ... --L v --epsilon e --samples f.csv
//   limitscout corpus        [--seed N] [--json]
//
// Exit codes: 0 ran to a verdict (any verdict), 1 corpus mismatch or failed
// witness check, 2 usage/parse error, 3 internal error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "limitscout/limitscout.hpp"

namespace ls = limitscout;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct Common {
    std::string expr;
    int dim = 0;
    std::string at;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--expr", c.expr, "expression in x,y,z or x1..x9")->required();
    cmd->add_option("--dim", c.dim, "number of variables (defaults to the length of --at)");
    cmd->add_option("--at", c.at, "comma-separated center point")->required();
    cmd->add_option("--seed", c.seed, "RNG seed (fallback: LIMITSCOUT_SEED, then 42)");
}

ls::Vec parse_point(const std::string& s) {
    ls::Vec out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(ls::parse_double(cell));
    return out;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("LIMITSCOUT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ls::UsageError(std::string("LIMITSCOUT_SEED is not an integer: ") + env);
        }
    }
    return 42;
}

struct Problem {
    ls::Expression f;
    ls::Center center;
};

Problem load_problem(const Common& c) {
    ls::Vec at = parse_point(c.at);
    const int dim = c.dim > 0 ? c.dim : static_cast<int>(at.size());
    if (static_cast<std::size_t>(dim) != at.size())
        throw ls::UsageError("--dim " + std::to_string(dim) + " does not match --at with " + std::to_string(at.size()) +
                             " coordinates");
    return {ls::parse(c.expr, dim), ls::Center(std::move(at))};
}

// "default", "none", or "c:m:n[:+|-];..."
std::vector<ls::PowerCurve> parse_power_grid(const std::string& s) {
    if (s == "default") return ls::default_power_grid();
    if (s == "none" || s.empty()) return {};
    std::vector<ls::PowerCurve> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        std::stringstream is(item);
        std::string c, m, n, b = "+";
        if (!std::getline(is, c, ':') || !std::getline(is, m, ':') || !std::getline(is, n, ':'))
            throw ls::UsageError("--power-grid entry '" + item + "' is not c:m:n[:+|-]");
        std::getline(is, b, ':');
        ls::PowerCurve p{ls::parse_double(c), std::stoi(m), std::stoi(n), b == "-" ? -1 : 1};
        out.push_back(p);
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ls::UsageError("cannot write " + path);
    os << content;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ls::UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void print_verdict_text(const ls::Verdict& v, std::ostream& os) {
    os << "verdict: " << ls::to_string(v.kind) << '\n';
    if (v.limit) os << "limit: " << ls::format_double(*v.limit) << '\n';
    os << "note: " << v.note << '\n';
    for (const ls::ProbeResult& p : v.witnesses) {
        os << "witness: " << ls::path_label(p.path) << " -> ";
        if (p.converged()) os << ls::format_double(p.limit);
        else os << ls::to_string(p.status);
        os << '\n';
    }
    if (v.refutation) {
        os << "refutation: L = " << ls::format_double(*v.refuted_value) << ", eps = "
           << ls::format_double(v.config.refute_epsilon()) << ", depth " << v.refutation->intervals.size()
           << ", phi0 = " << ls::format_double(v.refutation->phi0) << '\n';
        for (const ls::PolarSample& s : v.refutation->picked)
            os << "  P" << s.index << ": r = " << ls::format_double(s.offset.r)
               << ", phi = " << ls::format_double(s.angle()) << ", f = " << ls::format_double(s.value) << '\n';
    }
    std::size_t converged = 0;
    for (const ls::ProbeResult& p : v.probes) converged += p.converged() ? 1 : 0;
    os << "probes: " << v.probes.size() << " (" << converged << " converged)\n";
}

struct AnalyzeOpts {
    Common common;
    std::optional<double> r1, rho, tol, epsilon;
    std::optional<int> steps, k, rays;
    std::optional<std::size_t> budget;
    std::string power_grid = "default";
    std::string spirals = "default";
    bool no_refute = false;
    bool json = false;
    std::string dump_probes;
};

ls::AnalyzerConfig make_config(const AnalyzeOpts& o) {
    ls::AnalyzerConfig c;
    if (o.r1) c.r1 = *o.r1;
    if (o.rho) c.rho = *o.rho;
    if (o.tol) c.tol = *o.tol;
    if (o.epsilon) c.epsilon_refute = *o.epsilon;
    if (o.steps) c.steps = *o.steps;
    if (o.k) c.k = *o.k;
    if (o.rays) c.ray_count = *o.rays;
    if (o.budget) c.budget = *o.budget;
    c.power_curve_grid = parse_power_grid(o.power_grid);
    if (o.spirals == "none") c.spiral_grid.clear();
    else if (o.spirals != "default") throw ls::UsageError("--spirals must be 'default' or 'none'");
    c.refute = !o.no_refute;
    c.seed = resolve_seed(o.common.seed);
    return c;
}

int run_analyze(const AnalyzeOpts& o) {
    const Problem p = load_problem(o.common);
    const ls::Verdict v = ls::analyze(p.f, p.center, make_config(o));
    if (!o.dump_probes.empty()) {
        std::ostringstream os;
        ls::write_probes_csv(os, v.probes);
        write_file(o.dump_probes, os.str());
    }
    if (o.json) std::cout << ls::verdict_to_json(v).dump(2) << '\n';
    else print_verdict_text(v, std::cout);
    return kExitOk;
}

struct PathLimitOpts {
    AnalyzeOpts base;
    std::string path_json;
    std::string path_file;
};

int run_path_limit(const PathLimitOpts& o) {
    const Problem p = load_problem(o.base.common);
    std::string text = o.path_json;
    if (!o.path_file.empty()) text = read_file(o.path_file);
    if (text.empty()) throw ls::UsageError("path-limit needs --path or --path-file");
    ls::json j;
    try {
        j = ls::json::parse(text);
    } catch (const ls::json::exception& e) {
        throw ls::FormatError(std::string("--path is not JSON: ") + e.what());
    }
    // construct writes {"path": {...}, ...}; accept either shape
    const ls::PathSpec path = ls::path_from_json(j.contains("path") ? j.at("path") : j);
    const ls::ProbeResult r = ls::path_limit(p.f, p.center, path, make_config(o.base));
    if (o.base.json) {
        std::cout << ls::probe_to_json(r).dump(2) << '\n';
    } else {
        std::cout << "path: " << ls::path_label(r.path) << '\n' << "status: " << ls::to_string(r.status) << '\n';
        if (r.converged()) std::cout << "limit: " << ls::format_double(r.limit) << '\n';
        if (r.status == ls::ProbeStatus::LeftDomain) std::cout << "left domain at r = " << ls::format_double(r.left_at) << '\n';
        for (std::size_t i = 0; i < r.tail.size(); ++i)
            std::cout << "  r = " << ls::format_double(r.tail_r[i]) << "  f = "
                      << (r.tail[i] ? ls::format_double(*r.tail[i]) : "undefined") << '\n';
    }
    return kExitOk;
}

struct ConstructOpts {
    Common common;
    std::optional<double> target;
    std::optional<double> epsilon;
    std::size_t count = 12;
    double r1 = 1.0;
    std::size_t budget = 100000;
    std::optional<int> depth;
    std::string samples, intervals, polyline;
};

std::vector<double> polyline_schedule(const ls::Polyline& poly, const ls::Center& center) {
    std::vector<double> rs;
    for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
        const double r = ls::distance(poly.vertices[i], center.coords());
        rs.push_back(r);
        if (i + 1 < poly.vertices.size())
            rs.push_back(std::sqrt(r * ls::distance(poly.vertices[i + 1], center.coords())));
    }
    return rs;
}

int run_construct(const ConstructOpts& o) {
    if (!o.target) throw ls::UsageError("construct needs --L");
    if (!o.epsilon) throw ls::UsageError("construct needs --epsilon");
    const Problem p = load_problem(o.common);
    ls::ViolationSearch q;
    q.target = *o.target;
    q.epsilon = *o.epsilon;
    q.r1 = o.r1;
    q.count = o.count;
    q.budget = o.budget;
    q.seed = resolve_seed(o.common.seed);
    const ls::ViolationResult vs = ls::violation_sequence(p.f, p.center, q);
    if (const auto* nf = std::get_if<ls::NotFound>(&vs)) {
        std::cout << "no violation found in shell " << nf->shell << " (eps = " << ls::format_double(q.epsilon)
                  << ", budget = " << q.budget << " per shell): evidence for limit "
                  << ls::format_double(q.target) << '\n';
        return kExitOk;
    }
    const auto& samples = std::get<std::vector<ls::PolarSample>>(vs);
    const int depth = o.depth.value_or(static_cast<int>(std::min<std::size_t>(ls::kMaxBisectionDepth, samples.size())));
    const ls::BisectionWitness w = ls::bisect_angles(samples, depth);

    if (!o.samples.empty()) {
        std::ostringstream os;
        ls::write_samples_csv(os, samples);
        write_file(o.samples, os.str());
    }
    if (!o.intervals.empty()) write_file(o.intervals, ls::witness_to_json(w).dump(2) + "\n");

    std::cout << "samples: " << samples.size() << '\n'
              << "depth: " << w.intervals.size() << '\n'
              << "phi0 = " << ls::format_double(w.phi0) << '\n';
    if (w.picked.size() >= 4) {
        const ls::Polyline poly = ls::polyline_from_witness(w);
        const ls::DescentCertificate cert = ls::check_descent(poly, p.center);
        ls::json out = {{"path", ls::path_to_json(poly)}, {"certificate", ls::certificate_to_json(cert)},
                        {"phi0", w.phi0}};
        if (cert.ok) {
            ls::json af = ls::json::array();
            for (const ls::AngleSample& a : ls::angle_function(poly, p.center, polyline_schedule(poly, p.center)))
                af.push_back({{"r", a.r}, {"phi", a.angles}});
            out["angle_function"] = af;
        }
        if (!o.polyline.empty()) write_file(o.polyline, out.dump(2) + "\n");
        std::cout << "polyline: " << poly.vertices.size() << " vertices, certificate " << (cert.ok ? "ok" : "FAILED")
                  << '\n';
    } else {
        std::cout << "polyline: witness too short (" << w.picked.size() << " picks, need 4)\n";
    }
    return kExitOk;
}

struct CheckOpts {
    Common common;
    std::optional<double> target;
    std::optional<double> epsilon;
    std::string samples, intervals, polyline;
};

int run_check_witness(const CheckOpts& o) {
    const Problem p = load_problem(o.common);
    bool ok = true;
    if (!o.samples.empty()) {
        if (!o.target || !o.epsilon) throw ls::UsageError("--samples check needs --L and --epsilon");
        std::ifstream is(o.samples, std::ios::binary);
        if (!is) throw ls::UsageError("cannot read " + o.samples);
        const auto samples = ls::read_samples_csv(is);
        std::size_t bad = 0;
        for (const ls::PolarSample& s : samples) {
            const ls::EvalResult v = p.f.evaluate(s.point);
            if (!v || *v != s.value || std::fabs(*v - *o.target) < *o.epsilon) ++bad;
        }
        std::cout << "samples: " << samples.size() << " read, " << bad << " failed re-evaluation\n";
        ok = ok && bad == 0;
    }
    if (!o.intervals.empty()) {
        const ls::BisectionWitness w = ls::witness_from_json(ls::json::parse(read_file(o.intervals)));
        bool nest = !w.intervals.empty();
        for (std::size_t k = 0; k < w.intervals.size(); ++k) {
            const ls::AngleInterval& iv = w.intervals[k];
            nest = nest && iv.depth == static_cast<int>(k) + 1 && iv.exponent == iv.depth - 1 && iv.contains(w.phi0);
            if (k > 0) nest = nest && iv.within(w.intervals[k - 1]);
        }
        std::cout << "intervals: " << w.intervals.size() << " read, nest " << (nest ? "ok" : "BROKEN") << '\n';
        ok = ok && nest;
    }
    if (!o.polyline.empty()) {
        const ls::json j = ls::json::parse(read_file(o.polyline));
        const ls::PathSpec path = ls::path_from_json(j.contains("path") ? j.at("path") : j);
        const auto* poly = std::get_if<ls::Polyline>(&path);
        if (!poly) throw ls::FormatError("polyline file does not hold a polyline");
        const ls::DescentCertificate cert = ls::check_descent(*poly, p.center);
        std::cout << "polyline: " << poly->vertices.size() << " vertices, certificate " << (cert.ok ? "ok" : "FAILED")
                  << '\n';
        ok = ok && cert.ok;
    }
    return ok ? kExitOk : kExitMismatch;
}

int run_corpus(std::optional<std::uint64_t> seed_flag, bool json) {
    const std::uint64_t seed = resolve_seed(seed_flag);
    const auto outcomes = ls::run_corpus(seed);
    bool all = true;
    for (const auto& o : outcomes) all = all && o.pass;
    if (json) {
        ls::json arr = ls::json::array();
        for (const auto& o : outcomes)
            arr.push_back({{"name", o.entry.name}, {"expr", o.entry.expr}, {"oracle", o.entry.oracle},
                           {"expected", ls::to_string(o.entry.expected)}, {"pass", o.pass},
                           {"result", ls::verdict_to_json(o.verdict)}});
        std::cout << ls::json{{"seed", seed}, {"all_pass", all}, {"entries", arr}}.dump(2) << '\n';
    } else {
        std::cout << "seed " << seed << '\n' << ls::corpus_table(outcomes);
        std::cout << (all ? "all expected verdicts matched\n" : "MISMATCH\n");
    }
    return all ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"limitscout: numerical multivariable limit checker with witnesses"};
    app.require_subcommand(1);

    AnalyzeOpts analyze_opts;
    auto add_config = [](CLI::App* cmd, AnalyzeOpts& o) {
        cmd->add_option("--r1", o.r1, "initial probe radius");
        cmd->add_option("--rho", o.rho, "radius decay per step");
        cmd->add_option("--tol", o.tol, "convergence tolerance");
        cmd->add_option("--steps", o.steps, "probe depth");
        cmd->add_option("--k", o.k, "tail length");
        cmd->add_flag("--json", o.json, "emit JSON");
    };
    CLI::App* analyze = app.add_subcommand("analyze", "classify the limit at a point");
    add_common(analyze, analyze_opts.common);
    add_config(analyze, analyze_opts);
    analyze->add_option("--rays", analyze_opts.rays, "number of ray probes");
    analyze->add_option("--power-grid", analyze_opts.power_grid, "default | none | c:m:n[:+|-];...");
    analyze->add_option("--spirals", analyze_opts.spirals, "default | none");
    analyze->add_option("--budget", analyze_opts.budget, "refutation evaluations per shell");
    analyze->add_option("--epsilon", analyze_opts.epsilon, "refutation epsilon (default 10*tol)");
    analyze->add_flag("--no-refute", analyze_opts.no_refute, "skip the violation-sequence search");
    analyze->add_option("--dump-probes", analyze_opts.dump_probes, "write probe table as CSV");

    PathLimitOpts pl_opts;
    CLI::App* path_limit = app.add_subcommand("path-limit", "limit along one path");
    add_common(path_limit, pl_opts.base.common);
    add_config(path_limit, pl_opts.base);
    path_limit->add_option("--path", pl_opts.path_json, "PathSpec JSON");
    path_limit->add_option("--path-file", pl_opts.path_file, "file holding PathSpec JSON");

    ConstructOpts c_opts;
    CLI::App* construct = app.add_subcommand("construct", "build a violation sequence, interval nest and polyline");
    add_common(construct, c_opts.common);
    construct->add_option("--L", c_opts.target, "claimed limit");
    construct->add_option("--epsilon", c_opts.epsilon, "violation threshold");
    construct->add_option("--count", c_opts.count, "number of shells")->check(CLI::PositiveNumber);
    construct->add_option("--r1", c_opts.r1, "outer radius");
    construct->add_option("--budget", c_opts.budget, "evaluations per shell")->check(CLI::PositiveNumber);
    construct->add_option("--depth", c_opts.depth, "bisection depth (<= 40)");
    construct->add_option("--samples", c_opts.samples, "CSV output for the violation samples");
    construct->add_option("--intervals", c_opts.intervals, "JSON output for the interval nest");
    construct->add_option("--polyline", c_opts.polyline, "JSON output for the polyline and certificate");

    CheckOpts k_opts;
    CLI::App* check = app.add_subcommand("check-witness", "re-read and re-verify files written by construct");
    add_common(check, k_opts.common);
    check->add_option("--L", k_opts.target, "claimed limit");
    check->add_option("--epsilon", k_opts.epsilon, "violation threshold");
    check->add_option("--samples", k_opts.samples, "samples CSV");
    check->add_option("--intervals", k_opts.intervals, "interval nest JSON");
    check->add_option("--polyline", k_opts.polyline, "polyline JSON");

    std::optional<std::uint64_t> corpus_seed;
    bool corpus_json = false;
    CLI::App* corpus = app.add_subcommand("corpus", "run the built-in classification corpus");
    corpus->add_option("--seed", corpus_seed, "RNG seed (fallback: LIMITSCOUT_SEED, then 42)");
    corpus->add_flag("--json", corpus_json, "emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*analyze) return run_analyze(analyze_opts);
        if (*path_limit) return run_path_limit(pl_opts);
        if (*construct) return run_construct(c_opts);
        if (*check) return run_check_witness(k_opts);
        if (*corpus) return run_corpus(corpus_seed, corpus_json);
    } catch (const ls::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ls::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ls::FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
