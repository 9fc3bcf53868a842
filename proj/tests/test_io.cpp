#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "limitscout/corpus.hpp"
#include "limitscout/io.hpp"

using namespace limitscout;

TEST(FormatDouble, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
    for (double x : {kPi, 1.0 / 3.0, 5e-324, 1.7976931348623157e308, -0.0}) {
        const double back = parse_double(format_double(x));
        EXPECT_EQ(back, x);
        EXPECT_EQ(std::signbit(back), std::signbit(x));
    }
    EXPECT_THROW(parse_double("1.5x"), std::invalid_argument);
    EXPECT_THROW(parse_double(""), std::invalid_argument);
}

TEST(PathJson, RoundTripEveryKind) {
    const std::vector<PathSpec> paths = {
        Ray{{0.25}},
        Ray{{1.0, 2.0}},
        PowerCurve{-0.5, 3, 2, 1},
        Spiral{{kPi / 2}, -1.0, 0.5},
        Polyline{{{1.0, 0.1}, {0.3, 0.05}}},
        SampleSeq{{{0.1, 0.2, 0.3}}},
    };
    for (const PathSpec& p : paths) {
        const json j = path_to_json(p);
        EXPECT_EQ(path_from_json(json::parse(j.dump())), p) << j.dump();
    }
    EXPECT_EQ(path_to_json(PowerCurve{1.0, 2, 1, 1}).at("type"), "power");
    EXPECT_THROW(path_from_json(json{{"type", "helix"}}), FormatError);
}

TEST(WitnessJson, RoundTrip) {
    ViolationSearch q;
    q.epsilon = 0.5;
    q.count = 12;
    const auto res = violation_sequence(parse("(x^2-y^2)/(x^2+y^2)", 2), Center({0, 0}), q);
    const BisectionWitness w = bisect_angles(std::get<std::vector<PolarSample>>(res), 12);
    const BisectionWitness back = witness_from_json(json::parse(witness_to_json(w).dump()));
    EXPECT_EQ(back.phi0, w.phi0);
    EXPECT_EQ(back.intervals, w.intervals);
    ASSERT_EQ(back.picked.size(), w.picked.size());
    for (std::size_t i = 0; i < w.picked.size(); ++i) {
        EXPECT_EQ(back.picked[i].point, w.picked[i].point);
        EXPECT_EQ(back.picked[i].offset, w.picked[i].offset);
        EXPECT_EQ(back.picked[i].value, w.picked[i].value);
    }
    const json iv = interval_to_json(AngleInterval{5, 3, 4});
    EXPECT_EQ(iv.at("width_exponent"), 3);
    EXPECT_THROW(witness_from_json(json{{"intervals", 3}}), FormatError);
}

TEST(SamplesCsv, RoundTripIsExact) {
    for (int dim : {2, 3}) {
        ViolationSearch q;
        q.epsilon = 0.05;
        q.count = 15;
        const Expression f = dim == 2 ? parse("x*y/(x^2+y^2)", 2) : parse("x*y*z/(x^2+y^2+z^2)^(3/2)", 3);
        const auto res = violation_sequence(f, Center(Vec(dim, 0.0)), q);
        const auto& s = std::get<std::vector<PolarSample>>(res);
        std::stringstream ss;
        write_samples_csv(ss, s);
        const std::string text = ss.str();
        EXPECT_EQ(text.find('\r'), std::string::npos);
        EXPECT_EQ(text.substr(0, text.find('\n')), dim == 2 ? "index,r,phi,value,x1,x2" : "index,r,phi1,phi2,value,x1,x2,x3");
        const std::vector<PolarSample> back = read_samples_csv(ss);
        ASSERT_EQ(back.size(), s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            EXPECT_EQ(back[i].index, s[i].index);
            EXPECT_EQ(back[i].offset, s[i].offset);
            EXPECT_EQ(back[i].point, s[i].point);
            EXPECT_EQ(back[i].value, s[i].value);
        }
    }
}

TEST(SamplesCsv, Malformed) {
    std::istringstream bad_header("a,b,c\n");
    EXPECT_THROW(read_samples_csv(bad_header), FormatError);
    std::istringstream short_row("index,r,phi,value,x1,x2\n1,0.5,0.1\n");
    EXPECT_THROW(read_samples_csv(short_row), FormatError);
    std::istringstream bad_number("index,r,phi,value,x1,x2\n1,0.5,zz,1,0.1,0.2\n");
    EXPECT_THROW(read_samples_csv(bad_number), FormatError);
}

TEST(VerdictJson, RoundTripIsByteStable) {
    for (const char* e : {"x*y/(x^2+y^2)", "x^4*y/(x^8+y^2)", "0.7", "sqrt(-(x^2+y^2))"}) {
        const Verdict v = analyze(parse(e, 2), Center({0, 0}), AnalyzerConfig{});
        const std::string once = verdict_to_json(v).dump();
        const Verdict back = verdict_from_json(json::parse(once));
        EXPECT_EQ(back.kind, v.kind);
        EXPECT_EQ(back.limit, v.limit);
        EXPECT_EQ(back.probes.size(), v.probes.size());
        EXPECT_EQ(verdict_to_json(back).dump(), once) << e;
    }
}

TEST(VerdictJson, Schema) {
    const Verdict v = analyze(parse("1.0", 2), Center({3, 4}), AnalyzerConfig{});
    const json j = verdict_to_json(v);
    EXPECT_EQ(j.at("verdict"), "LIMIT_EXISTS");
    EXPECT_EQ(j.at("limit").get<double>(), 1.0);
    for (const char* key : {"witnesses", "probes", "config"}) EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_THROW(verdict_from_json(json{{"verdict", "MAYBE"}}), FormatError);
}

TEST(ProbesCsv, OneRowPerProbe) {
    const Verdict v = analyze(parse("x*y/(x^2+y^2)", 2), Center({0, 0}), AnalyzerConfig{});
    std::ostringstream os;
    write_probes_csv(os, v.probes);
    const std::string s = os.str();
    EXPECT_EQ(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')), v.probes.size() + 1);
}

TEST(Corpus, TableIsStable) {
    const std::string a = corpus_table(run_corpus(42));
    const std::string b = corpus_table(run_corpus(42));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.find("FAIL"), std::string::npos) << a;
}
