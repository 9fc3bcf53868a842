#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "limitscout/paths.hpp"

using namespace limitscout;

namespace {

const Center kOrigin({0, 0});

Vec polar2(double r, double phi) { return {r * std::cos(phi), r * std::sin(phi)}; }

// Witness built from violation samples of f against L.
BisectionWitness witness_for(const char* expr, double L, double eps, std::uint64_t seed, std::size_t count = 24) {
    ViolationSearch q;
    q.target = L;
    q.epsilon = eps;
    q.count = count;
    q.seed = seed;
    const auto res = violation_sequence(parse(expr, 2), kOrigin, q);
    const auto& s = std::get<std::vector<PolarSample>>(res);
    return bisect_angles(s, static_cast<int>(s.size()));
}

PolarSample pick(std::size_t index, double r, double phi) {
    PolarSample s;
    s.index = index;
    s.point = from_polar(kOrigin, {r, {phi}});
    s.offset = to_polar(kOrigin, s.point);
    return s;
}

}  // namespace

TEST(PointAt, Ray) {
    const auto p = point_at(Ray{{0.0}}, kOrigin, 0.25);
    ASSERT_TRUE(p);
    EXPECT_EQ(*p, (Vec{0.25, 0.0}));
}

TEST(PointAt, PowerCurveParabola) {
    const double r = std::hypot(0.1, 0.01);
    const auto p = point_at(PowerCurve{1.0, 2, 1, 1}, kOrigin, r);
    ASSERT_TRUE(p);
    EXPECT_NEAR((*p)[0], 0.1, 1e-14);
    EXPECT_NEAR((*p)[1], 0.01, 1e-15);
}

TEST(PointAt, PowerCurveNegativeBranch) {
    const PowerCurve cube{1.0, 1, 3, -1};
    const auto p = point_at(cube, kOrigin, 0.5);
    ASSERT_TRUE(p);
    EXPECT_LT((*p)[0], 0.0);
    EXPECT_NEAR((*p)[1], std::cbrt((*p)[0]), 1e-12);
    EXPECT_THROW(point_at(PowerCurve{1.0, 1, 2, -1}, kOrigin, 0.5), UsageError);
    EXPECT_THROW(point_at(PowerCurve{1.0, 2, 2, 1}, kOrigin, 0.5), UsageError);
    EXPECT_THROW(point_at(PowerCurve{0.0, 1, 1, 1}, kOrigin, 0.5), UsageError);
    EXPECT_THROW(point_at(PowerCurve{1.0, 1, 1, 1}, Center({0, 0, 0}), 0.5), DimensionError);
}

TEST(PointAt, SpiralMatchesFromPolar) {
    const auto p = point_at(Spiral{{kPi / 2}, 1.0, 1.0}, kOrigin, 0.01);
    ASSERT_TRUE(p);
    const Vec q = from_polar(kOrigin, {0.01, {kPi / 2 + 0.01}});
    EXPECT_EQ(*p, q);
    EXPECT_NEAR((*p)[0], -0.01 * std::sin(0.01), 1e-17);
}

TEST(PointAt, RejectsNonPositiveRadius) { EXPECT_THROW(point_at(Ray{{0.0}}, kOrigin, 0.0), UsageError); }

TEST(CheckDescent, ObtuseTriangle) {
    const Polyline p{{polar2(2.5, kPi / 4), polar2(1.0, 0.0)}};
    const DescentCertificate c = check_descent(p, kOrigin);
    ASSERT_EQ(c.triangles.size(), 1u);
    const DescentTriangle& t = c.triangles[0];
    EXPECT_NEAR(t.angle_at_center, kPi / 4, 1e-15);
    EXPECT_NEAR(t.side_ratio, 2.5, 1e-15);
    const double a2 = 7.25 - 2.5 * std::sqrt(2.0);
    EXPECT_NEAR(a2, 3.7145, 1e-4);
    const double cosC = (a2 + 1.0 - 6.25) / (2.0 * std::sqrt(a2));
    EXPECT_NEAR(t.cos_far, cosC, 1e-14);
    EXPECT_NEAR(t.cos_far, -0.3984, 1e-4);
    EXPECT_LT(t.cos_far, 0.0);
}

TEST(CheckDescent, RatioTooSmall) {
    const Polyline p{{Vec{1.0, 0.0}, Vec{0.6, 0.0}}};
    const DescentCertificate c = check_descent(p, kOrigin);
    EXPECT_FALSE(c.ok);
    EXPECT_NEAR(c.triangles[0].side_ratio, 1.0 / 0.6, 1e-15);
    EXPECT_THROW(point_at(p, kOrigin, 0.8), UsageError);
}

TEST(CheckDescent, AngleTooWide) {
    const Polyline p{{Vec{1.0, 0.0}, Vec{0.0, 0.45}}};
    const DescentCertificate c = check_descent(p, kOrigin);
    EXPECT_FALSE(c.ok);
    EXPECT_NEAR(c.triangles[0].angle_at_center, kPi / 2, 1e-15);
}

TEST(CheckDescent, Errors) {
    EXPECT_THROW(check_descent(Polyline{{Vec{1.0, 0.0}, Vec{1.0, 0.0}}}, kOrigin), UsageError);
    EXPECT_THROW(check_descent(Polyline{{Vec{1.0, 0.0}}}, kOrigin), UsageError);
    EXPECT_THROW(check_descent(Polyline{{Vec{1.0, 0.0}, Vec{0.0, 0.0}}}, kOrigin), UsageError);
}

TEST(CheckDescent, RandomTrianglesWithinBoundsAreObtuse) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    while (checked < 100000) {
        const double A = (kPi / 4) * u(rng);
        const double b = std::pow(10.0, -6.0 + 6.0 * u(rng));
        const double ratio = 2.0 + std::pow(10.0, -6.0 + 8.0 * u(rng));
        const double phi = kTwoPi * u(rng);
        const Polyline p{{polar2(ratio * b, phi + A), polar2(b, phi)}};
        const DescentTriangle t = check_descent(p, kOrigin).triangles[0];
        if (!(t.angle_at_center <= kPi / 4 && t.side_ratio > 2.0)) continue;  // rounding pushed it out
        ++checked;
        ASSERT_LT(t.cos_far, 0.0) << "A=" << A << " ratio=" << ratio;
        // closed-form oracle for the same triangle
        const double c = ratio * b;
        const double a = std::sqrt(b * b + c * c - 2 * b * c * std::cos(A));
        ASSERT_LT((a * a + b * b - c * c) / (2 * a * b), 0.0);
    }
}

TEST(PolylineFromWitness, ConstantAngleRay) {
    BisectionWitness w;
    for (std::size_t i = 1; i <= 6; ++i) w.picked.push_back(pick(i, std::ldexp(1.0, 1 - int(i)), kPi / 5));
    const Polyline p = polyline_from_witness(w);
    ASSERT_EQ(p.vertices.size(), 4u);
    EXPECT_EQ(p.vertices.front(), w.picked[2].point);
    for (std::size_t k = 1; k < p.vertices.size(); ++k)
        EXPECT_LT(distance(p.vertices[k], kOrigin.coords()), distance(p.vertices[k - 1], kOrigin.coords()));
}

TEST(PolylineFromWitness, TooShort) {
    BisectionWitness w;
    w.picked = {pick(1, 1.0, 0.1), pick(2, 0.25, 0.1)};
    EXPECT_THROW(polyline_from_witness(w), UsageError);
}

TEST(PolylineFromWitness, AlternatingWitnessIsCertified) {
    std::vector<PolarSample> s;
    for (std::size_t i = 1; i <= 20; ++i)
        s.push_back(pick(i, std::pow(0.3, static_cast<double>(i)), i % 2 == 1 ? kPi / 6 : 5 * kPi / 4));
    const BisectionWitness w = bisect_angles(s, 40);
    const Polyline p = polyline_from_witness(w);
    EXPECT_TRUE(check_descent(p, kOrigin).ok);
}

TEST(PolylineProperty, ConstructedPolylinesAreCertifiedAndInvertible) {
    const char* exprs[] = {"x*y/(x^2+y^2)", "(x^2-y^2)/(x^2+y^2)", "x^2*y/(x^4+y^2)", "sin(1/(x^2+y^2))"};
    const double targets[] = {0.0, 0.0, 0.0, 0.0};
    const double eps[] = {0.3, 0.5, 0.3, 0.5};
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int polylines = 0;
    for (int e = 0; e < 4; ++e) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const BisectionWitness w = witness_for(exprs[e], targets[e], eps[e], seed);
            if (w.picked.size() < 4) continue;
            const Polyline p = polyline_from_witness(w);
            const DescentCertificate cert = check_descent(p, kOrigin);
            ASSERT_TRUE(cert.ok) << exprs[e] << " seed " << seed;
            ++polylines;
            const double r_hi = distance(p.vertices.front(), kOrigin.coords());
            const double r_lo = distance(p.vertices.back(), kOrigin.coords());
            for (int i = 0; i < 1000; ++i) {
                const double r = r_lo * std::pow(r_hi / r_lo, u(rng));
                const auto x = point_at(p, kOrigin, r);
                ASSERT_TRUE(x);
                ASSERT_NEAR(distance(*x, kOrigin.coords()), r, 1e-10 * r);
            }
            // phi(r) stays within the k-th interval once r drops below r_{i_k}
            std::vector<double> sched;
            for (int i = 0; i < 200; ++i) sched.push_back(r_lo * std::pow(r_hi / r_lo, u(rng)));
            const auto phis = angle_function(p, kOrigin, sched);
            for (const AngleSample& a : phis) {
                for (std::size_t k = 2; k < w.picked.size(); ++k) {
                    if (a.r < w.picked[k].offset.r) {
                        ASSERT_LE(angle_distance(a.angles[0], w.phi0), std::ldexp(kPi, -static_cast<int>(k)) + 1e-12);
                    }
                }
            }
        }
    }
    EXPECT_GE(polylines, 10);
}

TEST(PolylineProperty, OutsideCoveredStretch) {
    const Polyline p{{polar2(1.0, 0.1), polar2(0.3, 0.12), polar2(0.1, 0.11)}};
    ASSERT_TRUE(check_descent(p, kOrigin).ok);
    EXPECT_FALSE(point_at(p, kOrigin, 1.5));
    EXPECT_FALSE(point_at(p, kOrigin, 0.05));
    EXPECT_THROW(angle_function(p, kOrigin, {0.05}), OutOfRangeError);
    const auto end = point_at(p, kOrigin, 1.0);
    ASSERT_TRUE(end);
    EXPECT_NEAR(distance(*end, p.vertices[0]), 0.0, 1e-15);
}

TEST(PowerCurveProperty, TracesTheCurve) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<PowerCurve> curves = {
        {1.0, 1, 1, 1}, {-1.0, 2, 1, 1}, {2.0, 3, 1, -1}, {0.5, 1, 2, 1}, {-2.0, 3, 2, 1}, {1.0, 1, 3, -1}, {-0.5, 2, 3, -1}};
    for (const PowerCurve& pc : curves) {
        for (int i = 0; i < 500; ++i) {
            const double r = std::pow(10.0, -8.0 + 8.0 * u(rng));
            const auto p = point_at(pc, kOrigin, r);
            ASSERT_TRUE(p);
            const double x = (*p)[0];
            const double t = std::fabs(x);
            double expect = pc.c * std::pow(t, static_cast<double>(pc.m) / pc.n);
            if (x < 0 && pc.m % 2 == 1) expect = -expect;  // odd root of a negative base
            ASSERT_LE(std::fabs((*p)[1] - expect), 1e-12);
            ASSERT_EQ(x < 0, pc.branch < 0);
            ASSERT_NEAR(std::hypot(x, (*p)[1]), r, 1e-14 * r);
        }
    }
}

TEST(AngleFunction, RayIsConstant) {
    const auto a = angle_function(Ray{{1.25}}, kOrigin, {1.0, 0.5, 1e-3, 1e-9});
    for (const AngleSample& s : a) EXPECT_EQ(s.angles[0], 1.25);
}

TEST(AngleFunction, ParabolaTendsToZero) {
    std::vector<double> sched;
    for (int j = 0; j < 30; ++j) sched.push_back(std::ldexp(1.0, -j));
    const auto a = angle_function(PowerCurve{1.0, 2, 1, 1}, kOrigin, sched);
    for (std::size_t j = 1; j < a.size(); ++j) EXPECT_LT(a[j].angles[0], a[j - 1].angles[0]);
    EXPECT_LT(a.back().angles[0], 1e-8);
}

TEST(AngleFunction, ConstantAnglePolyline) {
    const Polyline p{{polar2(1.0, kPi / 3), polar2(0.3, kPi / 3), polar2(0.1, kPi / 3), polar2(0.01, kPi / 3)}};
    ASSERT_TRUE(check_descent(p, kOrigin).ok);
    const auto a = angle_function(p, kOrigin, {0.9, 0.5, 0.2, 0.05, 0.011});
    for (const AngleSample& s : a) EXPECT_NEAR(s.angles[0], kPi / 3, 1e-14);
}

TEST(AngleFunction, SpiralWrapsAndApproachesPhi0) {
    const auto a = angle_function(Spiral{{0.0}, -1.0, 0.5}, kOrigin, {0.25, 1e-6});
    EXPECT_NEAR(a[0].angles[0], kTwoPi - 0.5, 1e-15);
    EXPECT_NEAR(angle_distance(a[1].angles[0], 0.0), 1e-3, 1e-15);
}
