#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "limitscout/geometry.hpp"

using namespace limitscout;

TEST(FromPolar, Examples) {
    const Vec a = from_polar(Center({0, 0}), {2.0, {kPi / 2}});
    EXPECT_EQ(a[0], 0.0);
    EXPECT_EQ(a[1], 2.0);

    const Vec b = from_polar(Center({1, 1}), {0.0, {0.0}});
    EXPECT_EQ(b, (Vec{1, 1}));

    const Vec c = from_polar(Center({0, 0, 0}), {1.0, {kPi / 2, 0.0}});
    EXPECT_EQ(c, (Vec{0, 1, 0}));
}

TEST(FromPolar, AxisDirectionsAreExact) {
    const Center o({0, 0});
    EXPECT_EQ(from_polar(o, {1e-17, {kPi}}), (Vec{-1e-17, 0.0}));
    EXPECT_EQ(from_polar(o, {3.0, {3 * kPi / 2}}), (Vec{0.0, -3.0}));
}

TEST(FromPolar, DimensionMismatch) {
    EXPECT_THROW(from_polar(Center({0, 0}), {1.0, {0.0, 0.0}}), DimensionError);
}

TEST(ToPolar, Examples) {
    const Center o({0, 0});
    const PolarOffset d = to_polar(o, Vec{1, 1});
    EXPECT_NEAR(d.r, std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(d.angles[0], kPi / 4, 1e-15);

    EXPECT_EQ(to_polar(o, Vec{0, 0}), (PolarOffset{0.0, {0.0}}));

    const PolarOffset w = to_polar(o, Vec{-1, 0});
    EXPECT_EQ(w.r, 1.0);
    EXPECT_EQ(w.angles[0], kPi);
}

TEST(ToPolar, TinyRadiusIsCanonicalZero) {
    const PolarOffset z = to_polar(Center({0, 0, 0}), Vec{1e-310, 0, 0});
    EXPECT_EQ(z, (PolarOffset{0.0, {0.0, 0.0}}));
}

TEST(ToPolar, AnglesInCanonicalRanges) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int t = 0; t < 2000; ++t) {
        const Center c(Vec(4, 0.0));
        const PolarOffset o = to_polar(c, Vec{g(rng), g(rng), g(rng), g(rng)});
        EXPECT_GE(o.angles[0], 0.0);
        EXPECT_LE(o.angles[0], kPi);
        EXPECT_GE(o.angles[1], 0.0);
        EXPECT_LE(o.angles[1], kPi);
        EXPECT_GE(o.angles[2], 0.0);
        EXPECT_LT(o.angles[2], kTwoPi);
    }
}

TEST(Distance, Examples) {
    EXPECT_EQ(distance(Vec{0, 0}, Vec{3, 4}), 5.0);
    EXPECT_EQ(distance(Vec{1, 1}, Vec{1, 1}), 0.0);
    EXPECT_NEAR(distance(Vec{0, 0, 0}, Vec{1, 1, 1}), std::sqrt(3.0), 1e-15);
    EXPECT_THROW(distance(Vec{0, 0}, Vec{0, 0, 0}), DimensionError);
}

TEST(AngleDistance, Examples) {
    EXPECT_NEAR(angle_distance(0.1, kTwoPi - 0.1), 0.2, 1e-15);
    EXPECT_EQ(angle_distance(kPi / 4, kPi / 4), 0.0);
    EXPECT_EQ(angle_distance(0.0, kPi), kPi);
    EXPECT_EQ(angle_distance(0.0, kTwoPi), 0.0);
}

TEST(GeometryProperty, RoundTrip) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t n : {2u, 3u, 4u}) {
        const Center c(Vec(n, 0.0));
        for (int t = 0; t < 3000; ++t) {
            PolarOffset o;
            o.r = std::pow(10.0, -8.0 + 16.0 * u(rng));
            // leading angles kept off the poles, where later angles are not recoverable
            for (std::size_t k = 0; k + 2 < n; ++k) o.angles.push_back(0.05 + (kPi - 0.1) * u(rng));
            o.angles.push_back(kTwoPi * u(rng));
            const PolarOffset back = to_polar(c, from_polar(c, o));
            ASSERT_NEAR(back.r, o.r, 1e-12 * o.r);
            for (std::size_t k = 0; k + 2 < n; ++k) ASSERT_NEAR(back.angles[k], o.angles[k], 1e-12);
            ASSERT_LE(angle_distance(back.angles.back(), o.angles.back()), 1e-12);
        }
    }
}

TEST(GeometryProperty, DistanceMatchesRadius) {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t n : {2u, 3u, 4u}) {
        Vec cc(n);
        for (double& x : cc) x = 2.0 * u(rng) - 1.0;
        const Center c(cc);
        for (int t = 0; t < 2000; ++t) {
            PolarOffset o;
            o.r = std::pow(10.0, -3.0 + 6.0 * u(rng));
            for (std::size_t k = 0; k + 2 < n; ++k) o.angles.push_back(kPi * u(rng));
            o.angles.push_back(kTwoPi * u(rng));
            const Vec p = from_polar(c, o);
            ASSERT_NEAR(distance(c.coords(), p), o.r, 1e-12 * o.r);
        }
    }
}

TEST(GeometryProperty, TwoDimensionalHypersphericalIsPolar) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    for (int t = 0; t < 1000; ++t) {
        const double r = 1.0 + u(rng);
        const double phi = u(rng);
        const Vec p = from_polar(Center({0.5, -0.25}), {r, {phi}});
        const double x = 0.5 + r * std::cos(phi);
        const double y = -0.25 + r * std::sin(phi);
        ASSERT_EQ(std::memcmp(&p[0], &x, sizeof x), 0);
        ASSERT_EQ(std::memcmp(&p[1], &y, sizeof y), 0);
    }
}

TEST(DirectionGrid, Sizes) {
    EXPECT_EQ(direction_grid(2, 64).size(), 64u);
    EXPECT_EQ(direction_grid(3, 64).size(), 64u);
    EXPECT_EQ(direction_grid(4, 64).size(), 64u);
    EXPECT_EQ(direction_grid(3, 10).size(), 16u);
    EXPECT_EQ(direction_grid(2, 8)[2], (Vec{kPi / 2}));
}

TEST(Center, Validation) {
    EXPECT_THROW(Center({1.0}), UsageError);
    EXPECT_THROW(Center({0.0, NAN}), UsageError);
}
