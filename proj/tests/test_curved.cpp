#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tomokit/curved.hpp"

using namespace tomokit;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<Vec3> covectors(std::size_t n) {
    std::vector<Vec3> mus;
    for (std::size_t j = 0; j < n; ++j) {
        double th = pi * static_cast<double>(j) / static_cast<double>(n), lam = j % 2 ? 0.6 : 1.4;
        mus.push_back({lam * std::cos(th), lam * std::sin(th), 0.0});
    }
    return mus;
}

ScalarField normalized(ScalarField f) {
    double m = integrate(f);
    for (double& v : f.values) v /= m;
    return f;
}

}  // namespace

TEST(Maps, InvolutionAndJacobians) {
    PlaneDiffeomorphism c = builtin_map(MapName::conformal_inversion);
    for (Vec3 q : {Vec3{0.3, -1.2, 0}, Vec3{2.0, 0.5, 0}, Vec3{-0.01, 0.02, 0}}) {
        Vec3 back = c.forward(c.forward(q));
        EXPECT_NEAR(back[0], q[0], 1e-12 * norm(q));
        EXPECT_NEAR(back[1], q[1], 1e-12 * norm(q));
        Vec3 inv = c.inverse(c.forward(q));
        EXPECT_NEAR(inv[0], q[0], 1e-12 * norm(q));
    }
    EXPECT_NEAR(c.jacobian({1, 0, 0}), 1.0, 1e-15);
    EXPECT_NEAR(c.jacobian({2, 0, 0}), 1.0 / 16.0, 1e-15);
    PlaneDiffeomorphism h = builtin_map(MapName::hyperbolic);
    EXPECT_NEAR(h.jacobian({2, 0.7, 0}), 0.25, 1e-15);
    Vec3 x = h.forward({2, 0.7, 0});
    EXPECT_NEAR(x[0], 0.5, 1e-15);
    EXPECT_NEAR(x[1], 0.7, 1e-15);
    EXPECT_EQ(map_name(parse_map_name("hyperbolic")), "hyperbolic");
    EXPECT_THROW(parse_map_name("parabola"), InvalidArgument);
}

TEST(Pushforward, ConservesMass) {
    Geometry g = Geometry::cube(2, 200, -2.5, 2.5);
    ScalarField f = sample(
        [](const Vec3& q) {
            double u = (std::hypot(q[0], q[1]) - 1.4) / 0.5;
            return std::abs(u) < 1 ? std::pow(1 - u * u, 3) * (1 + 0.4 * q[1]) : 0.0;
        },
        g);
    CurvedOptions raw;
    raw.conserve_mass = false;
    raw.x_shape = {800, 800};
    ScalarField fx = pushforward(f, builtin_map(MapName::conformal_inversion), raw);
    EXPECT_NEAR(integrate(fx), integrate(f), 1e-3 * integrate(f));
    ScalarField kept = pushforward(f, builtin_map(MapName::conformal_inversion));
    EXPECT_NEAR(integrate(kept), integrate(f), 1e-5 * integrate(f));
}

TEST(CurvedForward, ZeroDensity) {
    ScalarField z(Geometry::cube(2, 64, -2, 2));
    CurvedTomograms t = curved_forward(z, builtin_map(MapName::conformal_inversion), covectors(8), 65);
    for (double v : t.tomograms.data) EXPECT_EQ(v, 0.0);
}

TEST(CurvedForward, NarrowGaussianLandsOnTheImagePoint) {
    PhantomSpec s;
    s.kind = PhantomKind::gaussian_mix;
    s.gaussians = {{{2, 0, 0}, 0.05, 1.0}};
    s.gaussian_cutoff = 6.0;
    ScalarField f = phantom(s, Geometry::cube(2, 256, -2.6, 2.6));
    CurvedTomograms t = curved_forward(f, builtin_map(MapName::conformal_inversion), {{1, 0, 0}, {0, 1, 0}}, 513);
    std::vector<double> row = t.tomograms.row(0);
    std::size_t peak = 0;
    for (std::size_t j = 1; j < row.size(); ++j)
        if (row[j] > row[peak]) peak = j;
    // one cell of the image grid the density is pushed onto
    const double cell = t.x_geometry.spacing[0];
    EXPECT_NEAR(t.tomograms.offsets[0].at(peak), 0.5, cell);
    row = t.tomograms.row(1);
    peak = 0;
    for (std::size_t j = 1; j < row.size(); ++j)
        if (row[j] > row[peak]) peak = j;
    EXPECT_NEAR(t.tomograms.offsets[1].at(peak), 0.0, cell);
}

TEST(CurvedForward, RowsAreNormalized) {
    Geometry g = Geometry::cube(2, 200, -2.5, 2.5);
    ScalarField f = normalized(sample(
        [](const Vec3& q) {
            double u = (std::hypot(q[0], q[1]) - 1.5) / 0.4;
            return std::abs(u) < 1 ? std::pow(1 - u * u, 3) : 0.0;
        },
        g));
    CurvedTomograms t = curved_forward(f, builtin_map(MapName::conformal_inversion), covectors(24), 401);
    DensityRowReport r = density_rows(t.tomograms.data, t.tomograms.offsets);
    EXPECT_GE(r.min_value, -1e-12);
    EXPECT_LE(r.max_mass_deviation, 1e-4);
}

TEST(CurvedInvert, CircleFamilyAnnulus) {
    Geometry g = Geometry::cube(2, 192, -2.2, 2.2);
    ScalarField f = normalized(sample(
        [](const Vec3& q) {
            double r = std::hypot(q[0], q[1]);
            double u = (r - 1.25) / 0.75;  // support 0.5 <= |q| <= 2
            return std::abs(u) < 1 ? std::pow(1 - u * u, 3) * (1 + 0.3 * std::sin(q[0] + q[1])) : 0.0;
        },
        g));
    PlaneDiffeomorphism m = builtin_map(MapName::conformal_inversion);
    std::vector<Vec3> mus;
    for (std::size_t j = 0; j < 192; ++j) {
        double th = pi * j / 192.0;
        mus.push_back({std::cos(th), std::sin(th), 0});
    }
    CurvedOptions o;
    o.x_shape = {512, 512};
    CurvedTomograms t = curved_forward(f, m, mus, 513, o);
    std::size_t masked = 0;
    EXPECT_LE(relative_l2(curved_invert(t, m, g, {}, &masked), f), 0.06);
}

TEST(CurvedInvert, HyperbolaFamilyStrip) {
    const std::size_t n = 192;
    Geometry g = Geometry::make(2, {n, n, 1}, {-0.2, -2.0, 0}, {3.0 / (n - 1.0), 4.0 / (n - 1.0), 1});
    ScalarField f = normalized(sample(
        [](const Vec3& q) {
            double u = (q[0] - 1.5) / 1.0;  // support 0.5 <= q <= 2.5
            if (std::abs(u) >= 1 || std::abs(q[1]) >= 1.5) return 0.0;
            return std::pow(1 - u * u, 3) * std::pow(1 - q[1] * q[1] / 2.25, 3);
        },
        g));
    PlaneDiffeomorphism m = builtin_map(MapName::hyperbolic);
    CurvedTomograms t = curved_forward(f, m, covectors(192), 513);
    EXPECT_LE(relative_l2(curved_invert(t, m, g), f), 0.06);
}

TEST(CurvedInvert, ZeroTomograms) {
    Geometry g = Geometry::cube(2, 64, -2, 2);
    PlaneDiffeomorphism m = builtin_map(MapName::conformal_inversion);
    ScalarField ring = sample([](const Vec3& q) { return std::abs(std::hypot(q[0], q[1]) - 1.2) < 0.3 ? 1.0 : 0.0; }, g);
    CurvedTomograms t = curved_forward(ring, m, covectors(64), 129);
    std::fill(t.tomograms.data.begin(), t.tomograms.data.end(), 0.0);
    for (double v : curved_invert(t, m, g).values) EXPECT_EQ(v, 0.0);
}

TEST(CurvedForward, RejectsMassNearTheSingularSet) {
    PhantomSpec s;
    s.kind = PhantomKind::gaussian_mix;
    s.gaussians = {{{0, 0, 0}, 0.3, 1.0}};
    ScalarField f = phantom(s, Geometry::cube(2, 64, -2, 2));
    EXPECT_THROW(curved_forward(f, builtin_map(MapName::conformal_inversion), covectors(8), 65), InvariantViolation);
}
