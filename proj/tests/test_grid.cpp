#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tomokit/grid.hpp"

using namespace tomokit;

namespace {

constexpr double pi = std::numbers::pi;

double std_gauss2(const Vec3& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1]) / 2.0) / (2.0 * pi); }

}  // namespace

TEST(Sample, ZeroFunctionGivesZeroField) {
    ScalarField f = sample([](const Vec3&) { return 0.0; }, Geometry::cube(2, 17, -1, 1));
    for (double v : f.values) EXPECT_EQ(v, 0.0);
}

TEST(Sample, ConstantOnThreePoints) {
    ScalarField f = sample([](const Vec3&) { return 1.0; }, Geometry::make(1, {3, 1, 1}, {0, 0, 0}, {1, 1, 1}));
    ASSERT_EQ(f.size(), 3u);
    for (double v : f.values) EXPECT_EQ(v, 1.0);
}

TEST(Integrate, GaussianAgainstMidpointOracle) {
    Geometry g = Geometry::cube(2, 241, -6.0, 6.0);
    ASSERT_NEAR(g.spacing[0], 0.05, 1e-15);
    double got = integrate(sample(std_gauss2, g));
    // midpoint rule on cells of half the spacing
    const double h = 0.025;
    double mid = 0.0;
    for (int i = 0; i < 480; ++i)
        for (int j = 0; j < 480; ++j) mid += std_gauss2({-6.0 + (i + 0.5) * h, -6.0 + (j + 0.5) * h, 0.0});
    mid *= h * h;
    EXPECT_NEAR(got, 1.0, 1e-6);
    EXPECT_NEAR(got, mid, 1e-6);
}

TEST(Integrate, ZeroAndConstant) {
    EXPECT_EQ(integrate(ScalarField(Geometry::cube(2, 9, -1, 1))), 0.0);
    ScalarField one = sample([](const Vec3&) { return 1.0; }, Geometry::make(1, {101, 1, 1}, {0, 0, 0}, {0.01, 1, 1}));
    EXPECT_NEAR(integrate(one), 1.0, 1e-14);
}

TEST(Integrate, Linearity) {
    Geometry g = Geometry::cube(2, 64, -2, 2);
    ScalarField a = sample([](const Vec3& x) { return std::sin(x[0]) + x[1] * x[1]; }, g);
    ScalarField b = sample([](const Vec3& x) { return std::exp(-x[0] * x[1]); }, g);
    ScalarField c(g);
    for (std::size_t i = 0; i < c.size(); ++i) c.values[i] = 2.5 * a.values[i] - 0.75 * b.values[i];
    double expect = 2.5 * integrate(a) - 0.75 * integrate(b);
    EXPECT_NEAR(integrate(c), expect, 1e-12 * std::abs(expect));
}

TEST(Interpolate, NodesLinearityAndOutside) {
    Geometry g = Geometry::cube(2, 11, -1, 1);
    ScalarField f = sample([](const Vec3& x) { return std::cos(3 * x[0]) * x[1]; }, g);
    EXPECT_EQ(interpolate(f, g.point(37)), f.values[37]);
    ScalarField line(Geometry::make(1, {2, 1, 1}, {0, 0, 0}, {1, 1, 1}));
    line.values = {0.0, 1.0};
    EXPECT_DOUBLE_EQ(interpolate(line, {0.25, 0, 0}), 0.25);
    EXPECT_EQ(interpolate(f, {1.5, 0.0, 0.0}), 0.0);
    EXPECT_EQ(interpolate(f, {0.0, -1.01, 0.0}), 0.0);
}

TEST(Dft, ZeroAndRoundTrip) {
    Geometry g = Geometry::cube(2, 48, -3, 3);
    Spectrum z = dft_forward(ScalarField(g));
    for (const cplx& v : z.values) EXPECT_EQ(std::abs(v), 0.0);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> N(0.0, 1.0);
    double a = N(rng), b = N(rng), c = N(rng);
    ScalarField f = sample([&](const Vec3& x) { return std::exp(-x[0] * x[0] * (1 + 0.1 * a)) * std::cos(b * x[1] + c); }, g);
    ScalarField back = real_part(dft_inverse(dft_forward(f)));
    double dev = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) dev = std::max(dev, std::abs(back.values[i] - f.values[i]));
    EXPECT_LE(dev, 1e-12 * max_abs(f));
}

TEST(Dft, GaussianSpectrumAgainstQuadrature) {
    Geometry g = Geometry::make(1, {1024, 1, 1}, {-12.0, 0, 0}, {24.0 / 1024.0, 1, 1});
    ScalarField f = sample([](const Vec3& x) { return std::exp(-x[0] * x[0] / 2.0); }, g);
    Spectrum s = dft_forward(f);
    double err = 0.0, oracle_err = 0.0;
    for (std::size_t j = 0; j < 1024; ++j) {
        double k = s.k_at(0, j);
        if (std::abs(k) > 8.0) continue;
        // Simpson quadrature of the continuum transform on a finer grid
        const int M = 4000;
        const double h = 24.0 / M;
        double acc = 0.0;
        for (int m = 0; m <= M; ++m) {
            double x = -12.0 + m * h;
            double w = (m == 0 || m == M) ? 1.0 : (m % 2 ? 4.0 : 2.0);
            acc += w * std::exp(-x * x / 2.0) * std::cos(k * x);
        }
        acc *= h / 3.0;
        double exact = std::sqrt(2 * pi) * std::exp(-k * k / 2);
        oracle_err = std::max(oracle_err, std::abs(acc - exact));
        err = std::max(err, std::abs(s.values[j] - exact));
    }
    EXPECT_LE(oracle_err, 1e-10);
    EXPECT_LE(err, 1e-8);
}

TEST(Phantom, UnitDiskArea) {
    PhantomSpec spec;
    spec.kind = PhantomKind::disks2d;
    spec.disks = {{{0, 0, 0}, 1.0, 1.0}};
    ScalarField f = phantom(spec, Geometry::cube(2, 221, -1.1, 1.1));
    EXPECT_NEAR(integrate(f), pi, 0.005 * pi);
}

TEST(Phantom, NormalizedGaussianAndEmptyMixture) {
    PhantomSpec spec;
    spec.kind = PhantomKind::gaussian_mix;
    spec.gaussians = {{{0.2, -0.1, 0}, 0.5, 1.0}};
    Geometry g = Geometry::cube(2, 201, -5, 5);
    EXPECT_NEAR(integrate(phantom(spec, g)), 1.0, 1e-6);
    spec.gaussians.clear();
    ScalarField z = phantom(spec, g);
    for (double v : z.values) EXPECT_EQ(v, 0.0);
}

TEST(Phantom, SupportIsRespected) {
    PhantomSpec spec;
    spec.kind = PhantomKind::disks2d;
    spec.disks = shepp_logan_disks();
    ScalarField f = phantom(spec, Geometry::cube(2, 128, -1, 1));
    EXPECT_NO_THROW(check_support(f));
    EXPECT_GT(f.support_radius, 0.0);
    EXPECT_LE(effective_support_radius(f), f.support_radius + 2.0 * f.geometry.max_spacing());
    for (double v : f.values) EXPECT_GE(v, 0.0);
}

TEST(Geometry, RejectsBadShapes) {
    EXPECT_THROW(Geometry::cube(4, 10, -1, 1), InvalidArgument);
    EXPECT_THROW(Geometry::cube(2, 1, -1, 1), InvalidArgument);
    EXPECT_THROW(Geometry::cube(2, 10, 1, -1), InvalidArgument);
}

TEST(UniformGrid, SymmetricAndCovering) {
    UniformGrid s = UniformGrid::symmetric(2.0, 5);
    EXPECT_DOUBLE_EQ(s.at(0), -2.0);
    EXPECT_DOUBLE_EQ(s.end(), 2.0);
    UniformGrid c = UniformGrid::covering(1.05, 0.1);
    EXPECT_LE(c.start, -1.05);
    EXPECT_GE(c.end(), 1.05);
    EXPECT_NEAR(c.start, -c.end(), 1e-12);
}

TEST(RelativeL2, ZeroForIdenticalFields) {
    Geometry g = Geometry::cube(2, 20, -1, 1);
    ScalarField f = sample([](const Vec3& x) { return 1 + x[0]; }, g);
    EXPECT_EQ(relative_l2(f, f), 0.0);
    EXPECT_THROW(relative_l2(f, ScalarField(Geometry::cube(2, 21, -1, 1))), InvalidArgument);
}
