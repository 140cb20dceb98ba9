#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tomokit/invert.hpp"

using namespace tomokit;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField gaussian(const Geometry& g, Vec3 c, double sigma, double cutoff = 8.0) {
    PhantomSpec s;
    s.kind = PhantomKind::gaussian_mix;
    s.gaussians = {{c, sigma, 1.0}};
    s.gaussian_cutoff = cutoff;
    return phantom(s, g);
}

Sinogram project(const ScalarField& f, std::size_t angles, std::size_t offsets) {
    return radon_forward(f, DirectionSet::half_circle(angles), UniformGrid::symmetric(effective_support_radius(f), offsets));
}

}  // namespace

TEST(Constants, ClosedForms) {
    DimensionalConstants c2 = constants(2);
    EXPECT_NEAR(c2.a_n, 2.0, 1e-14);
    EXPECT_NEAR(c2.b_n, 2 * pi, 1e-13);
    EXPECT_NEAR(c2.c_nd, 1 / (4 * pi), 1e-15);
    DimensionalConstants c3 = constants(3);
    EXPECT_NEAR(c3.a_n, 2 * pi, 1e-13);
    EXPECT_NEAR(c3.b_n, 4 * pi, 1e-13);
    EXPECT_NEAR(c3.a_n * c3.b_n, 8 * pi * pi, 1e-12);
    EXPECT_NEAR(c3.c_nd, 1 / (8 * pi * pi), 1e-15);
    // (n, d) = (3, 2): Gamma(1)^2 Gamma(1) / (2^3 pi^(7/2) Gamma(1/2)) and 1/(a_3^2 b) with b the
    // spectrum constant of |x|^-2 in R^3 (2 pi^2)
    DimensionalConstants c32 = constants(3, 2);
    double gamma_form = 1.0 / (8.0 * std::pow(pi, 3.5) * std::tgamma(0.5));
    EXPECT_NEAR(c32.c_nd, gamma_form, 1e-12 * gamma_form);
    EXPECT_NEAR(c32.c_nd, 1.0 / (4 * pi * pi * 2 * pi * pi), 1e-12 * gamma_form);
    EXPECT_NEAR(riesz_constant(3, 2.0), 2 * pi * pi, 1e-12);
    EXPECT_THROW(constants(4), InvalidArgument);
    EXPECT_THROW(constants(2, 2), InvalidArgument);
}

TEST(FractionalLaplacian, Zero) {
    ScalarField z(Geometry::cube(2, 32, -1, 1));
    for (double v : fractional_laplacian(z, 0.5).values) EXPECT_EQ(v, 0.0);
}

TEST(FractionalLaplacian, GaussianAgainstFiniteDifferences) {
    for (std::size_t n : {81u, 161u}) {
        Geometry g = Geometry::cube(2, n, -5, 5);
        ScalarField f = sample([](const Vec3& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1]) / 2); }, g);
        ScalarField L = fractional_laplacian(f, 1.0, FilterWindow{WindowKind::none, 0.0});
        const double h = g.spacing[0];
        double dev = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i)
            for (std::size_t j = 1; j + 1 < n; ++j) {
                double fd = -(f.at(i - 1, j) + f.at(i + 1, j) + f.at(i, j - 1) + f.at(i, j + 1) - 4 * f.at(i, j)) / (h * h);
                dev = std::max(dev, std::abs(L.at(i, j) - fd));
            }
        // 5-point stencil error is h^2/12 (f_xxxx + f_yyyy), at most h^2/2 here
        EXPECT_LE(dev, 0.5 * h * h) << "n=" << n;
    }
}

TEST(FractionalLaplacian, PlaneWaveEigenfunction) {
    const std::size_t N = 64;
    const double h = 0.1;
    Geometry g = Geometry::make(2, {N, N, 1}, {0, 0, 0}, {h, h, 1});
    const double k1 = 2 * pi * 3 / (N * h), k2 = 2 * pi * 2 / (N * h);
    ScalarField f = sample([&](const Vec3& x) { return std::cos(k1 * x[0] + k2 * x[1]); }, g);
    for (double alpha : {0.5, 1.0, 1.7}) {
        ScalarField L = fractional_laplacian(f, alpha);
        double factor = std::pow(k1 * k1 + k2 * k2, alpha);
        for (std::size_t i = 0; i < f.size(); ++i) ASSERT_NEAR(L.values[i], factor * f.values[i], 1e-6);
    }
}

TEST(Fbp, ZeroSinogram) {
    Sinogram g;
    g.directions = DirectionSet::half_circle(36);
    g.offsets = UniformGrid::symmetric(1.5, 64);
    g.data.assign(36 * 64, 0.0);
    for (double v : fbp_invert(g, Geometry::cube(2, 32, -1, 1)).values) EXPECT_EQ(v, 0.0);
}

TEST(Fbp, GaussianRoundTrip) {
    Geometry g = Geometry::cube(2, 512, -1.2, 1.2);
    ScalarField f = gaussian(g, {0.1, -0.05, 0}, 0.2);
    Sinogram s = project(f, 360, 512);
    ScalarField ff = fbp_invert(s, g);
    EXPECT_LE(relative_l2(ff, f), 0.01);
    FbpOptions bf;
    bf.path = FbpPath::backproject_first;
    EXPECT_LE(relative_l2(fbp_invert(s, g, bf), ff), 1e-3);
}

TEST(Fbp, DisksRoundTrip) {
    Geometry g = Geometry::cube(2, 256, -1, 1);
    PhantomSpec ps;
    ps.kind = PhantomKind::disks2d;
    ps.disks = shepp_logan_disks();
    ps.supersample = 4;
    ScalarField f = phantom(ps, g);
    EXPECT_LE(relative_l2(fbp_invert(project(f, 180, 256), g), f), 0.05);
}

TEST(Fbp, DirectionsAreValidated) {
    Sinogram g;
    g.directions = DirectionSet::half_circle(4);
    g.offsets = UniformGrid::symmetric(1.0, 8);
    g.data.assign(10, 0.0);
    EXPECT_THROW(fbp_invert(g, Geometry::cube(2, 8, -1, 1)), Error);
}

TEST(Potential, CoulombFarField3D) {
    Geometry g = Geometry::cube(3, 41, -1, 1);
    ScalarField f = gaussian(g, {0, 0, 0}, 0.06, 6.0);
    PotentialCheck pc = potential_check(f, 0.9, 600, 0.5);
    ASSERT_FALSE(pc.points.empty());
    double worst = 0.0;
    for (std::size_t i = 0; i < pc.points.size(); ++i) {
        double coulomb = 2 * pi / norm(pc.points[i]);
        worst = std::max(worst, std::abs(pc.back_projected[i] - coulomb) / coulomb);
    }
    EXPECT_LE(worst, 0.02);
}

TEST(Potential, ZeroAndLinearity) {
    Geometry g = Geometry::cube(2, 41, -1, 1);
    PotentialCheck z = potential_check(ScalarField(g), 0.5, 90);
    for (double v : z.back_projected) EXPECT_EQ(v, 0.0);
    for (double v : z.potential) EXPECT_EQ(v, 0.0);
    ScalarField f = gaussian(g, {0.1, 0, 0}, 0.2, 4.0);
    ScalarField f2 = f;
    for (double& v : f2.values) v *= 2;
    PotentialCheck a = potential_check(f, 0.5, 90), b = potential_check(f2, 0.5, 90);
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_NEAR(b.back_projected[i] / a.back_projected[i], 2.0, 1e-12);
        EXPECT_NEAR(b.potential[i] / a.potential[i], 2.0, 1e-12);
    }
    EXPECT_LE(a.max_relative_deviation, 0.02);
}

TEST(Codim, GaugeInvariance) {
    Geometry g = Geometry::cube(3, 32, -1.5, 1.5);
    ScalarField f = gaussian(g, {0.1, 0.2, -0.1}, 0.3, 5.0);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1, 1);
    for (const LineFrame& fr : orthonormal_line_frames(DirectionSet::fibonacci_hemisphere(20))) {
        double A[2][2] = {{1.0 + U(rng), U(rng)}, {U(rng), 1.5 + U(rng)}};
        double Y1 = 0.3 * U(rng), Y2 = 0.3 * U(rng);
        double v0 = codim_line(f, fr, Y1, Y2);
        double v1 = codim_line(f, transform_frame(fr, A), A[0][0] * Y1 + A[0][1] * Y2, A[1][0] * Y1 + A[1][1] * Y2);
        EXPECT_NEAR(v0, v1, 1e-10 * std::max(1.0, std::abs(v0)));
    }
}

TEST(Codim, BallChordAndZero) {
    Geometry g = Geometry::cube(3, 121, -1.2, 1.2);
    PhantomSpec ps;
    ps.kind = PhantomKind::ball3d;
    ps.disks = {{{0, 0, 0}, 1.0, 1.0}};
    ps.supersample = 3;
    ScalarField ball = phantom(ps, g);
    for (const LineFrame& fr : orthonormal_line_frames(DirectionSet::fibonacci_hemisphere(5)))
        EXPECT_NEAR(codim_line(ball, fr, 0.0, 0.0), 2.0, 0.01);
    ScalarField z(Geometry::cube(3, 16, -1, 1));
    LineTomograms lt = codim_forward(z, 30, UniformGrid::symmetric(1.8, 19));
    for (double v : lt.data) EXPECT_EQ(v, 0.0);
    for (double v : codim_invert(lt, z.geometry).values) EXPECT_EQ(v, 0.0);
}

TEST(Codim, SmallRoundTrip) {
    Geometry g = Geometry::cube(3, 40, -1.5, 1.5);
    ScalarField f = gaussian(g, {0.1, -0.05, 0.08}, 0.25, 5.0);
    LineTomograms lt = codim_forward(f, 300, UniformGrid::covering(effective_support_radius(f), g.spacing[0]));
    double w = 0.0;
    for (double x : lt.weights) w += x;
    EXPECT_NEAR(w, 4 * pi, 1e-10);
    EXPECT_LE(relative_l2(codim_invert(lt, g), f), 0.08);
}

TEST(Fbp, NoRegionOfInterestMode) {
    // zeroing the rows through a disk still leaves its interior determined by all other rows
    Geometry g = Geometry::cube(2, 128, -1, 1);
    ScalarField f = gaussian(g, {0.2, 0, 0}, 0.25, 4.0);
    Sinogram s = project(f, 90, 128);
    ScalarField base = fbp_invert(s, g);
    for (std::size_t d = 0; d < s.directions.size(); ++d)
        for (std::size_t j = 0; j < s.offsets.count; ++j)
            if (std::abs(s.offsets.at(j)) > 0.6) s.at(d, j) = 0.0;
    ScalarField cut = fbp_invert(s, g);
    double diff = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (norm(g.point(i)) < 0.3) diff = std::max(diff, std::abs(cut.values[i] - base.values[i]));
    EXPECT_GT(diff, 0.0);
}
