#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tomokit/radon.hpp"

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

Vec3 unit(double th) { return {std::cos(th), std::sin(th), 0.0}; }

}  // namespace

TEST(RadonForward, ZeroField) {
    ScalarField f(Geometry::cube(2, 32, -1, 1));
    Sinogram s = radon_forward(f, DirectionSet::half_circle(8), UniformGrid::symmetric(1.5, 21));
    for (double v : s.data) EXPECT_EQ(v, 0.0);
}

TEST(RadonForward, UnitDiskChords) {
    Geometry g = Geometry::cube(2, 441, -1.1, 1.1);
    ASSERT_NEAR(g.spacing[0], 0.005, 1e-12);
    PhantomSpec s;
    s.kind = PhantomKind::disks2d;
    s.disks = {{{0, 0, 0}, 1.0, 1.0}};
    s.supersample = 4;
    ScalarField f = phantom(s, g);
    for (double X : {0.0, 0.5}) {
        // brute-force chord: count dense samples of the line inside the disk
        const double ds = 1e-5;
        double chord = 0.0;
        for (double t = -1.2; t < 1.2; t += ds)
            if (X * X + t * t < 1.0) chord += ds;
        ASSERT_NEAR(chord, 2.0 * std::sqrt(1.0 - X * X), 1e-4);
        for (double th : {0.0, 0.7, 2.1}) EXPECT_NEAR(radon_line(f, unit(th), X), chord, 0.005 * chord);
    }
}

TEST(RadonForward, GaussianMarginal) {
    ScalarField f = gaussian(Geometry::cube(2, 241, -6, 6), {0, 0, 0}, 1.0, 5.0);
    Sinogram s = radon_forward(f, DirectionSet::half_circle(12), UniformGrid::symmetric(effective_support_radius(f), 101));
    double err = 0.0;
    for (std::size_t d = 0; d < 12; ++d)
        for (std::size_t j = 0; j < 101; ++j) {
            double X = s.offsets.at(j);
            err = std::max(err, std::abs(s.at(d, j) - std::exp(-X * X / 2) / std::sqrt(2 * pi)));
        }
    EXPECT_LE(err, 1e-4);
}

TEST(RadonForward, RowsAreProbabilityDensities) {
    PhantomSpec s;
    s.kind = PhantomKind::gaussian_mix;
    s.normalize = true;
    s.gaussians = {{{0.3, 0.1, 0}, 0.3, 1.0}, {{-0.4, -0.2, 0}, 0.25, 0.5}};
    ScalarField f = phantom(s, Geometry::cube(2, 201, -2.5, 2.5));
    Sinogram g = radon_forward(f, DirectionSet::half_circle(30), default_offsets(f));
    DensityRowReport r = density_rows(g.data, std::vector<UniformGrid>(30, g.offsets));
    EXPECT_GE(r.min_value, -1e-12);
    EXPECT_LE(r.max_mass_deviation, 1e-5);
}

TEST(BackProject, ZeroAndConstant) {
    Sinogram g;
    g.directions = DirectionSet::half_circle(90);
    g.offsets = UniformGrid::symmetric(3.0, 61);
    g.data.assign(90 * 61, 0.0);
    Geometry target = Geometry::cube(2, 21, -1, 1);
    for (double v : back_project(g, target).field.values) EXPECT_EQ(v, 0.0);
    std::fill(g.data.begin(), g.data.end(), 1.0);
    BackProjection b = back_project(g, target);
    for (double v : b.field.values) EXPECT_NEAR(v, 2 * pi, 1e-6);
}

TEST(BackProject, DualityPairing) {
    Geometry geo = Geometry::cube(2, 161, -2, 2);
    ScalarField f = gaussian(geo, {0.2, -0.1, 0}, 0.35, 6.0);
    DirectionSet dirs = DirectionSet::half_circle(180);
    UniformGrid X = UniformGrid::symmetric(2.9, 291);
    Sinogram rf = radon_forward(f, dirs, X);
    // smooth test function on lines
    Sinogram g = rf;
    for (std::size_t d = 0; d < dirs.size(); ++d)
        for (std::size_t j = 0; j < X.count; ++j) {
            double x = X.at(j), th = pi * d / 180.0;
            g.at(d, j) = std::exp(-x * x) * (1.0 + 0.3 * std::cos(2 * th) + 0.2 * x * std::sin(th));
        }
    // <f#, g> over (X, xi): rectangle rule in angle, trapezoid in X
    double lhs = 0.0;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        std::vector<double> prod(X.count);
        for (std::size_t j = 0; j < X.count; ++j) prod[j] = rf.at(d, j) * g.at(d, j);
        lhs += dirs.weights[d] * trapezoid(prod, X.step);
    }
    ScalarField gb = back_project(g, geo).field;
    ScalarField prod(geo);
    for (std::size_t i = 0; i < geo.size(); ++i) prod.values[i] = f.values[i] * gb.values[i];
    double rhs = integrate(prod);
    EXPECT_NEAR(lhs, rhs, 1e-3 * std::abs(rhs));
}

TEST(Moment, NormalizationCentreAndSymmetry) {
    Geometry geo = Geometry::cube(2, 481, -3, 3);
    Vec3 c{0.4, -0.3, 0};
    ScalarField f = gaussian(geo, c, 0.4, 6.0);
    Sinogram g = radon_forward(f, DirectionSet::half_circle(16), UniformGrid::symmetric(3.5, 351));
    // first moment oracle by direct 2-D quadrature of (xi.x) f
    for (std::size_t d = 0; d < 16; ++d) {
        const Vec3& xi = g.directions.directions[d];
        ScalarField w(geo);
        for (std::size_t i = 0; i < geo.size(); ++i) w.values[i] = dot(xi, geo.point(i)) * f.values[i];
        EXPECT_NEAR(moment(g, 0, d), 1.0, 1e-6);
        EXPECT_NEAR(moment(g, 1, d), integrate(w), 1e-4);
        EXPECT_NEAR(moment(g, 1, d), dot(xi, c), 1e-4);
    }
    ScalarField r = gaussian(geo, {0, 0, 0}, 0.5, 6.0);
    Sinogram gr = radon_forward(r, DirectionSet::half_circle(16), UniformGrid::symmetric(3.5, 351));
    for (std::size_t d = 1; d < 16; ++d) EXPECT_NEAR(moment(gr, 2, d), moment(gr, 2, 0), 1e-4);
    EXPECT_THROW(moment(g, 9, 0), InvalidArgument);
}

TEST(Moment, HomogeneousFit) {
    // linear interpolation adds about h^2/6 to the second moment, so keep h small
    ScalarField f = gaussian(Geometry::cube(2, 401, -2.5, 2.5), {0.3, -0.2, 0}, 0.3, 6.0);
    Sinogram g = radon_forward(f, DirectionSet::half_circle(12), UniformGrid::symmetric(2.5, 301));
    for (int k = 0; k <= 2; ++k) EXPECT_LE(fit_homogeneous_moments(g, k).residual, 1e-4) << k;
    // second moments of a Gaussian are xi.c^2 + sigma^2 xi.xi
    HomogeneousFit fit = fit_homogeneous_moments(g, 2);
    ASSERT_EQ(fit.coefficients.size(), 3u);
    EXPECT_NEAR(fit.coefficients[0], 0.09 + 0.09, 1e-4);
    EXPECT_NEAR(fit.coefficients[1], 2 * 0.3 * -0.2, 1e-4);
    EXPECT_NEAR(fit.coefficients[2], 0.04 + 0.09, 1e-4);
}

TEST(TranslateCovariance, Cases) {
    ScalarField f = gaussian(Geometry::cube(2, 301, -3, 3), {0.1, 0.0, 0}, 0.5, 4.0);
    EXPECT_LE(translate_covariance_check(f, {0, 0, 0}, unit(0.4)), 1e-12);
    // shift orthogonal to xi leaves the tomogram unchanged
    EXPECT_LE(translate_covariance_check(f, {0.0, 0.4, 0}, unit(0.0)), 1e-4);
    EXPECT_LE(translate_covariance_check(f, {0.5, 0.0, 0}, unit(0.0)), 1e-4);
}

TEST(TranslateCovariance, ShiftedGaussianClosedForm) {
    ScalarField f = gaussian(Geometry::cube(2, 301, -3, 3), {0.0, 0.0, 0}, 0.5, 5.0);
    ScalarField moved = gaussian(f.geometry, {0.5, 0.0, 0}, 0.5, 5.0);
    for (double X : {-0.2, 0.3, 0.5, 0.9}) {
        double exact = std::exp(-(X - 0.5) * (X - 0.5) / 0.5) / std::sqrt(0.5 * pi);
        EXPECT_NEAR(radon_line(moved, unit(0.0), X), exact, 1e-4);
    }
}

TEST(FourierSlice, ZeroFrequencyAndHermitian) {
    ScalarField f = gaussian(Geometry::cube(2, 241, -3, 3), {0.2, 0.1, 0}, 0.4, 6.0);
    // axis rays run through nodes, so the row mass is the grid sum exactly
    for (double th : {0.0, pi / 2}) EXPECT_LE(fourier_slice_check(f, unit(th), {0.0}).max_deviation, 1e-10) << th;
    // oblique rays carry the interpolation error of the line quadrature
    for (double th : {0.3, 0.8}) EXPECT_LE(fourier_slice_check(f, unit(th), {0.0}).max_deviation, 1e-6) << th;
    SliceCheck h = fourier_slice_check(f, unit(1.1), {0.5, 1.0, 2.0});
    EXPECT_LE(h.hermitian_deviation, 1e-12);
}

TEST(FourierSlice, GaussianAnalytic) {
    ScalarField f = gaussian(Geometry::cube(2, 601, -6, 6), {0, 0, 0}, 1.0, 12.0);
    std::vector<double> taus;
    for (int i = 0; i <= 12; ++i) taus.push_back(0.5 * i);
    for (double th : {0.0, 0.5, 1.3}) {
        std::vector<cplx> s = spectrum_along_ray(f, unit(th), taus);
        for (std::size_t i = 0; i < taus.size(); ++i) EXPECT_NEAR(std::abs(s[i] - std::exp(-taus[i] * taus[i] / 2)), 0.0, 1e-6);
    }
}

TEST(DirectionSet, WeightsIntegrateTheSphere) {
    double s = 0.0;
    for (double w : DirectionSet::half_circle(37).weights) s += w;
    EXPECT_NEAR(s, 2 * pi, 1e-12);
    s = 0.0;
    for (double w : DirectionSet::fibonacci_hemisphere(100).weights) s += w;
    EXPECT_NEAR(s, 4 * pi, 1e-12);
    for (const Vec3& d : DirectionSet::fibonacci_hemisphere(100).directions) EXPECT_NEAR(norm(d), 1.0, 1e-12);
}
