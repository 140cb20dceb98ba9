#include <gtest/gtest.h>

#include <cmath>

#include "tomokit/acquisition.hpp"
#include "tomokit/invert.hpp"

using namespace tomokit;

namespace {

ScanConfig config(const ScalarField& mu, std::size_t angles, std::size_t offsets) {
    ScanConfig c;
    c.directions = DirectionSet::half_circle(angles);
    c.offsets = UniformGrid::symmetric(effective_support_radius(mu), offsets);
    return c;
}

ScalarField disks(const Geometry& g) {
    PhantomSpec ps;
    ps.kind = PhantomKind::disks2d;
    ps.disks = shepp_logan_disks();
    ps.supersample = 4;
    return phantom(ps, g);
}

}  // namespace

TEST(Scan, VacuumGivesI0) {
    ScalarField mu(Geometry::cube(2, 32, -1, 1));
    ScanConfig c = config(mu, 8, 17);
    c.I0 = 3.5;
    for (double I : scan(mu, c).intensities) EXPECT_EQ(I, 3.5);
    Sinogram s = log_normalize(scan(mu, c));
    for (double v : s.data) EXPECT_EQ(v, 0.0);
}

TEST(Scan, SlabBeerLambert) {
    // nodes on the slab faces carry half weight so the interpolant integrates to c L
    const double c = 0.8, L = 0.6;
    Geometry g = Geometry::cube(2, 101, -1, 1);
    ScalarField mu = sample(
        [&](const Vec3& x) {
            double y = std::abs(x[1]);
            if (y < L / 2 - 1e-9) return c;
            if (std::abs(y - L / 2) < 1e-9) return c / 2;
            return 0.0;
        },
        g);
    ScanConfig cfg;
    cfg.directions = DirectionSet::from_angles({0.0}, {2 * 3.141592653589793});
    cfg.offsets = UniformGrid::symmetric(1.5, 31);
    IntensityTable t = scan(mu, cfg);
    // rays with |X| <= 0.9 cross the whole slab inside the box
    for (std::size_t j = 6; j <= 24; ++j) EXPECT_NEAR(t.intensities[j], std::exp(-c * L), 1e-6) << j;
}

TEST(Scan, CentralRayThroughUnitDisk) {
    Geometry g = Geometry::cube(2, 401, -1.1, 1.1);
    PhantomSpec ps;
    ps.kind = PhantomKind::disks2d;
    ps.disks = {{{0, 0, 0}, 1.0, 1.0}};
    ps.supersample = 4;
    ScalarField mu = phantom(ps, g);
    ScanConfig c = config(mu, 4, 21);
    IntensityTable t = scan(mu, c);
    for (std::size_t d = 0; d < 4; ++d) EXPECT_NEAR(t.intensities[d * 21 + 10], std::exp(-2.0), 0.005 * std::exp(-2.0));
}

TEST(Scan, Monotonicity) {
    Geometry g = Geometry::cube(2, 64, -1, 1);
    ScalarField a = disks(g);
    ScalarField b = a;
    for (std::size_t i = 0; i < b.size(); ++i) b.values[i] += 0.3 * std::exp(-norm(g.point(i)) * 4);
    ScanConfig c = config(b, 30, 64);
    IntensityTable ta = scan(a, c), tb = scan(b, c);
    for (std::size_t i = 0; i < ta.intensities.size(); ++i) EXPECT_LE(tb.intensities[i], ta.intensities[i]);
}

TEST(Scan, NegativeAttenuationRejected) {
    ScalarField mu = sample([](const Vec3& x) { return x[0]; }, Geometry::cube(2, 16, -1, 1));
    EXPECT_THROW(scan(mu, config(mu, 4, 16)), InvariantViolation);
}

TEST(Pipeline, NoiselessAndPoisson) {
    Geometry g = Geometry::cube(2, 256, -1, 1);
    ScalarField mu = disks(g);
    ScanConfig c = config(mu, 180, 256);
    Sinogram direct = radon_forward(mu, c.directions, c.offsets);
    Sinogram logs = log_normalize(scan(mu, c));
    for (std::size_t i = 0; i < direct.data.size(); ++i) ASSERT_NEAR(logs.data[i], direct.data[i], 1e-6);
    double clean = relative_l2(fbp_invert(logs, g), mu);
    EXPECT_LE(clean, 0.05);
    c.noise = NoiseKind::poisson;
    c.photon_count_scale = 1e5;
    c.seed = 42;
    IntensityTable n1 = scan(mu, c), n2 = scan(mu, c);
    EXPECT_EQ(n1.intensities, n2.intensities);
    double noisy = relative_l2(fbp_invert(log_normalize(n1), g), mu);
    EXPECT_LE(noisy, 0.08);
    EXPECT_GT(noisy, clean);
    c.seed = 43;
    EXPECT_NE(scan(mu, c).intensities, n1.intensities);
}

TEST(LogNormalize, ZeroCountsAreFloored) {
    Geometry g = Geometry::cube(2, 64, -1, 1);
    ScalarField mu = sample([](const Vec3& x) { return norm(x) < 0.5 ? 40.0 : 0.0; }, g);
    ScanConfig c = config(mu, 8, 33);
    c.noise = NoiseKind::poisson;
    c.photon_count_scale = 100;
    c.seed = 1;
    std::size_t floored = 0;
    Sinogram s = log_normalize(scan(mu, c), &floored);
    EXPECT_GT(floored, 0u);
    for (double v : s.data) EXPECT_TRUE(std::isfinite(v));
    EXPECT_NEAR(*std::max_element(s.data.begin(), s.data.end()), -std::log(0.5 / 100), 1e-12);
}

TEST(Noise, Names) {
    EXPECT_EQ(parse_noise("poisson"), NoiseKind::poisson);
    EXPECT_EQ(noise_name(NoiseKind::none), "none");
    EXPECT_THROW(parse_noise("gauss"), InvalidArgument);
}
