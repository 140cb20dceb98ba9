#include "tomokit/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "tomokit/acquisition.hpp"
#include "tomokit/curved.hpp"
#include "tomokit/invert.hpp"
#include "tomokit/m2.hpp"
#include "tomokit/parallel.hpp"
#include "tomokit/quantum.hpp"
#include "tomokit/radon.hpp"
#include "tomokit/spherical.hpp"

namespace tomokit {

namespace {

constexpr double pi = std::numbers::pi;

using Checks = std::vector<CheckResult>;

void at_most(Checks& out, std::string name, double value, double bound, std::string detail = {}) {
    out.push_back({std::move(name), value, bound, false, std::isfinite(value) && value <= bound, std::move(detail)});
}

void at_least(Checks& out, std::string name, double value, double bound, std::string detail = {}) {
    out.push_back({std::move(name), value, bound, true, std::isfinite(value) && value >= bound, std::move(detail)});
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ScalarField gaussian(const Geometry& g, const Vec3& c, double sigma, double cutoff = 8.0) {
    PhantomSpec ps;
    ps.kind = PhantomKind::gaussian_mix;
    ps.gaussians = {{c, sigma, 1.0}};
    ps.gaussian_cutoff = cutoff;
    return phantom(ps, g);
}

ScalarField disks(const Geometry& g) {
    PhantomSpec ps;
    ps.kind = PhantomKind::disks2d;
    ps.disks = shepp_logan_disks();
    ps.supersample = 4;
    return phantom(ps, g);
}

Sinogram project(const ScalarField& f, std::size_t angles, std::size_t offsets) {
    return radon_forward(f, DirectionSet::half_circle(angles), UniformGrid::symmetric(effective_support_radius(f), offsets));
}

// Simpson rule on [0, b] with an even number of panels
double simpson(const std::function<double(double)>& fn, double b, std::size_t panels) {
    if (panels % 2) ++panels;
    const double h = b / static_cast<double>(panels);
    double acc = fn(0.0) + fn(b);
    for (std::size_t i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * fn(h * static_cast<double>(i));
    return acc * h / 3.0;
}

// ---------------------------------------------------------------- 1
Checks constant_identities() {
    Checks out;
    for (int n : {2, 3}) {
        DimensionalConstants c = constants(n, 1);
        double target = 2.0 * std::pow(2.0 * pi, n - 1);
        at_most(out, "a_n b_n = 2(2pi)^(n-1), n=" + std::to_string(n), rel(c.a_n * c.b_n, target), 1e-12);
    }
    at_most(out, "c_{2,1} = 1/(4 pi)", rel(constants(2, 1).c_nd, 1.0 / (4.0 * pi)), 1e-12);
    for (auto [n, d] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
        DimensionalConstants c = constants(n, d);
        at_most(out, "c_{n,d} = 1/(a_n^d b), b the spectrum constant of |x|^-d, (n,d)=(" + std::to_string(n) + "," + std::to_string(d) + ")",
                rel(c.c_nd, 1.0 / (std::pow(c.a_n, d) * riesz_constant(n, d))), 1e-12);
    }
    // spectrum of a Gaussian-windowed 1/|x| at |k| = k0 tends to b_n / k0^(n-1)
    const double s = 20.0;
    for (double k0 : {1.0, 2.5}) {
        auto window = [&](double r) { return std::exp(-r * r / (2.0 * s * s)); };
        double two = 2.0 * pi * simpson([&](double r) { return window(r) * std::cyl_bessel_j(0.0, k0 * r); }, 10.0 * s, 400000);
        double three = 4.0 * pi / k0 * simpson([&](double r) { return window(r) * std::sin(k0 * r); }, 10.0 * s, 400000);
        std::ostringstream k;
        k << ", k=" << k0;
        at_most(out, "b_2 from the spectrum of 1/|x|" + k.str(), rel(two * k0, constants(2, 1).b_n), 0.01);
        at_most(out, "b_3 from the spectrum of 1/|x|" + k.str(), rel(three * k0 * k0, constants(3, 1).b_n), 0.01);
    }
    return out;
}

// ---------------------------------------------------------------- 2
Checks probability_transport() {
    Checks out;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double rmin = INFINITY, mdev = 0.0;
    double m2min = INFINITY, m2dev = 0.0;
    double cmin = INFINITY, cdev = 0.0;
    double qmin = INFINITY, qdev = 0.0;
    const Geometry g2 = Geometry::cube(2, 241, -3.0, 3.0);
    const Geometry gq = Geometry::cube(2, 256, -2.5, 2.5);
    const UniformGrid x{-8.0, 0.05, 321};
    const Geometry ps = Geometry::cube(2, 241, -6.0, 6.0);
    for (int trial = 0; trial < 5; ++trial) {
        PhantomSpec spec;
        spec.kind = PhantomKind::gaussian_mix;
        spec.normalize = true;
        int comps = 1 + static_cast<int>(U(rng) * 3);
        for (int c = 0; c < comps; ++c)
            spec.gaussians.push_back({{1.2 * U(rng) - 0.6, 1.2 * U(rng) - 0.6, 0.0}, 0.2 + 0.2 * U(rng), 0.2 + U(rng)});
        spec.gaussian_cutoff = 6.0;
        ScalarField f = phantom(spec, g2);
        Sinogram g = project(f, 24, 301);
        std::vector<UniformGrid> offs(g.directions.size(), g.offsets);
        DensityRowReport r = density_rows(g.data, offs);
        rmin = std::min(rmin, r.min_value);
        mdev = std::max(mdev, r.max_mass_deviation);

        std::vector<Vec3> mus;
        for (std::size_t d = 0; d < 24; ++d) {
            double th = pi * U(rng), lam = 0.25 + 2.5 * U(rng);
            mus.push_back({lam * std::cos(th), lam * std::sin(th), 0.0});
        }
        M2Tomogram t = m2_forward(f, mus, 301);
        r = density_rows(t.data, t.offsets);
        m2min = std::min(m2min, r.min_value);
        m2dev = std::max(m2dev, r.max_mass_deviation);

        // smooth annulus profile with a random angular modulation
        const double rc = 1.4 + 0.2 * U(rng), wd = 0.35 + 0.1 * U(rng), amp = 0.8 * U(rng), ph = 2.0 * pi * U(rng);
        const int lobes = 1 + static_cast<int>(U(rng) * 3);
        ScalarField fq = sample(
            [&](const Vec3& q) {
                double u = (std::hypot(q[0], q[1]) - rc) / wd;
                if (std::abs(u) >= 1.0) return 0.0;
                double b = 1.0 - u * u;
                return b * b * b * (1.0 + amp * std::cos(lobes * std::atan2(q[1], q[0]) + ph));
            },
            gq);
        const double mass = integrate(fq);
        for (double& v : fq.values) v /= mass;
        std::vector<Vec3> cm;
        for (std::size_t d = 0; d < 16; ++d) {
            double th = pi * static_cast<double>(d) / 16.0, lam = 0.5 + U(rng);
            cm.push_back({lam * std::cos(th), lam * std::sin(th), 0.0});
        }
        CurvedTomograms ct = curved_forward(fq, builtin_map(MapName::conformal_inversion), cm, 512);
        r = density_rows(ct.tomograms.data, ct.tomograms.offsets);
        cmin = std::min(cmin, r.min_value);
        cdev = std::max(cdev, r.max_mass_deviation);

        // random three-state mixture
        double w0 = U(rng), w1 = U(rng), w2 = U(rng), s = w0 + w1 + w2;
        std::vector<DensityMatrix> states;
        for (int n = 0; n < 3; ++n) states.push_back(pure_state(oscillator_state(n, x), x));
        DensityMatrix rho = mixture(states, {w0 / s, w1 / s, w2 / s});
        QuadratureTomogramSet qt = quadrature_tomograms(rho, ps, 16, UniformGrid::covering(8.6, 0.05));
        r = density_rows(qt.tomograms.data, qt.tomograms.offsets);
        qmin = std::min({qmin, r.min_value, qt.min_value});
        qdev = std::max(qdev, r.max_mass_deviation);
    }
    at_least(out, "Radon rows nonnegative", rmin, -1e-9);
    at_most(out, "Radon rows normalized", mdev, 1e-5);
    at_least(out, "M2 rows nonnegative", m2min, -1e-9);
    at_most(out, "M2 rows normalized", m2dev, 1e-5);
    at_least(out, "circle-family rows nonnegative", cmin, -1e-9);
    at_most(out, "circle-family rows normalized", cdev, 1e-5);
    at_least(out, "quadrature rows nonnegative (before clipping)", qmin, -1e-9);
    at_most(out, "quadrature rows normalized", qdev, 1e-5);
    return out;
}

// ---------------------------------------------------------------- 3
Checks fourier_slice() {
    Checks out;
    ScalarField f = gaussian(Geometry::cube(2, 2801, -4.5, 4.5), {0, 0, 0}, 1.0, 20.0);
    std::vector<double> taus;
    for (int i = 0; i <= 12; ++i) taus.push_back(0.5 * i);
    DirectionSet dirs = DirectionSet::half_circle(32);
    double dev = 0.0, herm = 0.0;
    for (const Vec3& xi : dirs.directions) {
        SliceCheck c = fourier_slice_check(f, xi, taus);
        dev = std::max(dev, c.max_deviation);
        herm = std::max(herm, c.hermitian_deviation);
    }
    at_most(out, "tomogram spectrum = 2-D spectrum on rays (32 directions, |tau| <= 6)", dev, 1e-6);
    at_most(out, "Hermitian symmetry of the slice", herm, 1e-12);
    return out;
}

// ---------------------------------------------------------------- 4
Checks translation() {
    Checks out;
    ScalarField f = gaussian(Geometry::cube(2, 501, -5.0, 5.0), {0.2, -0.1, 0}, 1.0, 4.0);
    double dev = 0.0;
    for (double th : {0.0, pi / 6, pi / 3, pi / 2, 2 * pi / 3, 0.9}) {
        dev = std::max(dev, translate_covariance_check(f, {0.5, 0.0, 0.0}, {std::cos(th), std::sin(th), 0.0}));
    }
    dev = std::max(dev, translate_covariance_check(f, {0.31, -0.17, 0.0}, {std::cos(0.4), std::sin(0.4), 0.0}));
    at_most(out, "shifted tomogram = tomogram of the shifted density", dev, 1e-4);
    return out;
}

// ---------------------------------------------------------------- 5
Checks moment_homogeneity() {
    Checks out;
    PhantomSpec spec;
    spec.kind = PhantomKind::gaussian_mix;
    spec.normalize = true;
    spec.gaussian_cutoff = 6.0;
    spec.gaussians = {{{0.3, -0.2, 0}, 0.25, 1.0}, {{-0.25, 0.35, 0}, 0.3, 0.6}};
    ScalarField f = phantom(spec, Geometry::cube(2, 301, -3.0, 3.0));
    Sinogram g = project(f, 16, 401);
    for (int k = 0; k <= 2; ++k)
        at_most(out, "degree-" + std::to_string(k) + " fit of the k-th moments (16 angles)", fit_homogeneous_moments(g, k).residual,
                1e-4);
    PhantomSpec ball;
    ball.kind = PhantomKind::ball3d;
    ball.disks = {{{0.1, 0.0, -0.1}, 0.7, 1.0}};
    ball.smoothness = 3;
    ball.normalize = true;
    ScalarField f3 = phantom(ball, Geometry::cube(3, 81, -1.0, 1.0));
    Sinogram g3 = radon_forward(f3, DirectionSet::fibonacci_hemisphere(24), UniformGrid::symmetric(effective_support_radius(f3), 161));
    for (int k = 0; k <= 2; ++k)
        at_most(out, "3-D degree-" + std::to_string(k) + " moment fit (24 directions)", fit_homogeneous_moments(g3, k).residual, 1e-4);
    return out;
}

// ---------------------------------------------------------------- 6
Checks fbp_round_trip() {
    Checks out;
    Geometry gd = Geometry::cube(2, 256, -1.0, 1.0);
    ScalarField d = disks(gd);
    at_most(out, "disks, 180 x 256", relative_l2(fbp_invert(project(d, 180, 256), gd), d), 0.05);
    double err[2];
    ScalarField rec[2], truth[2];
    int i = 0;
    for (auto [na, no] : {std::pair<std::size_t, std::size_t>{180, 256}, {360, 512}}) {
        Geometry g = Geometry::cube(2, no, -1.2, 1.2);
        truth[i] = gaussian(g, {0.1, -0.05, 0}, 0.2);
        rec[i] = fbp_invert(project(truth[i], na, no), g);
        err[i] = relative_l2(rec[i], truth[i]);
        ++i;
    }
    at_most(out, "Gaussian, 360 x 512", err[1], 0.01);
    at_least(out, "error ratio under resolution doubling", err[0] / err[1], 1.5);
    FbpOptions bf;
    bf.path = FbpPath::backproject_first;
    ScalarField other = fbp_invert(project(truth[1], 360, 512), truth[1].geometry, bf);
    at_most(out, "filter-first vs back-project-first", relative_l2(other, rec[1]), 1e-3);
    return out;
}

// ---------------------------------------------------------------- 7
Checks m2_round_trip() {
    Checks out;
    Geometry g = Geometry::cube(2, 512, -1.2, 1.2);
    ScalarField f = gaussian(g, {0.1, -0.05, 0}, 0.2);
    Sinogram sg = project(f, 256, 512);
    std::vector<double> scales;
    for (std::size_t d = 0; d < sg.directions.size(); ++d) scales.push_back(d % 3 == 0 ? 1.0 : (d % 3 == 1 ? 0.5 : 2.0));
    M2Tomogram t = m2_from_radon(sg, scales);
    ScalarField rec = m2_invert(t, g);
    at_most(out, "Gaussian, 256 directions x 512 offsets", relative_l2(rec, f), 0.01);
    ScalarField fb = fbp_invert(sg, g);
    at_most(out, "M2 vs FBP on the Gaussian", relative_l2(rec, fb), 0.02);
    Sinogram back = radon_from_m2(t);
    double dev = 0.0;
    for (std::size_t i = 0; i < back.data.size(); ++i) dev = std::max(dev, std::abs(back.data[i] - sg.data[i]));
    at_most(out, "Radon -> M2 -> Radon", dev, 1e-10);
    at_most(out, "homogeneity of stored rows", m2_homogeneity_check(t), 1e-12);

    Geometry gd = Geometry::cube(2, 256, -1.0, 1.0);
    ScalarField d = disks(gd);
    ScalarField rd = m2_invert(m2_from_radon(project(d, 256, 512)), gd);
    at_most(out, "disks, 256 directions x 512 offsets", relative_l2(rd, d), 0.06);
    return out;
}

// ---------------------------------------------------------------- 8
Checks codim() {
    Checks out;
    Geometry g = Geometry::cube(3, 64, -1.5, 1.5);
    ScalarField f = gaussian(g, {0.1, -0.05, 0.08}, 0.25, 5.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double dev = 0.0, scale = 0.0;
    for (const LineFrame& fr : orthonormal_line_frames(DirectionSet::fibonacci_hemisphere(40))) {
        double A[2][2];
        do {
            for (auto& row : A)
                for (double& v : row) v = 2.0 * U(rng);
        } while (std::abs(A[0][0] * A[1][1] - A[0][1] * A[1][0]) < 0.2);
        double Y1 = 0.5 * U(rng), Y2 = 0.5 * U(rng);
        double v0 = codim_line(f, fr, Y1, Y2);
        double v1 = codim_line(f, transform_frame(fr, A), A[0][0] * Y1 + A[0][1] * Y2, A[1][0] * Y1 + A[1][1] * Y2);
        dev = std::max(dev, std::abs(v0 - v1));
        scale = std::max(scale, std::abs(v0));
    }
    at_most(out, "gauge invariance under random GL(2)", dev / scale, 1e-10);
    LineTomograms lt = codim_forward(f, 800, UniformGrid::covering(effective_support_radius(f), g.spacing[0]));
    at_most(out, "line-transform round trip, 64^3, 800 orientations", relative_l2(codim_invert(lt, g), f), 0.08);
    return out;
}

// ---------------------------------------------------------------- 9
Checks spherical() {
    Checks out;
    ScalarField G = sample([](const Vec3& x) { return std::exp(-dot(x, x) / 2.0); }, Geometry::cube(3, 121, -4.5, 4.5));
    double e = 0.0;
    for (int i = 0; i <= 12; ++i) {
        double r = 0.25 * i;
        Vec3 x{0.48 * r, 0.6 * r, 0.64 * r};
        double exact = r == 0.0 ? std::exp(-0.5) : std::exp(-(r * r + 1.0) / 2.0) * std::sinh(r) / r;
        e = std::max(e, std::abs(sphere_mean_at(G, x, 1.0) - exact));
    }
    at_most(out, "Gaussian sphere means vs radial closed form (r <= 3)", e, 1e-3);
    Geometry g = Geometry::cube(3, 96, -2.3, 2.3);
    ScalarField f = sample(
        [](const Vec3& x) {
            double r2 = dot(x, x);
            if (r2 >= 1.0) return 0.0;
            double b = 1.0 - r2;
            return b * b * b * b * (1.0 + 0.3 * x[0]);
        },
        g, 1.0);
    SphereMeanField sm = sphere_mean_forward(f, g);
    JohnOptions jo;
    JohnReport rep;
    ScalarField rec = john_invert(sm, 1.0, jo, &rep);
    at_most(out, "series inversion round trip, 96^3", relative_l2(rec, f), 0.08);
    at_most(out, "first omitted series term (relative)", rep.tail_relative, 1e-8);
    return out;
}

// ---------------------------------------------------------------- 10
Checks curved() {
    Checks out;
    const std::size_t nq = 256;
    std::vector<Vec3> mus;
    for (std::size_t j = 0; j < 256; ++j) {
        double th = pi * static_cast<double>(j) / 256.0, lam = j % 3 == 0 ? 1.0 : (j % 3 == 1 ? 0.5 : 2.0);
        mus.push_back({lam * std::cos(th), lam * std::sin(th), 0.0});
    }
    Geometry gc = Geometry::cube(2, nq, -2.5, 2.5);
    ScalarField ring = sample(
        [](const Vec3& q) {
            double u = (std::hypot(q[0], q[1]) - 1.5) / 0.45;
            if (std::abs(u) >= 1.0) return 0.0;
            double b = 1.0 - u * u;
            return b * b * b * (1.0 + 0.5 * std::cos(2.0 * q[0]));
        },
        gc);
    double m = integrate(ring);
    for (double& v : ring.values) v /= m;
    PlaneDiffeomorphism circle = builtin_map(MapName::conformal_inversion);
    CurvedOptions fine;
    fine.x_shape = {4 * nq, 4 * nq};
    CurvedTomograms ct = curved_forward(ring, circle, mus, 513, fine);
    at_most(out, "circle family round trip (annulus)", relative_l2(curved_invert(ct, circle, gc), ring), 0.06);
    // lines through the origin are fixed by the inversion: f^phi(0, mu) = Radon[f |q|^2](0, mu/|mu|) / |mu|
    double dev = 0.0, peak = 0.0;
    const double ds = gc.spacing[0] / 8.0;
    for (std::size_t r = 0; r < mus.size(); r += 4) {
        double lam = norm(mus[r]);
        Vec3 xi{mus[r][0] / lam, mus[r][1] / lam, 0.0};
        double acc = 0.0;
        for (double s = -3.0; s <= 3.0; s += ds) acc += interpolate(ring, {-xi[1] * s, xi[0] * s, 0.0}) * s * s;
        double oracle = acc * ds / lam;
        dev = std::max(dev, std::abs(ct.tomograms.value(r, 0.0) - oracle));
        peak = std::max(peak, std::abs(oracle));
    }
    at_most(out, "X=0 circle rows vs straight-line data", dev / peak, 1e-4);

    Geometry gh = Geometry::make(2, {nq, nq, 1}, {-0.5, -2.5, 0.0}, {3.5 / (nq - 1.0), 5.0 / (nq - 1.0), 1.0});
    ScalarField strip = sample(
        [](const Vec3& q) {
            double u = (q[0] - 1.5) / 0.7;
            if (std::abs(u) >= 1.0 || std::abs(q[1]) >= 1.8) return 0.0;
            double b = 1.0 - u * u, c = 1.0 - q[1] * q[1] / 3.24;
            return b * b * b * c * c * c;
        },
        gh);
    m = integrate(strip);
    for (double& v : strip.values) v /= m;
    PlaneDiffeomorphism hyper = builtin_map(MapName::hyperbolic);
    CurvedTomograms ht = curved_forward(strip, hyper, mus, 512);
    at_most(out, "hyperbola family round trip (strip)", relative_l2(curved_invert(ht, hyper, gh), strip), 0.06);
    return out;
}

// ---------------------------------------------------------------- 11
Checks quantum() {
    Checks out;
    const UniformGrid x{-8.0, 0.05, 321};
    const Geometry ps = Geometry::cube(2, 481, -6.0, 6.0);
    DensityMatrix r0 = pure_state(oscillator_state(0, x), x);
    WignerField w0 = wigner(r0, ps);
    double e = 0.0, mq = 0.0, mp = 0.0;
    for (std::size_t i = 0; i < w0.field.size(); ++i) {
        Vec3 p = ps.point(i);
        if (std::abs(p[0]) <= 4.0 && std::abs(p[1]) <= 4.0)
            e = std::max(e, std::abs(w0.field.values[i] - std::exp(-(p[0] * p[0] + p[1] * p[1])) / pi));
    }
    at_most(out, "ground-state Wigner function", e, 1e-5);
    DensityMatrix r1 = pure_state(oscillator_state(1, x), x);
    WignerField w1 = wigner(r1, ps);
    at_most(out, "first excited state W(0,0) = -1/pi", std::abs(w1.field.at(240, 240) + 1.0 / pi), 1e-5);
    // marginals of the first excited state
    const double h = ps.spacing[0];
    for (std::size_t i = 0; i < 481; ++i) {
        double sp = 0.0, sq = 0.0;
        for (std::size_t j = 0; j < 481; ++j) {
            sp += w1.field.at(i, j) * h;
            sq += w1.field.at(j, i) * h;
        }
        double q = ps.coord(0, i);
        // |psi_1(q)|^2 and |psi_1^(p)|^2 / (2 pi) share the form 2 q^2 e^{-q^2} / sqrt(pi)
        double exact = 2.0 * q * q * std::exp(-q * q) / std::sqrt(pi);
        mq = std::max(mq, std::abs(sp - exact));
        mp = std::max(mp, std::abs(sq - exact));
    }
    at_most(out, "position marginal", mq, 1e-5);
    at_most(out, "momentum marginal", mp, 1e-5);

    // symbols on a grid whose p span matches the x spacing of the quantized kernels
    // p span pi hbar / h_x for the kernel spacing h_x = 0.1
    const Geometry sym = Geometry::make(2, {321, 200, 1}, {-8.0, -5.0 * pi, 0.0}, {0.05, pi / 20.0, 1.0});
    ScalarField sigma = sample([](const Vec3& z) { return std::exp(-(z[0] * z[0] + z[1] * z[1]) / 2.0); }, sym);
    ScalarField tau = sample([](const Vec3& z) { return std::exp(-((z[0] - 0.5) * (z[0] - 0.5) + z[1] * z[1] / 2.0)); }, sym);
    at_most(out, "trace pairing", trace_pairing(sigma, tau).deviation, 1e-4);
    at_most(out, "trace pairing (sigma = tau)", trace_pairing(sigma, sigma).deviation, 1e-4);

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<DensityMatrix> basis{r0, r1, pure_state(oscillator_state(2, x), x)};
    double worst = 1.0, floor_ratio = INFINITY;
    for (int trial = 0; trial < 2; ++trial) {
        double a = U(rng), b = U(rng), c = U(rng), s = a + b + c;
        DensityMatrix rho = mixture(basis, {a / s, b / s, c / s});
        QuadratureTomogramSet t = quadrature_tomograms(rho, ps, 64, UniformGrid::covering(8.6, h));
        DensityMatrix rec = reconstruct_density(t, x);
        worst = std::min(worst, fidelity(rho, rec));
        StateMoments m = moments(rec);
        floor_ratio = std::min(floor_ratio, m.var_q * m.var_p / 0.25);
    }
    QuadratureTomogramSet t0 = quadrature_tomograms(r0, ps, 64, UniformGrid::covering(8.6, h));
    DensityMatrix rec0 = reconstruct_density(t0, x);
    StateMoments m0 = moments(rec0);
    floor_ratio = std::min(floor_ratio, m0.var_q * m0.var_p / 0.25);
    at_least(out, "reconstruction fidelity, random 3-state mixtures", worst, 0.99);
    at_least(out, "Var(q) Var(p) / (hbar^2/4) of reconstructions", floor_ratio, 1.0 - 1e-3);
    return out;
}

// ---------------------------------------------------------------- 12
Checks pipeline() {
    Checks out;
    Geometry g = Geometry::cube(2, 256, -1.0, 1.0);
    ScalarField mu = disks(g);
    ScanConfig cfg;
    cfg.I0 = 1.0;
    cfg.directions = DirectionSet::half_circle(180);
    cfg.offsets = UniformGrid::symmetric(effective_support_radius(mu), 256);
    Sinogram direct = radon_forward(mu, cfg.directions, cfg.offsets);
    Sinogram logs = log_normalize(scan(mu, cfg));
    double dev = 0.0;
    for (std::size_t i = 0; i < direct.data.size(); ++i) dev = std::max(dev, std::abs(direct.data[i] - logs.data[i]));
    at_most(out, "log-normalized scan vs Radon data", dev, 1e-6);
    ScalarField a = fbp_invert(logs, g), b = fbp_invert(direct, g);
    at_most(out, "FBP of scan vs FBP of Radon data", relative_l2(a, b), 1e-6);
    double clean = relative_l2(a, mu);
    at_most(out, "noiseless pipeline vs phantom", clean, 0.05);
    cfg.noise = NoiseKind::poisson;
    cfg.photon_count_scale = 1e5;
    cfg.seed = 12345;
    IntensityTable n1 = scan(mu, cfg);
    int threads = thread_count();
    set_threads(std::max(2, threads));
    IntensityTable n2 = scan(mu, cfg);
    set_threads(threads);
    double noisy = relative_l2(fbp_invert(log_normalize(n1), g), mu);
    at_most(out, "Poisson pipeline (1e5 counts) vs phantom", noisy, 0.08);
    at_least(out, "noise increases the error", noisy - clean, 1e-12);
    double differing = 0.0;
    for (std::size_t i = 0; i < n1.intensities.size(); ++i)
        if (std::memcmp(&n1.intensities[i], &n2.intensities[i], sizeof(double)) != 0) ++differing;
    at_most(out, "seeded runs bit-identical (differing samples)", differing, 0.0);
    return out;
}

// ---------------------------------------------------------------- 13
Checks nonlocality() {
    Checks out;
    Geometry g = Geometry::cube(2, 256, -1.0, 1.0);
    ScalarField f = disks(g);
    Sinogram s = project(f, 180, 256);
    ScalarField base = fbp_invert(s, g);
    auto inside_diff = [&](const Sinogram& changed, double r) {
        ScalarField other = fbp_invert(changed, g);
        double acc = 0.0;
        for (std::size_t i = 0; i < base.size(); ++i)
            if (norm(g.point(i)) < r) acc += (other.values[i] - base.values[i]) * (other.values[i] - base.values[i]);
        return std::sqrt(acc * g.cell_volume());
    };
    const double r = 0.3;
    Sinogram inner = s;
    for (std::size_t d = 0; d < inner.directions.size(); ++d)
        for (std::size_t j = 0; j < inner.offsets.count; ++j)
            if (std::abs(inner.offsets.at(j)) < r) inner.at(d, j) = 0.0;
    at_least(out, "zeroing |X| < r changes the image inside r (L2)", inside_diff(inner, r), 1e-6);
    // rows for lines missing the disk still reach its interior
    Sinogram outer = s;
    for (std::size_t d = 0; d < outer.directions.size(); ++d)
        for (std::size_t j = 0; j < outer.offsets.count; ++j)
            if (std::abs(outer.offsets.at(j)) > 0.5) outer.at(d, j) = 0.0;
    at_least(out, "zeroing |X| > 0.5 changes the image inside r = 0.3 (L2)", inside_diff(outer, r), 1e-6);
    return out;
}

struct Entry {
    const char* title;
    Checks (*run)();
};

const Entry entries[criterion_count] = {
    {"dimensional constants", constant_identities},
    {"probability transport", probability_transport},
    {"Fourier slice identity", fourier_slice},
    {"translation covariance", translation},
    {"moment homogeneity", moment_homogeneity},
    {"filtered back-projection", fbp_round_trip},
    {"M2 inversion and bijection", m2_round_trip},
    {"line transform in R^3", codim},
    {"spherical means", spherical},
    {"curved families", curved},
    {"quantum tomography", quantum},
    {"acquisition pipeline", pipeline},
    {"nonlocality in the plane", nonlocality},
};

std::string format_number(double v) {
    std::ostringstream os;
    os << std::setprecision(3) << std::scientific << v;
    return os.str();
}

}  // namespace

bool CriterionResult::passed() const {
    if (!error.empty() || checks.empty()) return false;
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string criterion_title(int number) {
    if (number < 1 || number > criterion_count) throw InvalidArgument("criterion number out of range");
    return entries[number - 1].title;
}

CriterionResult run_criterion(int number) {
    CriterionResult r;
    r.number = number;
    r.title = criterion_title(number);
    auto t0 = std::chrono::steady_clock::now();
    try {
        r.checks = entries[number - 1].run();
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<std::string> suite_names() {
    return {"all", "constants", "probability", "radon", "fbp", "m2", "codim", "spherical", "curved", "quantum", "pipeline"};
}

std::vector<int> suite_criteria(const std::string& suite) {
    if (suite == "all") {
        std::vector<int> all;
        for (int i = 1; i <= criterion_count; ++i) all.push_back(i);
        return all;
    }
    if (suite == "constants") return {1};
    if (suite == "probability") return {2};
    if (suite == "radon") return {3, 4, 5};
    if (suite == "fbp") return {6, 13};
    if (suite == "m2") return {7};
    if (suite == "codim") return {8};
    if (suite == "spherical") return {9};
    if (suite == "curved") return {10};
    if (suite == "quantum") return {11};
    if (suite == "pipeline") return {12};
    throw InvalidArgument("unknown suite '" + suite + "'");
}

void print_table(std::ostream& out, const std::vector<CriterionResult>& results) {
    for (const CriterionResult& r : results) {
        out << (r.passed() ? "PASS" : "FAIL") << "  [" << r.number << "] " << r.title << "  (" << std::fixed
            << std::setprecision(1) << r.seconds << " s)\n";
        out.unsetf(std::ios::floatfield);
        if (!r.error.empty()) out << "        error: " << r.error << '\n';
        for (const CheckResult& c : r.checks) {
            out << "    " << (c.passed ? "ok  " : "FAIL") << "  " << c.name << ": " << format_number(c.value)
                << (c.at_least ? " >= " : " <= ") << format_number(c.bound);
            if (!c.detail.empty()) out << "  (" << c.detail << ')';
            out << '\n';
        }
    }
}

}  // namespace tomokit
