#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "tomokit/quantum.hpp"

using namespace tomokit;

namespace {

constexpr double pi = std::numbers::pi;

const UniformGrid xs{-8.0, 0.05, 321};
const Geometry phase = Geometry::cube(2, 481, -6.0, 6.0);

DensityMatrix level(int n) { return pure_state(oscillator_state(n, xs), xs); }

std::vector<double> eigenvalues(const DensityMatrix& rho) {
    const auto N = static_cast<Eigen::Index>(rho.size());
    Eigen::MatrixXcd M(N, N);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = 0; j < N; ++j) M(i, j) = rho(i, j) * rho.x.step;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + N);
    std::sort(ev.rbegin(), ev.rend());
    return ev;
}

// (q, p) grid on which the kernel spacing h_x = 2 h_q and N_p dp h_x = span
Geometry symbol_grid(double span, double xmax = 4.0) {
    const std::size_t Np = 200;
    const double dp = span / Np;
    const auto Nx = static_cast<std::size_t>(std::lround(2 * xmax / 0.05)) + 1;
    return Geometry::make(2, {Nx, Np, 1}, {-xmax, -0.5 * Np * dp, 0.0}, {0.05, dp, 1.0});
}

}  // namespace

TEST(DensityMatrix, PureGroundState) {
    DensityMatrix rho = level(0);
    DensityReport r = inspect_density(rho);
    EXPECT_NEAR(r.trace, 1.0, 1e-10);
    EXPECT_EQ(r.hermitian_deviation, 0.0);
    std::vector<double> ev = eigenvalues(rho);
    EXPECT_NEAR(ev[0], 1.0, 1e-8);
    EXPECT_NEAR(ev[1], 0.0, 1e-10);
    EXPECT_NO_THROW(check_density(rho));
}

TEST(DensityMatrix, EqualMixtureOfOrthogonalStates) {
    DensityMatrix rho = mixture({level(0), level(1)}, {0.5, 0.5});
    std::vector<double> ev = eigenvalues(rho);
    EXPECT_NEAR(ev[0], 0.5, 1e-8);
    EXPECT_NEAR(ev[1], 0.5, 1e-8);
    EXPECT_NEAR(ev[2], 0.0, 1e-10);
    EXPECT_THROW(mixture({level(0), level(1)}, {0.5, 0.6}), InvalidArgument);
}

TEST(DensityMatrix, NormalizationGate) {
    std::vector<cplx> psi = oscillator_state(0, xs);
    for (cplx& v : psi) v *= 1.1;
    EXPECT_THROW(pure_state(psi, xs, 1.0, true), InvariantViolation);
    DensityMatrix rescaled = pure_state(psi, xs);
    EXPECT_NEAR(inspect_density(rescaled).trace, 1.0, 1e-12);
}

TEST(Wigner, GroundStateAndNegativity) {
    WignerField w0 = wigner(level(0), phase);
    double e = 0.0;
    for (std::size_t i = 0; i < phase.size(); ++i) {
        Vec3 z = phase.point(i);
        if (std::abs(z[0]) <= 4 && std::abs(z[1]) <= 4)
            e = std::max(e, std::abs(w0.field.values[i] - std::exp(-(z[0] * z[0] + z[1] * z[1])) / pi));
    }
    EXPECT_LE(e, 1e-5);
    WignerField w1 = wigner(level(1), phase);
    EXPECT_NEAR(w1.field.at(240, 240), -1 / pi, 1e-5);
}

TEST(Wigner, Marginals) {
    // mixed state: position marginal is the diagonal, momentum marginal from the closed forms
    DensityMatrix rho = mixture({level(0), level(2)}, {0.3, 0.7});
    WignerField w = wigner(rho, phase);
    const double h = phase.spacing[0];
    for (std::size_t i = 0; i < 481; i += 4) {
        double sp = 0, sq = 0;
        for (std::size_t j = 0; j < 481; ++j) {
            sp += w.field.at(i, j) * h;
            sq += w.field.at(j, i) * h;
        }
        double q = phase.coord(0, i);
        // |psi_2|^2 = (2q^2 - 1)^2 e^{-q^2} / (2 sqrt(pi)); the momentum densities share the forms
        double d0 = std::exp(-q * q) / std::sqrt(pi), d2 = std::pow(2 * q * q - 1, 2) * std::exp(-q * q) / (2 * std::sqrt(pi));
        EXPECT_NEAR(sp, 0.3 * d0 + 0.7 * d2, 1e-5);
        EXPECT_NEAR(sq, 0.3 * d0 + 0.7 * d2, 1e-5);
        double diag = rho(static_cast<std::size_t>(std::lround((q + 8.0) / 0.05)), static_cast<std::size_t>(std::lround((q + 8.0) / 0.05))).real();
        EXPECT_NEAR(sp, diag, 1e-5);
    }
}

TEST(Wigner, NyquistGate) {
    UniformGrid coarse{-8.0, 0.5, 33};
    DensityMatrix rho = pure_state(oscillator_state(0, coarse), coarse);
    EXPECT_THROW(wigner(rho, phase), InvariantViolation);
}

TEST(Weyl, UnitSymbolIsTheIdentity) {
    Geometry g = symbol_grid(2 * pi / 0.1);
    ScalarField one = sample([](const Vec3&) { return 1.0; }, g);
    OperatorKernel K = weyl_quantize(one);
    ASSERT_NEAR(K.x.step, 0.1, 1e-15);
    for (std::size_t i = 0; i < K.size(); ++i)
        for (std::size_t j = 0; j < K.size(); ++j) EXPECT_NEAR(std::abs(K(i, j) - (i == j ? 10.0 : 0.0)), 0.0, 1e-8);
}

TEST(Weyl, PositionSymbolIsMultiplication) {
    Geometry g = symbol_grid(2 * pi / 0.1);
    ScalarField q = sample([](const Vec3& z) { return z[0]; }, g);
    OperatorKernel K = weyl_quantize(q);
    double off = 0.0, diag = 0.0;
    for (std::size_t i = 0; i < K.size(); ++i)
        for (std::size_t j = 0; j < K.size(); ++j) {
            if (i == j) diag = std::max(diag, std::abs(K(i, i) - K.x.at(i) / 0.1));
            else off = std::max(off, std::abs(K(i, j)));
        }
    EXPECT_LE(off, 1e-8);
    EXPECT_LE(diag, 1e-8);
}

TEST(Weyl, QuantizeDequantizeRoundTrip) {
    // wide enough in x that the symbol has decayed below the tolerance at the edge
    Geometry g = symbol_grid(pi / 0.1, 8.0);
    ScalarField s = sample([](const Vec3& z) { return std::exp(-(z[0] * z[0] + z[1] * z[1] / 4) / 2) * (1 + 0.2 * z[0]); }, g);
    ScalarField back = dequantize(weyl_quantize(s), g);
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) e = std::max(e, std::abs(back.values[i] - s.values[i]));
    EXPECT_LE(e, 1e-8);
}

TEST(Weyl, LatticeMismatchRejected) {
    Geometry g = symbol_grid(pi / 0.1);
    ScalarField s(g);
    EXPECT_THROW(weyl_quantize(s, 1.0, UniformGrid{-4.0, 0.07, 50}), InvalidArgument);
}

TEST(TracePairing, GaussianZeroAndSymmetry) {
    Geometry g = symbol_grid(pi / 0.1);
    ScalarField a = sample([](const Vec3& z) { return std::exp(-(z[0] * z[0] + z[1] * z[1]) / 2); }, g);
    ScalarField b = sample([](const Vec3& z) { return std::exp(-((z[0] - 0.4) * (z[0] - 0.4) + 2 * z[1] * z[1])); }, g);
    EXPECT_LE(trace_pairing(a, a).deviation, 1e-4);
    TracePairing ab = trace_pairing(a, b), ba = trace_pairing(b, a);
    EXPECT_LE(ab.deviation, 1e-4);
    EXPECT_NEAR(ab.lhs, ba.lhs, 1e-12 * std::abs(ab.lhs));
    EXPECT_NEAR(ab.rhs, ba.rhs, 1e-12 * std::abs(ab.rhs));
    TracePairing z = trace_pairing(a, ScalarField(g));
    EXPECT_EQ(z.lhs, 0.0);
    EXPECT_EQ(z.rhs, 0.0);
}

TEST(QuadratureTomograms, GroundStateRows) {
    QuadratureTomogramSet t = quadrature_tomograms(level(0), phase, 16, UniformGrid::covering(8.6, 0.025));
    EXPECT_EQ(t.violations, 0u);
    double e = 0.0;
    for (std::size_t r = 0; r < t.tomograms.rows(); ++r)
        for (std::size_t j = 0; j < t.tomograms.offsets[r].count; ++j) {
            double X = t.tomograms.offsets[r].at(j);
            e = std::max(e, std::abs(t.tomograms.data[t.tomograms.row_start(r) + j] - std::exp(-X * X) / std::sqrt(pi)));
        }
    EXPECT_LE(e, 1e-4);
}

TEST(QuadratureTomograms, PositionAndMomentumRows) {
    DensityMatrix rho = level(1);
    UniformGrid X = UniformGrid::covering(8.6, 0.025);
    QuadratureTomogramSet t = quadrature_tomograms(rho, phase, {{1, 0, 0}, {0, 1, 0}}, {X, X});
    UniformGrid pg{X.start, X.step, X.count};
    std::vector<double> mom = momentum_density(rho, pg);
    for (std::size_t j = 0; j < X.count; ++j) {
        double x = X.at(j);
        if (std::abs(x) > 5.5) continue;
        double pos = 2 * x * x * std::exp(-x * x) / std::sqrt(pi);
        EXPECT_NEAR(t.tomograms.data[j], pos, 1e-5);
        EXPECT_NEAR(t.tomograms.data[X.count + j], mom[j], 1e-5);
        EXPECT_NEAR(mom[j], pos, 1e-8);
    }
}

TEST(Reconstruct, PureStatesAndNegativity) {
    const Geometry small = Geometry::cube(2, 121, -3, 3);
    for (int n : {0, 1}) {
        DensityMatrix rho = level(n);
        QuadratureTomogramSet t = quadrature_tomograms(rho, phase, 64, UniformGrid::covering(8.6, 0.05));
        ReconstructReport rep;
        DensityMatrix rec = reconstruct_density(t, xs, {}, &rep);
        EXPECT_GE(fidelity(rec, oscillator_state(n, xs)), 0.99) << n;
        EXPECT_LE(rep.trace_correction, 0.05);
        if (n == 1) EXPECT_LT(wigner(rec, small).field.at(60, 60), 0.0);
    }
}

TEST(Reconstruct, RandomMixtureFidelity) {
    DensityMatrix rho = mixture({level(0), level(1), level(2)}, {0.2, 0.45, 0.35});
    QuadratureTomogramSet t = quadrature_tomograms(rho, phase, 64, UniformGrid::covering(8.6, 0.05));
    DensityMatrix rec = reconstruct_density(t, xs);
    EXPECT_GE(fidelity(rho, rec), 0.99);
    StateMoments m = moments(rec);
    EXPECT_GE(m.var_q * m.var_p, 0.25 * (1 - 1e-3));
}

TEST(Reconstruct, ZeroRowsRejected) {
    QuadratureTomogramSet t = quadrature_tomograms(level(0), phase, 64, UniformGrid::covering(8.6, 0.05));
    std::fill(t.tomograms.data.begin(), t.tomograms.data.end(), 0.0);
    EXPECT_THROW(reconstruct_density(t, xs), InvariantViolation);
}

TEST(Reconstruct, AngularCoverageGate) {
    QuadratureTomogramSet t = quadrature_tomograms(level(0), phase, 16, UniformGrid::covering(8.6, 0.05));
    EXPECT_THROW(reconstruct_density(t, xs), InvariantViolation);
}

TEST(Moments, GroundStateSaturatesUncertainty) {
    StateMoments m = moments(level(0));
    EXPECT_NEAR(m.mean_q, 0.0, 1e-12);
    EXPECT_NEAR(m.mean_p, 0.0, 1e-12);
    EXPECT_NEAR(m.var_q, 0.5, 1e-8);
    EXPECT_NEAR(m.var_p, 0.5, 1e-8);
    StateMoments m3 = moments(level(3));
    EXPECT_NEAR(m3.var_q * m3.var_p, 3.5 * 3.5, 1e-6);
}

TEST(Expectation, EnergyOfTheGroundState) {
    Geometry g = Geometry::make(2, {641, 200, 1}, {-8.0, -10 * pi, 0.0}, {0.025, pi / 10, 1.0});
    ScalarField H = sample([](const Vec3& z) { return 0.5 * (z[0] * z[0] + z[1] * z[1]); }, g);
    EXPECT_NEAR(expectation(level(0), H).real(), 0.5, 1e-6);
    ScalarField h2 = sample([](const Vec3& z) { return 0.5 * (z[0] * z[0] + z[1] * z[1]); }, phase);
    EXPECT_NEAR(phase_space_average(wigner(level(1), phase), h2), 1.5, 1e-6);
}
