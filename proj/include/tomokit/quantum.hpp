#pragma once

#include <cstddef>
#include <vector>

#include "tomokit/grid.hpp"
#include "tomokit/m2.hpp"

namespace tomokit {

// Kernel K(x_i, x_j) of an operator on L2 of the line, row-major over a uniform x grid.
struct OperatorKernel {
    UniformGrid x;
    std::vector<cplx> values;
    double hbar = 1.0;

    OperatorKernel() = default;
    OperatorKernel(const UniformGrid& grid, double h) : x(grid), values(grid.count * grid.count), hbar(h) {}

    std::size_t size() const { return x.count; }
    cplx& operator()(std::size_t i, std::size_t j) { return values[i * x.count + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return values[i * x.count + j]; }
    void validate() const;
};

// Density matrices are kernels with unit trace, Hermitian and positive.
using DensityMatrix = OperatorKernel;

struct WignerField {
    ScalarField field;  // axis 0: q, axis 1: p
    double hbar = 1.0;
};

struct QuadratureTomogramSet {
    M2Tomogram tomograms;  // covector (mu, nu) per row, X grid per row
    double hbar = 1.0;
    std::size_t violations = 0;  // samples below -1e-9 before clipping
    double min_value = 0.0;      // smallest sample before clipping
};

// rho = psi psi*. Unnormalized psi is rescaled with a warning, or rejected when strict.
DensityMatrix pure_state(const std::vector<cplx>& psi, const UniformGrid& x, double hbar = 1.0, bool strict = false);
DensityMatrix mixture(const std::vector<DensityMatrix>& states, const std::vector<double>& weights);
// n-th eigenfunction of the oscillator with unit mass and frequency.
std::vector<cplx> oscillator_state(int n, const UniformGrid& x, double hbar = 1.0);

struct DensityReport {
    double trace = 0.0;
    double hermitian_deviation = 0.0;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
};

// Eigenvalues are those of the discretized operator h * K.
DensityReport inspect_density(const DensityMatrix& rho);
// Throws InvariantViolation on trace, Hermiticity or positivity failures.
void check_density(const DensityMatrix& rho);

// Wigner transform on a (q, p) grid. Throws when the grid cannot resolve the state.
WignerField wigner(const DensityMatrix& rho, const Geometry& phase_space);

// Weyl quantization of a symbol sampled on a (q, p) grid. The x grid must satisfy
// (x_i + x_j)/2 on the q lattice; the default takes every second q node.
OperatorKernel weyl_quantize(const ScalarField& sigma, double hbar = 1.0);
OperatorKernel weyl_quantize(const ScalarField& sigma, double hbar, const UniformGrid& x);
// sigma = 2 pi hbar W(K) on the given (q, p) grid.
ScalarField dequantize(const OperatorKernel& kernel, const Geometry& phase_space);

struct TracePairing {
    double lhs = 0.0;  // Tr(Op(sigma) Op(tau))
    double rhs = 0.0;  // phase-space integral of sigma tau / (2 pi hbar)
    double deviation = 0.0;
};

TracePairing trace_pairing(const ScalarField& sigma, const ScalarField& tau, double hbar = 1.0);

// Tomograms of the observables mu q + nu p, taken from the Wigner function on phase_space.
QuadratureTomogramSet quadrature_tomograms(const DensityMatrix& rho, const Geometry& phase_space,
                                           const std::vector<Vec3>& params, const std::vector<UniformGrid>& offsets);
// Unit covectors at angles j*pi/angles sharing one X grid.
QuadratureTomogramSet quadrature_tomograms(const DensityMatrix& rho, const Geometry& phase_space, std::size_t angles,
                                           const UniformGrid& offsets);

struct ReconstructOptions {
    std::size_t min_directions = 64;
    int oversample = 8;
    double max_trace_correction = 0.05;
    double normalization_tolerance = 1e-3;  // per-row mass deviation accepted on input
    bool clip_negative = false;             // project onto positive operators
};

struct ReconstructReport {
    double trace_correction = 0.0;  // |trace before renormalization - 1|
    double hermitian_correction = 0.0;
    double min_eigenvalue = 0.0;
    std::size_t directions = 0;
};

DensityMatrix reconstruct_density(const QuadratureTomogramSet& t, const UniformGrid& x,
                                  const ReconstructOptions& options = {}, ReconstructReport* report = nullptr);

// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);
// <psi, rho psi>.
double fidelity(const DensityMatrix& rho, const std::vector<cplx>& psi);

// Tr(Op(sigma) rho) by kernel quadrature; sigma lives on a q grid aligned with rho's x grid.
cplx expectation(const DensityMatrix& rho, const ScalarField& sigma);
// Phase-space average of sigma against W; both on the same grid.
double phase_space_average(const WignerField& w, const ScalarField& sigma);

struct StateMoments {
    double mean_q = 0.0, mean_p = 0.0;
    double var_q = 0.0, var_p = 0.0;
};

StateMoments moments(const DensityMatrix& rho);
// Momentum density of rho on the given p grid.
std::vector<double> momentum_density(const DensityMatrix& rho, const UniformGrid& p);

}  // namespace tomokit
