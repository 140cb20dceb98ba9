#pragma once

#include <cstddef>
#include <vector>

#include "tomokit/grid.hpp"
#include "tomokit/radon.hpp"

namespace tomokit {

struct DimensionalConstants {
    int n = 0;
    int d = 0;
    double a_n = 0.0;   // (f#)b = a_n f * 1/|x|
    double b_n = 0.0;   // spectrum of 1/|x| is b_n / |k|^(n-1)
    double c_nd = 0.0;  // f = c_nd (-Laplacian)^((n-d)/2) (f#)b
};

DimensionalConstants constants(int n, int d = 1);
double sphere_area(int n);  // |S^{n-1}|
// Spectrum of |x|^(-alpha) in R^n is b_{n,alpha} |k|^(alpha - n).
double riesz_constant(int n, double alpha);

enum class WindowKind { none, raised_cosine };

// Roll-off applied to spectral filters: 1 below (1-fraction)*k_max, cosine taper to 0 at k_max.
struct FilterWindow {
    WindowKind kind = WindowKind::raised_cosine;
    double fraction = 0.2;
    double operator()(double k, double k_max) const;
};

ScalarField fractional_laplacian(const ScalarField& f, double alpha, const FilterWindow& window = {});

enum class FbpPath { filter_first, backproject_first };

struct FbpOptions {
    FbpPath path = FbpPath::filter_first;
    FilterWindow window{};
    // Padding factor of the back-projection grid when filtering after back-projection.
    double padding = 2.0;
};

// Filtered back-projection onto `target`. Nonlocal for even dimensions: every
// output sample depends on every tomogram row, so no region-of-interest mode exists.
ScalarField fbp_invert(const Sinogram& g, const Geometry& target, const FbpOptions& options = {});
// Per-row filtering in X on an extended offset grid (used by the filter-first path).
Sinogram filter_sinogram(const Sinogram& g, const FilterWindow& window = {});

struct PotentialCheck {
    double max_relative_deviation = 0.0;
    std::vector<Vec3> points;
    std::vector<double> back_projected;  // (f#)b
    std::vector<double> potential;       // a_n (f * 1/|x|)
};
// Compares (f#)b with a_n (f * 1/|x|) at grid nodes within test_radius.
PotentialCheck potential_check(const ScalarField& f, double test_radius, std::size_t directions = 0,
                               double min_radius = 0.0);
// Integral of 1/|u| over the unit cell [-1/2,1/2]^n.
double singular_cell_constant(int n);

// Line family for the X-ray transform in R^3: each orientation u is the
// intersection direction of two frame rows eta (a 2x3 matrix), lines are
// {eta x = Y} on a 2-D grid of Y.
struct LineFrame {
    Vec3 eta1{};
    Vec3 eta2{};
    Vec3 direction() const;
    double gram_det() const;
};

struct LineTomograms {
    std::vector<LineFrame> frames;
    std::vector<double> weights;  // quadrature weights over line orientations (sum to 4*pi)
    UniformGrid offsets;          // Y grid, shared by both axes
    std::vector<double> data;     // [frame][Y1][Y2]
    double source_support_radius = 0.0;

    double at(std::size_t f, std::size_t i, std::size_t j) const {
        return data[(f * offsets.count + i) * offsets.count + j];
    }
    void validate() const;
};

// Orthonormal frames for the Fibonacci hemisphere orientations.
std::vector<LineFrame> orthonormal_line_frames(const DirectionSet& orientations);
// Gauge transform: rows replaced by A * (eta1; eta2), offsets by A * Y.
LineFrame transform_frame(const LineFrame& frame, const double A[2][2]);

// Integral of f along the line {eta1.x = Y1, eta2.x = Y2}, weighted by sqrt(det Gram).
double codim_line(const ScalarField& f, const LineFrame& frame, double Y1, double Y2);
LineTomograms codim_forward(const ScalarField& f, const std::vector<LineFrame>& frames,
                            const std::vector<double>& weights, const UniformGrid& offsets);
LineTomograms codim_forward(const ScalarField& f, std::size_t orientations, const UniformGrid& offsets);
ScalarField codim_invert(const LineTomograms& g, const Geometry& target, const FilterWindow& window = {},
                         double padding = 2.0);
ScalarField codim_back_project(const LineTomograms& g, const Geometry& target);

// Convolution of a unit-mass isotropic Gaussian of width s with |x|^(-beta) in R^n, at radius r.
double gaussian_riesz_potential(int n, double beta, double s, double r);

}  // namespace tomokit
