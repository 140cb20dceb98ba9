#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tomokit/grid.hpp"

namespace tomokit {

// Quadrature nodes on the unit circle/sphere. Weights integrate over the full
// sphere: a set covering one hemisphere relies on the even identification
// g(X, xi) = g(-X, -xi) and carries the weight of both antipodes.
struct DirectionSet {
    int dim = 2;
    std::vector<Vec3> directions;
    std::vector<double> weights;

    std::size_t size() const { return directions.size(); }
    // theta_j = j*pi/N, weights 2*pi/N.
    static DirectionSet half_circle(std::size_t count);
    static DirectionSet from_angles(const std::vector<double>& angles, const std::vector<double>& weights);
    // Fibonacci points on the upper hemisphere, weights 4*pi/N.
    static DirectionSet fibonacci_hemisphere(std::size_t count);
    // Fibonacci points on the whole sphere, weights 4*pi/N.
    static DirectionSet fibonacci_sphere(std::size_t count);
    std::vector<double> angles() const;  // dim 2 only
    void validate() const;
};

struct Sinogram {
    int dim = 2;
    DirectionSet directions;
    UniformGrid offsets;
    std::vector<double> data;  // [direction][offset]
    double source_support_radius = 0.0;

    double& at(std::size_t d, std::size_t j) { return data[d * offsets.count + j]; }
    double at(std::size_t d, std::size_t j) const { return data[d * offsets.count + j]; }
    std::span<const double> row(std::size_t d) const { return {data.data() + d * offsets.count, offsets.count}; }
    // Linear interpolation in X; zero beyond the stored range.
    double value(std::size_t d, double X) const;
    void validate() const;
};

// Orthonormal in-plane frame of the hyperplane with normal xi (dim - 1 vectors).
std::array<Vec3, 2> plane_frame(const Vec3& xi, int dim);

// Integral of f over the hyperplane {x : xi.x = X}.
double radon_line(const ScalarField& f, const Vec3& xi, double X);
Sinogram radon_forward(const ScalarField& f, const DirectionSet& directions, const UniformGrid& offsets);
// Offsets at the field's finest spacing covering its effective support.
UniformGrid default_offsets(const ScalarField& f);

struct BackProjection {
    ScalarField field;
    bool truncated = false;  // some lookup needed data beyond a row with non-zero edge values
};

BackProjection back_project(const Sinogram& g, const Geometry& target);
std::vector<double> back_project_points(const Sinogram& g, const std::vector<Vec3>& points, bool* truncated = nullptr);

double moment(const Sinogram& g, int k, std::size_t direction_index);

double translate_covariance_check(const ScalarField& f, const Vec3& shift, const Vec3& xi);

struct SliceCheck {
    double max_deviation = 0.0;        // |tomogram spectrum - n-D spectrum along the ray|
    double hermitian_deviation = 0.0;  // |S(-tau) - conj S(tau)|
};
SliceCheck fourier_slice_check(const ScalarField& f, const Vec3& xi, const std::vector<double>& taus);

struct HomogeneousFit {
    std::vector<double> coefficients;  // monomials of degree k in lexicographic order
    double residual = 0.0;             // max |I(xi) - P(xi)| over the directions
};
// Least-squares fit of the k-th moments by a degree-k homogeneous polynomial in xi.
HomogeneousFit fit_homogeneous_moments(const Sinogram& g, int k);
HomogeneousFit fit_homogeneous(const DirectionSet& directions, const std::vector<double>& values, int k);

// Largest deviation of any row from being a probability density.
struct DensityRowReport {
    double min_value = 0.0;
    double max_mass_deviation = 0.0;
};
DensityRowReport density_rows(const std::vector<double>& data, const std::vector<UniformGrid>& offsets);

}  // namespace tomokit
