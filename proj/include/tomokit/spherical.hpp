#pragma once

#include <cstddef>

#include "tomokit/grid.hpp"

namespace tomokit {

// Means of a 3-D density over unit spheres, indexed by the sphere centre.
struct SphereMeanField {
    ScalarField field;
    double source_support_radius = 0.0;
};

struct SphereOptions {
    std::size_t points = 600;  // Fibonacci points on the unit sphere (>= 500)
};

SphereMeanField sphere_mean_forward(const ScalarField& f, const Geometry& centers, const SphereOptions& options = {});
// Mean of f over the sphere of the given radius about x, using the point set scaled by radius^2.
double sphere_mean_at(const ScalarField& f, const Vec3& x, double radius, const SphereOptions& options = {});

enum class LaplacianKind { finite_difference, spectral };

struct JohnOptions {
    std::size_t points = 600;  // points on the unit sphere; radius r uses points * r^2
    LaplacianKind laplacian = LaplacianKind::finite_difference;
    int extra_terms = 0;       // series terms beyond the support bound (for the tail check)
};

struct JohnReport {
    int terms = 0;             // largest number of series terms used at any point
    double tail_relative = 0;  // max |first omitted term| / max |partial sum|
};

// Inverts unit-sphere means of a density supported in |x| <= R on the grid of g.
// Output is evaluated inside the support ball and is zero outside it.
ScalarField john_invert(const SphereMeanField& g, double R, const JohnOptions& options = {}, JohnReport* report = nullptr);

}  // namespace tomokit
