#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "tomokit/errors.hpp"

namespace tomokit {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Uniform 1-D grid: start + j*step for j in [0, count).
struct UniformGrid {
    double start = 0.0;
    double step = 1.0;
    std::size_t count = 0;

    double at(std::size_t j) const { return start + static_cast<double>(j) * step; }
    double end() const { return at(count - 1); }

    // count points spanning [-half_width, half_width].
    static UniformGrid symmetric(double half_width, std::size_t count);
    // Smallest symmetric grid with the given step reaching at least half_width.
    static UniformGrid covering(double half_width, double step);
    void validate() const;
};

// Uniform sampling geometry of an n-dimensional box (n <= 3). Unused axes have shape 1.
struct Geometry {
    int dim = 0;
    std::array<std::size_t, 3> shape{1, 1, 1};
    Vec3 origin{0.0, 0.0, 0.0};
    Vec3 spacing{1.0, 1.0, 1.0};

    static Geometry make(int dim, std::array<std::size_t, 3> shape, Vec3 origin, Vec3 spacing);
    // n points per axis spanning [lo, hi] on every axis.
    static Geometry cube(int dim, std::size_t n, double lo, double hi);

    std::size_t size() const { return shape[0] * shape[1] * shape[2]; }
    std::size_t index(std::size_t i, std::size_t j = 0, std::size_t k = 0) const {
        return (i * shape[1] + j) * shape[2] + k;
    }
    std::array<std::size_t, 3> unravel(std::size_t flat) const;
    double coord(int axis, std::size_t i) const { return origin[axis] + static_cast<double>(i) * spacing[axis]; }
    Vec3 point(std::size_t flat) const;
    double min_spacing() const;
    double max_spacing() const;
    double cell_volume() const;
    // Largest distance from the coordinate origin to a corner of the box.
    double bounding_radius() const;
    bool contains(const Vec3& x, double tol = 0.0) const;
    void validate() const;
    bool same_as(const Geometry& other, double tol = 1e-12) const;
};

template <class T>
struct Field {
    Geometry geometry;
    std::vector<T> values;
    double support_radius = 0.0;  // 0 means unknown

    Field() = default;
    explicit Field(const Geometry& g, double support = 0.0)
        : geometry(g), values(g.size(), T{}), support_radius(support) {}

    std::size_t size() const { return values.size(); }
    T& operator[](std::size_t i) { return values[i]; }
    const T& operator[](std::size_t i) const { return values[i]; }
    T& at(std::size_t i, std::size_t j = 0, std::size_t k = 0) { return values[geometry.index(i, j, k)]; }
    const T& at(std::size_t i, std::size_t j = 0, std::size_t k = 0) const {
        return values[geometry.index(i, j, k)];
    }
};

using ScalarField = Field<double>;
using ComplexField = Field<cplx>;

// Samples of the continuum transform on the centred wave-number lattice
// k_j = (j - floor(N/2)) * 2*pi/(N*h) per axis.
struct Spectrum {
    Geometry spatial;
    std::vector<cplx> values;

    double k_spacing(int axis) const;
    double k_at(int axis, std::size_t j) const;
    Vec3 k_point(std::size_t flat) const;
    // Largest |k| on an axis that is still sampled symmetrically.
    double nyquist(int axis) const;
};

using PointFunction = std::function<double(const Vec3&)>;

ScalarField sample(const PointFunction& fn, const Geometry& geometry, double support_radius = 0.0);

double integrate(const ScalarField& f);
cplx integrate(const ComplexField& f);
// Trapezoid weights of one axis (product rule builds the n-D weights).
std::vector<double> trapezoid_weights(std::size_t count, double step);
double trapezoid(const std::vector<double>& values, double step);

double interpolate(const ScalarField& f, const Vec3& x);
cplx interpolate(const ComplexField& f, const Vec3& x);

// Radius beyond which the multilinear interpolant of f vanishes.
double effective_support_radius(const ScalarField& f);
// Throws InvariantViolation when a sample beyond support_radius is non-zero.
void check_support(const ScalarField& f);
double max_abs(const ScalarField& f);
double l2_norm(const ScalarField& f);
// ||a - b|| / ||b|| with trapezoid weights; geometries must match.
double relative_l2(const ScalarField& a, const ScalarField& b);

Spectrum dft_forward(const ScalarField& f);
Spectrum dft_forward(const ComplexField& f);
ComplexField dft_inverse(const Spectrum& spectrum);
// Drops the imaginary part after checking it is below tol * max|z|.
ScalarField real_part(const ComplexField& f, double tol = 1e-10);
// Continuum transform of the sampled field evaluated directly at an arbitrary k
// (the trigonometric interpolant of the discrete spectrum).
cplx spectrum_at(const ScalarField& f, const Vec3& k);
// Same along the ray tau * direction for a batch of tau values.
std::vector<cplx> spectrum_along_ray(const ScalarField& f, const Vec3& direction, const std::vector<double>& taus);

enum class PhantomKind { disks2d, gaussian_mix, ball3d };

struct Disk {
    Vec3 center{};
    double radius = 1.0;
    double weight = 1.0;
};

struct GaussianComponent {
    Vec3 center{};
    double sigma = 1.0;
    double weight = 1.0;  // integral of the component
};

struct PhantomSpec {
    PhantomKind kind = PhantomKind::disks2d;
    std::vector<Disk> disks;  // disks2d and ball3d
    std::vector<GaussianComponent> gaussians;
    // ball3d profile: weight*(1-(r/R)^2)^smoothness, 0 gives the indicator.
    int smoothness = 0;
    // Sub-samples per axis per cell for indicator shapes (1 = point sampling).
    int supersample = 1;
    // Gaussian components are cut off at this many sigmas.
    double gaussian_cutoff = 8.0;
    bool normalize = false;
};

// Shepp-Logan-like arrangement of nested disks inside the unit disk, all weights positive.
std::vector<Disk> shepp_logan_disks();
ScalarField phantom(const PhantomSpec& spec, const Geometry& geometry);

}  // namespace tomokit
