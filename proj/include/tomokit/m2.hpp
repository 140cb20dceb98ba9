#pragma once

#include <cstddef>
#include <vector>

#include "tomokit/grid.hpp"
#include "tomokit/radon.hpp"

namespace tomokit {

// Tomograms indexed by a non-zero covector mu; row r holds f^{M2}(X, mu_r) on its own X grid.
struct M2Tomogram {
    int dim = 2;
    std::vector<Vec3> mus;
    std::vector<UniformGrid> offsets;
    std::vector<double> data;     // rows concatenated in order
    std::vector<double> weights;  // optional quadrature weights of the unit directions
    double source_support_radius = 0.0;

    std::size_t rows() const { return mus.size(); }
    std::size_t row_start(std::size_t r) const;
    std::vector<double> row(std::size_t r) const;
    double value(std::size_t r, double X) const;  // linear in X, zero outside the row
    void validate() const;
};

// Rows for the given covectors; each row's X grid is `count` points covering |mu| times the support.
M2Tomogram m2_forward(const ScalarField& f, const std::vector<Vec3>& mus, std::size_t count);
M2Tomogram m2_forward(const ScalarField& f, const std::vector<Vec3>& mus, const std::vector<UniformGrid>& offsets);

// mu = scale * xi, X -> scale * X, data -> data / scale (scale 1 when omitted).
M2Tomogram m2_from_radon(const Sinogram& g, const std::vector<double>& scales = {});
// Inverse of m2_from_radon; rows are resampled onto `offsets` (default: the first unscaled row grid).
Sinogram radon_from_m2(const M2Tomogram& t, const UniformGrid* offsets = nullptr);

// f^{M2}(X, mu) for arbitrary mu parallel to a stored row, via the homogeneity rule.
double m2_query(const M2Tomogram& t, double X, const Vec3& mu);
double m2_normalization_check(const M2Tomogram& t);
// Largest deviation of data(X, mu) from (1/|mu|) data(X/|mu|, mu/|mu|) against stored unit rows.
double m2_homogeneity_check(const M2Tomogram& t);

// Spectrum of a planar density assembled from its tomograms by the slice identity:
// each unit-direction row gives f^(tau xi) along a ray; values in between are
// linear in angle and in tau.
class PolarSpectrum {
public:
    PolarSpectrum(const M2Tomogram& t, int oversample = 8);
    cplx operator()(double k1, double k2) const;
    double tau_max() const { return tau_max_; }
    std::size_t directions() const { return angles_.size(); }

private:
    cplx slice(std::size_t d, double tau) const;
    std::vector<double> angles_;            // sorted, in [0, pi)
    std::vector<std::vector<cplx>> slices_;  // tau_q = (q - Q) * dtau
    double dtau_ = 0.0;
    std::size_t half_ = 0;
    double tau_max_ = 0.0;
};

struct M2InvertOptions {
    int oversample = 8;
    std::size_t min_directions = 64;
};

struct M2InvertReport {
    bool sparse_coverage = false;
    std::size_t directions = 0;
};

ScalarField m2_invert(const M2Tomogram& t, const Geometry& target, const M2InvertOptions& options = {},
                      M2InvertReport* report = nullptr);

}  // namespace tomokit
