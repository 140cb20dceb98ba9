#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tomokit/grid.hpp"
#include "tomokit/radon.hpp"

namespace tomokit {

enum class NoiseKind { none, poisson };

std::string noise_name(NoiseKind kind);
NoiseKind parse_noise(const std::string& name);

// Parallel-beam acquisition: one ray per (direction, detector offset).
struct ScanConfig {
    double I0 = 1.0;
    DirectionSet directions;
    UniformGrid offsets;
    NoiseKind noise = NoiseKind::none;
    double photon_count_scale = 1e5;  // expected counts per unit intensity
    std::uint64_t seed = 0;

    void validate() const;
};

struct IntensityTable {
    DirectionSet directions;
    UniformGrid offsets;
    std::vector<double> intensities;  // [direction][offset]
    double I0 = 1.0;
    NoiseKind noise = NoiseKind::none;
    double photon_count_scale = 1e5;
    std::uint64_t seed = 0;
    double source_support_radius = 0.0;

    void validate() const;
};

// I = I0 exp(-line integral of mu); Poisson mode draws counts ~ Poisson(scale I) and divides by scale.
IntensityTable scan(const ScalarField& mu, const ScanConfig& config);
// -ln(I / I0). Zero-count rays are floored at 0.5 counts (with a warning) and counted in `floored`.
Sinogram log_normalize(const IntensityTable& table, std::size_t* floored = nullptr);

}  // namespace tomokit
