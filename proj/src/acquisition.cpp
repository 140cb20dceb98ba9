#include "tomokit/acquisition.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace tomokit {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::string noise_name(NoiseKind kind) { return kind == NoiseKind::poisson ? "poisson" : "none"; }

NoiseKind parse_noise(const std::string& name) {
    if (name == "none") return NoiseKind::none;
    if (name == "poisson") return NoiseKind::poisson;
    throw InvalidArgument("unknown noise model '" + name + "' (expected none or poisson)");
}

void ScanConfig::validate() const {
    if (!(I0 > 0) || !std::isfinite(I0)) throw InvalidArgument("scan: I0 must be positive");
    if (noise == NoiseKind::poisson && !(photon_count_scale > 0))
        throw InvalidArgument("scan: photon_count_scale must be positive for Poisson noise");
    directions.validate();
    if (directions.dim != 2) throw InvalidArgument("scan: parallel-beam geometry is planar");
    offsets.validate();
}

void IntensityTable::validate() const {
    if (!(I0 > 0)) throw InvalidArgument("intensity table: I0 must be positive");
    directions.validate();
    offsets.validate();
    if (intensities.size() != directions.size() * offsets.count)
        throw InvalidArgument("intensity table: size does not match its geometry");
}

IntensityTable scan(const ScalarField& mu, const ScanConfig& config) {
    config.validate();
    for (double v : mu.values)
        if (v < 0.0) throw InvariantViolation("nonnegative attenuation", "mu takes the value " + std::to_string(v));
    Sinogram g = radon_forward(mu, config.directions, config.offsets);
    IntensityTable t;
    t.directions = config.directions;
    t.offsets = config.offsets;
    t.I0 = config.I0;
    t.noise = config.noise;
    t.photon_count_scale = config.photon_count_scale;
    t.seed = config.seed;
    t.source_support_radius = g.source_support_radius;
    t.intensities.resize(g.data.size());
    const std::size_t n = g.data.size();
#pragma omp parallel for schedule(static)
    for (std::size_t r = 0; r < n; ++r) {
        double I = config.I0 * std::exp(-g.data[r]);
        if (config.noise == NoiseKind::poisson) {
            // per-ray stream: identical draws for any thread count
            std::mt19937_64 rng(splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(r))));
            std::poisson_distribution<long long> draw(config.photon_count_scale * I);
            I = static_cast<double>(draw(rng)) / config.photon_count_scale;
        }
        t.intensities[r] = I;
    }
    return t;
}

Sinogram log_normalize(const IntensityTable& table, std::size_t* floored) {
    table.validate();
    Sinogram g;
    g.dim = 2;
    g.directions = table.directions;
    g.offsets = table.offsets;
    g.source_support_radius = table.source_support_radius;
    g.data.resize(table.intensities.size());
    const double floor_value =
        table.noise == NoiseKind::poisson ? 0.5 / table.photon_count_scale : 0.5 * table.I0 * 1e-300;
    std::size_t count = 0;
    for (std::size_t r = 0; r < g.data.size(); ++r) {
        double I = table.intensities[r];
        if (I < 0.0 || !std::isfinite(I)) throw InvariantViolation("positive intensity", "intensity " + std::to_string(I));
        if (I <= 0.0) {
            I = floor_value;
            ++count;
        }
        g.data[r] = -std::log(I / table.I0);
    }
    if (count > 0) {
        std::ostringstream os;
        os << count << " zero-count rays floored at 0.5 counts";
        warn(os.str());
    }
    if (floored) *floored = count;
    return g;
}

}  // namespace tomokit
