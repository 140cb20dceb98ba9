#pragma once

#include <array>
#include <functional>
#include <string>

#include "tomokit/grid.hpp"
#include "tomokit/m2.hpp"

namespace tomokit {

enum class MapName { conformal_inversion, hyperbolic, custom };

std::string map_name(MapName name);
MapName parse_map_name(const std::string& name);

// Planar diffeomorphism q -> x = phi(q) away from its singular set.
struct PlaneDiffeomorphism {
    MapName name = MapName::custom;
    std::function<Vec3(const Vec3&)> forward;
    std::function<Vec3(const Vec3&)> inverse;
    std::function<double(const Vec3&)> jacobian;           // |det d phi / d q| at q
    std::function<double(const Vec3&)> singular_distance;  // distance from q to the singular set
};

// conformal_inversion: phi(q) = q/|q|^2, J = |q|^-4; hyperbolic: phi(q, p) = (1/q, p), J = q^-2.
PlaneDiffeomorphism builtin_map(MapName name);
PlaneDiffeomorphism builtin_map(const std::string& name);

struct CurvedOptions {
    double margin_cells = 3.0;        // exclusion band around the singular set
    double padding = 0.1;             // relative padding of the x-space box
    std::array<std::size_t, 2> x_shape{0, 0};  // 0: twice the q-grid shape
    bool conserve_mass = true;        // rescale the resampled density to the source mass
};

struct CurvedTomograms {
    MapName map = MapName::custom;
    M2Tomogram tomograms;  // rows over (mu, nu), X grids per row
    Geometry x_geometry;   // grid on which the pushed-forward density lives
    double margin = 0.0;   // physical exclusion radius in q-space
};

// f~(x) = f(phi^-1 x) / J(phi^-1 x) on an x-space grid enclosing phi(supp f).
ScalarField pushforward(const ScalarField& f, const PlaneDiffeomorphism& map, const CurvedOptions& options = {});
// f(q) = f~(phi(q)) J(q); points within `margin` of the singular set are set to 0 and counted.
ScalarField pullback(const ScalarField& fx, const PlaneDiffeomorphism& map, const Geometry& q_geometry, double margin,
                     std::size_t* masked = nullptr);

CurvedTomograms curved_forward(const ScalarField& f, const PlaneDiffeomorphism& map, const std::vector<Vec3>& mus,
                               std::size_t offsets, const CurvedOptions& options = {});
ScalarField curved_invert(const CurvedTomograms& t, const PlaneDiffeomorphism& map, const Geometry& q_geometry,
                          const M2InvertOptions& options = {}, std::size_t* masked = nullptr);

}  // namespace tomokit
