#include "tomokit/curved.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tomokit {

std::string map_name(MapName name) {
    switch (name) {
        case MapName::conformal_inversion: return "conformal_inversion";
        case MapName::hyperbolic: return "hyperbolic";
        case MapName::custom: return "custom";
    }
    return "custom";
}

MapName parse_map_name(const std::string& name) {
    if (name == "conformal_inversion" || name == "circle") return MapName::conformal_inversion;
    if (name == "hyperbolic" || name == "hyperbola") return MapName::hyperbolic;
    throw InvalidArgument("unknown map '" + name + "' (expected conformal_inversion or hyperbolic)");
}

PlaneDiffeomorphism builtin_map(MapName name) {
    PlaneDiffeomorphism m;
    m.name = name;
    if (name == MapName::conformal_inversion) {
        auto inv = [](const Vec3& q) {
            double r2 = q[0] * q[0] + q[1] * q[1];
            return Vec3{q[0] / r2, q[1] / r2, 0.0};
        };
        m.forward = inv;
        m.inverse = inv;
        m.jacobian = [](const Vec3& q) {
            double r2 = q[0] * q[0] + q[1] * q[1];
            return 1.0 / (r2 * r2);
        };
        m.singular_distance = [](const Vec3& q) { return std::hypot(q[0], q[1]); };
        return m;
    }
    if (name == MapName::hyperbolic) {
        auto inv = [](const Vec3& q) { return Vec3{1.0 / q[0], q[1], 0.0}; };
        m.forward = inv;
        m.inverse = inv;
        m.jacobian = [](const Vec3& q) { return 1.0 / (q[0] * q[0]); };
        m.singular_distance = [](const Vec3& q) { return std::abs(q[0]); };
        return m;
    }
    throw InvalidArgument("builtin_map: custom maps must be supplied by the caller");
}

PlaneDiffeomorphism builtin_map(const std::string& name) { return builtin_map(parse_map_name(name)); }

namespace {

void check_map(const PlaneDiffeomorphism& m) {
    if (!m.forward || !m.inverse || !m.jacobian || !m.singular_distance)
        throw InvalidArgument("diffeomorphism is missing a component");
}

}  // namespace

ScalarField pushforward(const ScalarField& f, const PlaneDiffeomorphism& map, const CurvedOptions& options) {
    check_map(map);
    const Geometry& gq = f.geometry;
    if (gq.dim != 2) throw InvalidArgument("curved families are planar");
    const double margin = options.margin_cells * gq.max_spacing();
    double lo[2] = {INFINITY, INFINITY}, hi[2] = {-INFINITY, -INFINITY};
    bool any = false;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.values[i] == 0.0) continue;
        Vec3 q = gq.point(i);
        if (map.singular_distance(q) <= margin) {
            std::ostringstream os;
            os << "density is non-zero at q = (" << q[0] << ", " << q[1] << "), within " << margin
               << " of the singular set";
            throw InvariantViolation("singular set", os.str());
        }
        // every cell touching a non-zero node contributes its corners
        for (int c = 0; c < 4; ++c) {
            Vec3 corner{q[0] + ((c & 1) ? 1 : -1) * gq.spacing[0], q[1] + ((c & 2) ? 1 : -1) * gq.spacing[1], 0.0};
            if (map.singular_distance(corner) <= 0.0) continue;
            Vec3 x = map.forward(corner);
            for (int a = 0; a < 2; ++a) {
                lo[a] = std::min(lo[a], x[a]);
                hi[a] = std::max(hi[a], x[a]);
            }
        }
        any = true;
    }
    std::array<std::size_t, 2> shape = options.x_shape;
    for (int a = 0; a < 2; ++a)
        if (shape[a] == 0) shape[a] = 2 * gq.shape[a];
    if (!any) {
        Geometry gx = Geometry::make(2, {shape[0], shape[1], 1}, {-1.0, -1.0, 0.0},
                                     {2.0 / static_cast<double>(shape[0] - 1), 2.0 / static_cast<double>(shape[1] - 1), 1.0});
        return ScalarField(gx);
    }
    // box symmetric about the origin so that the Radon offsets stay centred
    Vec3 origin{0, 0, 0}, spacing{1, 1, 1};
    for (int a = 0; a < 2; ++a) {
        double ext = std::max(std::abs(lo[a]), std::abs(hi[a])) * (1.0 + options.padding);
        origin[a] = -ext;
        spacing[a] = 2.0 * ext / static_cast<double>(shape[a] - 1);
    }
    Geometry gx = Geometry::make(2, {shape[0], shape[1], 1}, origin, spacing);
    ScalarField fx(gx);
    double rmax = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i) {
        Vec3 x = gx.point(i);
        if (x[0] == 0.0 && x[1] == 0.0 && map.name == MapName::conformal_inversion) continue;
        if (map.name == MapName::hyperbolic && x[0] == 0.0) continue;
        Vec3 q = map.inverse(x);
        if (!std::isfinite(q[0]) || !std::isfinite(q[1])) continue;
        if (map.singular_distance(q) <= margin) continue;
        double v = interpolate(f, q);
        if (v == 0.0) continue;
        fx.values[i] = v / map.jacobian(q);
        rmax = std::max(rmax, norm(x));
    }
    fx.support_radius = rmax;
    if (options.conserve_mass) {
        double m0 = integrate(f), m1 = integrate(fx);
        if (m0 != 0.0 && m1 != 0.0)
            for (double& v : fx.values) v *= m0 / m1;
    }
    return fx;
}

ScalarField pullback(const ScalarField& fx, const PlaneDiffeomorphism& map, const Geometry& gq, double margin,
                     std::size_t* masked) {
    check_map(map);
    ScalarField f(gq);
    std::size_t count = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        Vec3 q = gq.point(i);
        if (map.singular_distance(q) <= margin) {
            ++count;
            continue;
        }
        f.values[i] = interpolate(fx, map.forward(q)) * map.jacobian(q);
    }
    if (masked) *masked = count;
    return f;
}

CurvedTomograms curved_forward(const ScalarField& f, const PlaneDiffeomorphism& map, const std::vector<Vec3>& mus,
                               std::size_t offsets, const CurvedOptions& options) {
    ScalarField fx = pushforward(f, map, options);
    CurvedTomograms t;
    t.map = map.name;
    t.x_geometry = fx.geometry;
    t.margin = options.margin_cells * f.geometry.max_spacing();
    t.tomograms = m2_forward(fx, mus, offsets);
    return t;
}

ScalarField curved_invert(const CurvedTomograms& t, const PlaneDiffeomorphism& map, const Geometry& gq,
                          const M2InvertOptions& options, std::size_t* masked) {
    ScalarField fx = m2_invert(t.tomograms, t.x_geometry, options);
    return pullback(fx, map, gq, t.margin, masked);
}

}  // namespace tomokit
