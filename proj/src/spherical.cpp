#include "tomokit/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sampler.hpp"
#include "tomokit/invert.hpp"
#include "tomokit/radon.hpp"

namespace tomokit {

namespace {

std::vector<Vec3> sphere_points(std::size_t n) {
    if (n < 500) throw InvalidArgument("sphere quadrature needs at least 500 points");
    return DirectionSet::fibonacci_sphere(n).directions;
}

double mean_over(const detail::Sampler& s, const std::vector<Vec3>& pts, const Vec3& x, double r) {
    double acc = 0.0;
    for (const Vec3& p : pts) acc += s.eval3(x[0] + r * p[0], x[1] + r * p[1], x[2] + r * p[2]);
    return acc / static_cast<double>(pts.size());
}

std::size_t scaled_count(std::size_t base, double r) {
    return static_cast<std::size_t>(std::ceil(static_cast<double>(base) * std::max(1.0, r * r)));
}

}  // namespace

double sphere_mean_at(const ScalarField& f, const Vec3& x, double radius, const SphereOptions& options) {
    if (f.geometry.dim != 3) throw InvalidArgument("sphere means need a 3-D field");
    detail::Sampler s(f);
    return mean_over(s, sphere_points(scaled_count(options.points, radius)), x, radius);
}

SphereMeanField sphere_mean_forward(const ScalarField& f, const Geometry& centers, const SphereOptions& options) {
    if (f.geometry.dim != 3 || centers.dim != 3) throw InvalidArgument("sphere means need 3-D fields");
    centers.validate();
    const double R = effective_support_radius(f);
    if (f.support_radius > 0) {
        for (int a = 0; a < 3; ++a) {
            if (centers.origin[a] > -(R + 1.0) + 1e-9 || centers.coord(a, centers.shape[a] - 1) < R + 1.0 - 1e-9) {
                std::ostringstream os;
                os << "centre grid does not cover the ball of radius " << R + 1.0 << " on axis " << a;
                throw InvariantViolation("centre coverage", os.str());
            }
        }
    }
    const auto pts = sphere_points(options.points);
    detail::Sampler s(f);
    SphereMeanField out;
    out.source_support_radius = R;
    out.field = ScalarField(centers, R + 1.0);
    const double reach = R + 1.0;
#pragma omp parallel for schedule(dynamic, 256)
    for (std::size_t i = 0; i < centers.size(); ++i) {
        Vec3 x = centers.point(i);
        if (norm(x) > reach) continue;
        out.field.values[i] = mean_over(s, pts, x, 1.0);
    }
    return out;
}

ScalarField john_invert(const SphereMeanField& g, double R, const JohnOptions& options, JohnReport* report) {
    const ScalarField& gf = g.field;
    const Geometry& geo = gf.geometry;
    if (geo.dim != 3) throw InvalidArgument("john_invert needs a 3-D sphere-mean field");
    if (!(R > 0)) throw InvalidArgument("john_invert: support radius must be positive");
    const double hmax = geo.max_spacing();
    double diag = 0.0;
    for (int a = 0; a < 3; ++a) diag += geo.spacing[a] * geo.spacing[a];
    diag = std::sqrt(diag);
    // g must vanish beyond R + 1 (plus one cell of interpolation reach)
    for (std::size_t i = 0; i < gf.size(); ++i) {
        if (gf.values[i] != 0.0 && norm(geo.point(i)) > R + 1.0 + diag + 1e-9) {
            std::ostringstream os;
            os << "sphere means are non-zero at |x| = " << norm(geo.point(i)) << " beyond R + 1 = " << R + 1.0;
            throw InvariantViolation("support radius", os.str());
        }
    }
    if (g.source_support_radius > R + 2.0 * diag + 1e-9) {
        std::ostringstream os;
        os << "declared source support " << g.source_support_radius << " exceeds R = " << R;
        throw InvariantViolation("support radius", os.str());
    }
    const double g_reach = R + 1.0 + diag;
    const double eval_radius = R + 2.0 * hmax;
    detail::Sampler s(gf);

    // spectral mode needs S to fall smoothly to zero past the evaluation ball;
    // a narrow taper leaks into the ball, so use all the room the grid offers
    double taper = 0.0;
    if (options.laplacian == LaplacianKind::spectral) {
        double half = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 3; ++a)
            half = std::min({half, -geo.origin[a], geo.origin[a] + geo.spacing[a] * static_cast<double>(geo.shape[a] - 1)});
        taper = half - eval_radius - hmax;
        if (taper < 3.0 * hmax) throw InvariantViolation("spectral Laplacian", "no room on the grid for the taper around the support");
    }
    const double s_radius = eval_radius + taper;

    // partial sums S(x) on nodes inside the evaluation ball
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < gf.size(); ++i)
        if (norm(geo.point(i)) <= s_radius) nodes.push_back(i);
    const int kmax_global = static_cast<int>(std::floor((s_radius + g_reach - 1.0) / 2.0)) + options.extra_terms;
    std::vector<std::vector<Vec3>> shells;
    for (int k = 0; k <= kmax_global + 1; ++k)
        shells.push_back(sphere_points(scaled_count(options.points, 2.0 * k + 1.0)));

    ScalarField S(geo);
    double tail = 0.0, peak = 0.0;
    int used = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(max : tail, peak, used)
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        const Vec3 x = geo.point(nodes[n]);
        // terms with 2k+1 > |x| + reach integrate over spheres outside supp g
        const int K = static_cast<int>(std::floor((norm(x) + g_reach - 1.0) / 2.0)) + options.extra_terms;
        double acc = 0.0;
        for (int k = 0; k <= K; ++k) acc += (2.0 * k + 1.0) * mean_over(s, shells[static_cast<std::size_t>(k)], x, 2.0 * k + 1.0);
        double next = (2.0 * K + 3.0) * mean_over(s, shells[static_cast<std::size_t>(K + 1)], x, 2.0 * K + 3.0);
        S.values[nodes[n]] = acc;
        tail = std::max(tail, std::abs(next));
        peak = std::max(peak, std::abs(acc));
        used = std::max(used, K + 1);
    }
    if (report) {
        report->terms = used;
        report->tail_relative = peak > 0 ? tail / peak : 0.0;
    }

    ScalarField lap(geo);
    if (options.laplacian == LaplacianKind::spectral) {
        // -Laplacian as the multiplier |k|^2 without roll-off
        FilterWindow none;
        none.kind = WindowKind::none;
        ScalarField windowed = S;
        for (std::size_t i = 0; i < S.size(); ++i) {
            double u = (norm(geo.point(i)) - eval_radius) / taper;
            if (u <= 0.0) continue;
            // C-infinity step from 1 to 0 on (0, 1)
            double w = 0.0;
            if (u < 1.0) {
                double a = std::exp(-1.0 / (1.0 - u)), b = std::exp(-1.0 / u);
                w = a / (a + b);
            }
            windowed.values[i] *= w;
        }
        lap = fractional_laplacian(windowed, 1.0, none);
        for (double& v : lap.values) v = -v;
    } else {
        for (std::size_t i = 0; i < gf.size(); ++i) {
            auto idx = geo.unravel(i);
            bool interior = true;
            for (int a = 0; a < 3; ++a)
                if (idx[a] == 0 || idx[a] + 1 >= geo.shape[a]) interior = false;
            if (!interior) continue;
            double acc = 0.0;
            const double c = S.values[i];
            for (int a = 0; a < 3; ++a) {
                std::array<std::size_t, 3> lo = idx, hi = idx;
                lo[a] -= 1;
                hi[a] += 1;
                acc += (S.at(lo[0], lo[1], lo[2]) - 2.0 * c + S.at(hi[0], hi[1], hi[2])) / (geo.spacing[a] * geo.spacing[a]);
            }
            lap.values[i] = acc;
        }
    }
    ScalarField f(geo, R);
    const double out_radius = R + hmax;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (norm(geo.point(i)) <= out_radius) f.values[i] = -2.0 * lap.values[i];
    }
    f.support_radius = out_radius;
    return f;
}

}  // namespace tomokit
