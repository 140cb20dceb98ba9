// Riesz potentials: closed-form Gaussian potentials, the singular-cell table
// and the back-projection/potential comparison.
#include <algorithm>
#include <cmath>
#include <numbers>

#include "tomokit/invert.hpp"

namespace tomokit {

using std::numbers::pi;

double gaussian_riesz_potential(int n, double beta, double s, double r) {
    if (!(s > 0) || !(beta > 0) || beta >= n) throw InvalidArgument("gaussian_riesz_potential: need s > 0, 0 < beta < n");
    // t-integral of the heat kernel, mapped to phi in [0, pi/2] via u = 2ts^2/(1+2ts^2) = sin^2(phi)
    const double a = 0.5 * beta - 1.0;
    const double b = 0.5 * n - 0.5 * beta - 1.0;
    const double c = r * r / (2.0 * s * s);
    auto integrand = [&](double phi) {
        double sn = std::sin(phi), cs = std::cos(phi);
        double sp = (2 * a + 1 == 0) ? 1.0 : std::pow(sn, 2 * a + 1);
        double cp = (2 * b + 1 == 0) ? 1.0 : std::pow(cs, 2 * b + 1);
        return 2.0 * sp * cp * std::exp(-c * sn * sn);
    };
    // composite Simpson, refined with the width 1/sqrt(c) of the peak at phi = 0
    auto m = static_cast<int>(std::max(400.0, 40.0 * std::sqrt(c)));
    m += m % 2;
    const double h = 0.5 * pi / m;
    double acc = integrand(0.0) + integrand(0.5 * pi);
    for (int i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
    acc *= h / 3.0;
    return std::pow(2.0 * s * s, -0.5 * beta) / std::tgamma(0.5 * beta) * acc;
}

double singular_cell_constant(int n) {
    if (n == 1) throw InvalidArgument("1/|u| is not integrable in one dimension");
    if (n == 2) return 4.0 * std::log(1.0 + std::sqrt(2.0));
    if (n == 3) return 6.0 * std::log((1.0 + std::sqrt(3.0)) / std::sqrt(2.0)) - 0.5 * pi;
    throw InvalidArgument("singular_cell_constant: dimension must be 2 or 3");
}

namespace {

// Integral of 1/|u| over the unit cell centred at an integer offset, by tensor Gauss-Legendre.
double cell_integral(int n, const std::array<int, 3>& off) {
    static const double x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                                0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
    static const double w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    const int sub = 4;  // sub-cells per axis
    double acc = 0.0;
    std::array<int, 3> lim{sub, sub, n == 3 ? sub : 1};
    std::array<int, 3> nq{8, 8, n == 3 ? 8 : 1};
    for (int a = 0; a < lim[0]; ++a)
        for (int b = 0; b < lim[1]; ++b)
            for (int c = 0; c < lim[2]; ++c)
                for (int i = 0; i < nq[0]; ++i)
                    for (int j = 0; j < nq[1]; ++j)
                        for (int k = 0; k < nq[2]; ++k) {
                            double u = off[0] - 0.5 + (a + 0.5 * (1 + x[i])) / sub;
                            double v = off[1] - 0.5 + (b + 0.5 * (1 + x[j])) / sub;
                            double z = n == 3 ? off[2] - 0.5 + (c + 0.5 * (1 + x[k])) / sub : 0.0;
                            double wt = w[i] * w[j] / (4.0 * sub * sub);
                            if (n == 3) wt *= w[k] / (2.0 * sub);
                            acc += wt / std::sqrt(u * u + v * v + z * z);
                        }
    return acc;
}

}  // namespace

PotentialCheck potential_check(const ScalarField& f, double test_radius, std::size_t directions, double min_radius) {
    const Geometry& g = f.geometry;
    const int n = g.dim;
    if (n != 2 && n != 3) throw InvalidArgument("potential_check: dimension must be 2 or 3");
    const double h = g.spacing[0];
    for (int a = 1; a < n; ++a)
        if (std::abs(g.spacing[a] - h) > 1e-12 * h) throw InvalidArgument("potential_check needs equal spacing on all axes");

    DirectionSet dirs = n == 2 ? DirectionSet::half_circle(directions ? directions : 360)
                               : DirectionSet::fibonacci_hemisphere(directions ? directions : 2000);
    Sinogram sino = radon_forward(f, dirs, default_offsets(f));

    PotentialCheck out;
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < f.size(); ++i) {
        Vec3 x = g.point(i);
        double r = norm(x);
        if (r <= test_radius && r >= min_radius) nodes.push_back(i);
    }
    // keep the direct convolution affordable
    const std::size_t cap = n == 2 ? 2000 : 300;
    std::size_t stride = std::max<std::size_t>(1, (nodes.size() + cap - 1) / cap);
    for (std::size_t i = 0; i < nodes.size(); i += stride) out.points.push_back(g.point(nodes[i]));
    out.back_projected = back_project_points(sino, out.points);

    // local table of exact cell integrals, far cells by the midpoint value
    const int near = 3;
    const int span = 2 * near + 1;
    auto slot = [&](const std::array<int, 3>& o) { return ((o[0] + near) * span + (o[1] + near)) * span + (o[2] + near); };
    std::vector<double> table(static_cast<std::size_t>(span * span * span), 0.0);
    for (int a = -near; a <= near; ++a)
        for (int b = -near; b <= near; ++b)
            for (int c = (n == 3 ? -near : 0); c <= (n == 3 ? near : 0); ++c) {
                std::array<int, 3> off{a, b, c};
                table[slot(off)] = (a == 0 && b == 0 && c == 0) ? singular_cell_constant(n) : cell_integral(n, off);
            }
    const double an = constants(n, 1).a_n;
    const double scale = std::pow(h, n - 1);
    out.potential.resize(out.points.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t p = 0; p < out.points.size(); ++p) {
        const Vec3& x = out.points[p];
        std::array<long, 3> cidx{0, 0, 0};
        for (int a = 0; a < n; ++a) cidx[a] = std::lround((x[a] - g.origin[a]) / h);
        double acc = 0.0;
        for (std::size_t m = 0; m < f.size(); ++m) {
            double v = f.values[m];
            if (v == 0.0) continue;
            auto idx = g.unravel(m);
            std::array<int, 3> off{0, 0, 0};
            double d2 = 0.0;
            bool local = true;
            for (int a = 0; a < n; ++a) {
                off[a] = static_cast<int>(static_cast<long>(idx[a]) - cidx[a]);
                d2 += static_cast<double>(off[a]) * off[a];
                if (std::abs(off[a]) > near) local = false;
            }
            acc += v * (local ? table[slot(off)] : 1.0 / std::sqrt(d2));
        }
        out.potential[p] = an * acc * scale;
    }
    double peak = 0.0;
    for (double v : out.potential) peak = std::max(peak, std::abs(v));
    for (std::size_t p = 0; p < out.points.size(); ++p) {
        double denom = std::max(std::abs(out.potential[p]), 1e-12 * peak);
        if (denom == 0.0) continue;
        out.max_relative_deviation =
            std::max(out.max_relative_deviation, std::abs(out.back_projected[p] - out.potential[p]) / denom);
    }
    return out;
}

}  // namespace tomokit
