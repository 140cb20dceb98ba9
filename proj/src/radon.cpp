#include "tomokit/radon.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sampler.hpp"

namespace tomokit {

using std::numbers::pi;

DirectionSet DirectionSet::half_circle(std::size_t count) {
    if (count < 1) throw InvalidArgument("direction set needs at least one direction");
    DirectionSet s;
    s.dim = 2;
    for (std::size_t j = 0; j < count; ++j) {
        double t = pi * static_cast<double>(j) / static_cast<double>(count);
        s.directions.push_back({std::cos(t), std::sin(t), 0.0});
        s.weights.push_back(2.0 * pi / static_cast<double>(count));
    }
    return s;
}

DirectionSet DirectionSet::from_angles(const std::vector<double>& angles, const std::vector<double>& weights) {
    if (angles.size() != weights.size()) throw InvalidArgument("angles and weights differ in length");
    DirectionSet s;
    s.dim = 2;
    for (double t : angles) s.directions.push_back({std::cos(t), std::sin(t), 0.0});
    s.weights = weights;
    return s;
}

namespace {

DirectionSet fibonacci(std::size_t count, bool hemisphere) {
    if (count < 1) throw InvalidArgument("direction set needs at least one direction");
    const double golden = pi * (3.0 - std::sqrt(5.0));
    DirectionSet s;
    s.dim = 3;
    const auto n = static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto fi = static_cast<double>(i);
        double z = hemisphere ? (fi + 0.5) / n : 1.0 - (2.0 * fi + 1.0) / n;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = golden * fi;
        s.directions.push_back({r * std::cos(phi), r * std::sin(phi), z});
        s.weights.push_back(4.0 * pi / n);
    }
    return s;
}

}  // namespace

DirectionSet DirectionSet::fibonacci_hemisphere(std::size_t count) { return fibonacci(count, true); }
DirectionSet DirectionSet::fibonacci_sphere(std::size_t count) { return fibonacci(count, false); }

std::vector<double> DirectionSet::angles() const {
    if (dim != 2) throw InvalidArgument("angles are defined for planar direction sets only");
    std::vector<double> out;
    for (const Vec3& d : directions) out.push_back(std::atan2(d[1], d[0]));
    return out;
}

void DirectionSet::validate() const {
    if (dim < 2 || dim > 3) throw InvalidArgument("direction sets live in 2 or 3 dimensions");
    if (directions.size() != weights.size()) throw InvalidArgument("direction and weight counts differ");
    for (const Vec3& d : directions) {
        if (std::abs(norm(d) - 1.0) > 1e-12) throw InvalidArgument("direction is not a unit vector");
        if (dim == 2 && d[2] != 0.0) throw InvalidArgument("planar direction has a z component");
    }
}

double Sinogram::value(std::size_t d, double X) const {
    double u = (X - offsets.start) / offsets.step;
    double top = static_cast<double>(offsets.count - 1);
    if (!(u >= 0.0 && u <= top)) return 0.0;
    auto j = static_cast<std::size_t>(u);
    if (j >= offsets.count - 1) j = offsets.count - 2;
    double t = u - static_cast<double>(j);
    const double* r = data.data() + d * offsets.count;
    return (1 - t) * r[j] + t * r[j + 1];
}

void Sinogram::validate() const {
    directions.validate();
    offsets.validate();
    if (directions.dim != dim) throw InvalidArgument("sinogram dimension differs from its direction set");
    if (data.size() != directions.size() * offsets.count) throw InvalidArgument("sinogram data size mismatch");
}

std::array<Vec3, 2> plane_frame(const Vec3& xi, int dim) {
    if (dim == 2) return {Vec3{-xi[1], xi[0], 0.0}, Vec3{0.0, 0.0, 0.0}};
    int axis = 0;
    for (int a = 1; a < 3; ++a)
        if (std::abs(xi[a]) < std::abs(xi[axis])) axis = a;
    Vec3 e{0.0, 0.0, 0.0};
    e[axis] = 1.0;
    double c = dot(e, xi);
    Vec3 t1{e[0] - c * xi[0], e[1] - c * xi[1], e[2] - c * xi[2]};
    double n1 = norm(t1);
    for (double& v : t1) v /= n1;
    Vec3 t2{xi[1] * t1[2] - xi[2] * t1[1], xi[2] * t1[0] - xi[0] * t1[2], xi[0] * t1[1] - xi[1] * t1[0]};
    return {t1, t2};
}

namespace {

double line_sum(const detail::Sampler& s, int dim, double R, double h, const Vec3& xi, const std::array<Vec3, 2>& fr,
                double X) {
    double rem = R * R - X * X;
    if (rem <= 0.0) return 0.0;
    double ymax = std::sqrt(rem);
    auto m = static_cast<long>(std::floor(ymax / h));
    const Vec3 base{X * xi[0], X * xi[1], X * xi[2]};
    double acc = 0.0;
    if (dim == 2) {
        const Vec3& t = fr[0];
        for (long j = -m; j <= m; ++j) {
            double y = static_cast<double>(j) * h;
            acc += s.eval2(base[0] + y * t[0], base[1] + y * t[1]);
        }
        return acc * h;
    }
    const Vec3& t1 = fr[0];
    const Vec3& t2 = fr[1];
    for (long j = -m; j <= m; ++j) {
        double y1 = static_cast<double>(j) * h;
        double w = std::sqrt(std::max(0.0, rem - y1 * y1));
        auto mk = static_cast<long>(std::floor(w / h));
        double row = 0.0;
        for (long k = -mk; k <= mk; ++k) {
            double y2 = static_cast<double>(k) * h;
            row += s.eval3(base[0] + y1 * t1[0] + y2 * t2[0], base[1] + y1 * t1[1] + y2 * t2[1],
                           base[2] + y1 * t1[2] + y2 * t2[2]);
        }
        acc += row;
    }
    return acc * h * h;
}

void require_planar_or_spatial(const ScalarField& f) {
    if (f.geometry.dim != 2 && f.geometry.dim != 3) throw InvalidArgument("radon transform needs a 2-D or 3-D field");
    if (f.values.size() != f.geometry.size()) throw InvalidArgument("field values do not match the geometry");
}

}  // namespace

double radon_line(const ScalarField& f, const Vec3& xi, double X) {
    require_planar_or_spatial(f);
    detail::Sampler s(f);
    return line_sum(s, f.geometry.dim, effective_support_radius(f), f.geometry.min_spacing(), xi,
                    plane_frame(xi, f.geometry.dim), X);
}

UniformGrid default_offsets(const ScalarField& f) {
    return UniformGrid::covering(effective_support_radius(f), f.geometry.min_spacing());
}

Sinogram radon_forward(const ScalarField& f, const DirectionSet& directions, const UniformGrid& offsets) {
    require_planar_or_spatial(f);
    directions.validate();
    offsets.validate();
    if (directions.dim != f.geometry.dim) throw InvalidArgument("direction set dimension differs from the field");
    const double R = effective_support_radius(f);
    const double tol = 1e-9 * std::max(1.0, R);
    if (offsets.start > -R + tol || offsets.end() < R - tol) {
        std::ostringstream os;
        os << "offsets [" << offsets.start << ", " << offsets.end() << "] do not cover the support radius " << R;
        throw InvariantViolation("offset coverage", os.str());
    }
    Sinogram g;
    g.dim = f.geometry.dim;
    g.directions = directions;
    g.offsets = offsets;
    g.source_support_radius = R;
    g.data.assign(directions.size() * offsets.count, 0.0);
    detail::Sampler s(f);
    const double h = f.geometry.min_spacing();
    const std::size_t total = g.data.size();
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t d = idx / offsets.count, j = idx % offsets.count;
        const Vec3& xi = directions.directions[d];
        g.data[idx] = line_sum(s, g.dim, R, h, xi, plane_frame(xi, g.dim), offsets.at(j));
    }
    return g;
}

namespace {

struct RowLookup {
    const double* row;
    std::size_t n;
    double start, inv_step, top;

    // returns the interpolated value; flags truncation when the row does not vanish at the crossed edge
    double operator()(double X, bool& truncated) const {
        double u = (X - start) * inv_step;
        if (u < 0.0) {
            if (row[0] != 0.0) truncated = true;
            return 0.0;
        }
        if (u > top) {
            if (row[n - 1] != 0.0) truncated = true;
            return 0.0;
        }
        auto j = static_cast<std::size_t>(u);
        if (j >= n - 1) j = n - 2;
        double t = u - static_cast<double>(j);
        return (1 - t) * row[j] + t * row[j + 1];
    }
};

RowLookup lookup(const Sinogram& g, std::size_t d) {
    return {g.data.data() + d * g.offsets.count, g.offsets.count, g.offsets.start, 1.0 / g.offsets.step,
            static_cast<double>(g.offsets.count - 1)};
}

}  // namespace

BackProjection back_project(const Sinogram& g, const Geometry& target) {
    g.validate();
    target.validate();
    if (target.dim != g.dim) throw InvalidArgument("back_project: target dimension differs from the sinogram");
    BackProjection out{ScalarField(target), false};
    const std::size_t np = target.size();
    std::vector<Vec3> pts(np);
    for (std::size_t i = 0; i < np; ++i) pts[i] = target.point(i);
    // each point accumulates directions in index order, so the result is schedule independent
    int truncated = 0;
    for (std::size_t d = 0; d < g.directions.size(); ++d) {
        const Vec3 xi = g.directions.directions[d];
        const double w = g.directions.weights[d];
        const RowLookup row = lookup(g, d);
#pragma omp parallel for reduction(| : truncated)
        for (std::size_t i = 0; i < np; ++i) {
            bool t = false;
            out.field.values[i] += w * row(dot(xi, pts[i]), t);
            truncated |= t ? 1 : 0;
        }
    }
    out.truncated = truncated != 0;
    return out;
}

std::vector<double> back_project_points(const Sinogram& g, const std::vector<Vec3>& points, bool* truncated) {
    g.validate();
    std::vector<double> out(points.size(), 0.0);
    int trunc = 0;
#pragma omp parallel for reduction(| : trunc)
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool t = false;
        double acc = 0.0;
        for (std::size_t d = 0; d < g.directions.size(); ++d)
            acc += g.directions.weights[d] * lookup(g, d)(dot(g.directions.directions[d], points[i]), t);
        out[i] = acc;
        trunc |= t ? 1 : 0;
    }
    if (truncated) *truncated = trunc != 0;
    return out;
}

double moment(const Sinogram& g, int k, std::size_t direction_index) {
    if (k < 0 || k > 8) throw InvalidArgument("moment order must lie in [0, 8]");
    if (direction_index >= g.directions.size()) throw InvalidArgument("moment: direction index out of range");
    auto w = trapezoid_weights(g.offsets.count, g.offsets.step);
    auto row = g.row(direction_index);
    double acc = 0.0;
    for (std::size_t j = 0; j < g.offsets.count; ++j) acc += w[j] * row[j] * std::pow(g.offsets.at(j), k);
    return acc;
}

double translate_covariance_check(const ScalarField& f, const Vec3& shift, const Vec3& xi) {
    require_planar_or_spatial(f);
    const Geometry& geo = f.geometry;
    double tol = 1e-9 * geo.max_spacing();
    ScalarField moved(geo, f.support_radius > 0 ? f.support_radius + norm(shift) : 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.values[i] == 0.0) continue;
        Vec3 x = geo.point(i);
        Vec3 y{x[0] + shift[0], x[1] + shift[1], x[2] + shift[2]};
        if (!geo.contains(y, tol)) throw InvariantViolation("support after shift", "translated field leaves the grid");
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        Vec3 x = geo.point(i);
        moved.values[i] = interpolate(f, {x[0] - shift[0], x[1] - shift[1], x[2] - shift[2]});
    }
    if (moved.support_radius > 0) {
        const double r2 = moved.support_radius * moved.support_radius;
        for (std::size_t i = 0; i < moved.size(); ++i) {
            Vec3 x = geo.point(i);
            if (dot(x, x) > r2) moved.values[i] = 0.0;
        }
    }
    DirectionSet one;
    one.dim = geo.dim;
    one.directions = {xi};
    one.weights = {1.0};
    UniformGrid off = UniformGrid::covering(effective_support_radius(f) + norm(shift), geo.min_spacing());
    off.count = std::max<std::size_t>(off.count, 2);
    Sinogram base = radon_forward(f, one, off);
    Sinogram shifted = radon_forward(moved, one, off);
    const double a = dot(xi, shift);
    double dev = 0.0;
    for (std::size_t j = 0; j < off.count; ++j) dev = std::max(dev, std::abs(shifted.at(0, j) - base.value(0, off.at(j) - a)));
    return dev;
}

SliceCheck fourier_slice_check(const ScalarField& f, const Vec3& xi, const std::vector<double>& taus) {
    require_planar_or_spatial(f);
    DirectionSet one;
    one.dim = f.geometry.dim;
    one.directions = {xi};
    one.weights = {1.0};
    UniformGrid off = default_offsets(f);
    Sinogram g = radon_forward(f, one, off);
    auto w = trapezoid_weights(off.count, off.step);
    auto slice = [&](double tau) {
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < off.count; ++j) acc += w[j] * g.at(0, j) * std::polar(1.0, -tau * off.at(j));
        return acc;
    };
    std::vector<cplx> nd = spectrum_along_ray(f, xi, taus);
    SliceCheck out;
    for (std::size_t t = 0; t < taus.size(); ++t) {
        cplx s = slice(taus[t]);
        out.max_deviation = std::max(out.max_deviation, std::abs(s - nd[t]));
        out.hermitian_deviation = std::max(out.hermitian_deviation, std::abs(slice(-taus[t]) - std::conj(s)));
    }
    return out;
}

namespace {

std::vector<std::array<int, 3>> monomials(int dim, int k) {
    std::vector<std::array<int, 3>> out;
    for (int a = k; a >= 0; --a) {
        if (dim == 2) {
            out.push_back({a, k - a, 0});
            continue;
        }
        for (int b = k - a; b >= 0; --b) out.push_back({a, b, k - a - b});
    }
    return out;
}

}  // namespace

HomogeneousFit fit_homogeneous(const DirectionSet& directions, const std::vector<double>& values, int k) {
    if (k < 0) throw InvalidArgument("polynomial degree must be >= 0");
    if (values.size() != directions.size()) throw InvalidArgument("one value per direction is required");
    auto mono = monomials(directions.dim, k);
    const auto m = static_cast<Eigen::Index>(values.size());
    const auto p = static_cast<Eigen::Index>(mono.size());
    if (m < p) throw InvalidArgument("not enough directions for the requested degree");
    Eigen::MatrixXd A(m, p);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Vec3& xi = directions.directions[static_cast<std::size_t>(i)];
        for (Eigen::Index c = 0; c < p; ++c) {
            const auto& e = mono[static_cast<std::size_t>(c)];
            A(i, c) = std::pow(xi[0], e[0]) * std::pow(xi[1], e[1]) * std::pow(xi[2], e[2]);
        }
        b(i) = values[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    HomogeneousFit fit;
    fit.coefficients.assign(c.data(), c.data() + c.size());
    fit.residual = (A * c - b).cwiseAbs().maxCoeff();
    return fit;
}

HomogeneousFit fit_homogeneous_moments(const Sinogram& g, int k) {
    std::vector<double> values;
    for (std::size_t d = 0; d < g.directions.size(); ++d) values.push_back(moment(g, k, d));
    return fit_homogeneous(g.directions, values, k);
}

DensityRowReport density_rows(const std::vector<double>& data, const std::vector<UniformGrid>& offsets) {
    DensityRowReport r;
    r.min_value = data.empty() ? 0.0 : data[0];
    std::size_t pos = 0;
    for (const UniformGrid& o : offsets) {
        std::vector<double> row(data.begin() + static_cast<long>(pos), data.begin() + static_cast<long>(pos + o.count));
        for (double v : row) r.min_value = std::min(r.min_value, v);
        r.max_mass_deviation = std::max(r.max_mass_deviation, std::abs(trapezoid(row, o.step) - 1.0));
        pos += o.count;
    }
    return r;
}

}  // namespace tomokit
