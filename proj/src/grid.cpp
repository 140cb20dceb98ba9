#include "tomokit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "fft.hpp"

namespace tomokit {

using std::numbers::pi;

UniformGrid UniformGrid::symmetric(double half_width, std::size_t count) {
    if (count < 2 || !(half_width > 0)) throw InvalidArgument("symmetric grid needs count >= 2 and half_width > 0");
    return {-half_width, 2.0 * half_width / static_cast<double>(count - 1), count};
}

UniformGrid UniformGrid::covering(double half_width, double step) {
    if (!(step > 0)) throw InvalidArgument("grid step must be positive");
    auto m = static_cast<std::size_t>(std::ceil(half_width / step - 1e-9));
    m = std::max<std::size_t>(m, 1);
    return {-static_cast<double>(m) * step, step, 2 * m + 1};
}

void UniformGrid::validate() const {
    if (count < 2) throw InvalidArgument("uniform grid needs at least 2 points");
    if (!(step > 0) || !std::isfinite(start)) throw InvalidArgument("uniform grid needs a positive step");
}

Geometry Geometry::make(int dim, std::array<std::size_t, 3> shape, Vec3 origin, Vec3 spacing) {
    Geometry g;
    g.dim = dim;
    for (int a = 0; a < 3; ++a) {
        if (a < dim) {
            g.shape[a] = shape[a];
            g.origin[a] = origin[a];
            g.spacing[a] = spacing[a];
        }
    }
    g.validate();
    return g;
}

Geometry Geometry::cube(int dim, std::size_t n, double lo, double hi) {
    if (n < 2 || !(hi > lo)) throw InvalidArgument("cube geometry needs n >= 2 and hi > lo");
    double h = (hi - lo) / static_cast<double>(n - 1);
    return make(dim, {n, n, n}, {lo, lo, lo}, {h, h, h});
}

std::array<std::size_t, 3> Geometry::unravel(std::size_t flat) const {
    std::size_t k = flat % shape[2];
    flat /= shape[2];
    std::size_t j = flat % shape[1];
    return {flat / shape[1], j, k};
}

Vec3 Geometry::point(std::size_t flat) const {
    auto idx = unravel(flat);
    Vec3 x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) x[a] = coord(a, idx[a]);
    return x;
}

double Geometry::min_spacing() const {
    double h = spacing[0];
    for (int a = 1; a < dim; ++a) h = std::min(h, spacing[a]);
    return h;
}

double Geometry::max_spacing() const {
    double h = spacing[0];
    for (int a = 1; a < dim; ++a) h = std::max(h, spacing[a]);
    return h;
}

double Geometry::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= spacing[a];
    return v;
}

double Geometry::bounding_radius() const {
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) {
        double lo = origin[a], hi = coord(a, shape[a] - 1);
        double m = std::max(std::abs(lo), std::abs(hi));
        r2 += m * m;
    }
    return std::sqrt(r2);
}

bool Geometry::contains(const Vec3& x, double tol) const {
    for (int a = 0; a < dim; ++a) {
        if (x[a] < origin[a] - tol || x[a] > coord(a, shape[a] - 1) + tol) return false;
    }
    return true;
}

void Geometry::validate() const {
    if (dim < 1 || dim > 3) throw InvalidArgument("geometry dimension must be 1, 2 or 3");
    for (int a = 0; a < 3; ++a) {
        if (a < dim) {
            if (shape[a] < 2) throw InvalidArgument("geometry shape must be >= 2 on every axis");
            if (!(spacing[a] > 0) || !std::isfinite(spacing[a])) throw InvalidArgument("geometry spacing must be positive");
            if (!std::isfinite(origin[a])) throw InvalidArgument("geometry origin must be finite");
        } else if (shape[a] != 1) {
            throw InvalidArgument("unused geometry axes must have shape 1");
        }
    }
}

bool Geometry::same_as(const Geometry& o, double tol) const {
    if (dim != o.dim || shape != o.shape) return false;
    for (int a = 0; a < dim; ++a) {
        double scale = std::max(1.0, std::abs(spacing[a]));
        if (std::abs(spacing[a] - o.spacing[a]) > tol * scale) return false;
        if (std::abs(origin[a] - o.origin[a]) > tol * std::max(1.0, std::abs(origin[a]))) return false;
    }
    return true;
}

double Spectrum::k_spacing(int axis) const {
    return 2.0 * pi / (static_cast<double>(spatial.shape[axis]) * spatial.spacing[axis]);
}

double Spectrum::k_at(int axis, std::size_t j) const {
    auto c = static_cast<double>(spatial.shape[axis] / 2);
    return (static_cast<double>(j) - c) * k_spacing(axis);
}

Vec3 Spectrum::k_point(std::size_t flat) const {
    auto idx = spatial.unravel(flat);
    Vec3 k{0.0, 0.0, 0.0};
    for (int a = 0; a < spatial.dim; ++a) k[a] = k_at(a, idx[a]);
    return k;
}

double Spectrum::nyquist(int axis) const {
    return static_cast<double>((spatial.shape[axis] - 1) / 2) * k_spacing(axis);
}

ScalarField sample(const PointFunction& fn, const Geometry& geometry, double support_radius) {
    geometry.validate();
    if (support_radius < 0) throw InvalidArgument("support radius must be >= 0");
    ScalarField f(geometry, support_radius);
    const double r2 = support_radius * support_radius;
    for (std::size_t i = 0; i < f.size(); ++i) {
        Vec3 x = geometry.point(i);
        if (support_radius > 0 && dot(x, x) > r2) continue;
        double v = fn(x);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "non-finite sample at flat index " << i;
            throw InvalidArgument(os.str());
        }
        f.values[i] = v;
    }
    return f;
}

std::vector<double> trapezoid_weights(std::size_t count, double step) {
    std::vector<double> w(count, step);
    if (count > 0) {
        w.front() *= 0.5;
        w.back() *= 0.5;
    }
    if (count == 1) w[0] = 1.0;
    return w;
}

double trapezoid(const std::vector<double>& values, double step) {
    if (values.size() < 2) return 0.0;
    double s = 0.5 * (values.front() + values.back());
    for (std::size_t j = 1; j + 1 < values.size(); ++j) s += values[j];
    return s * step;
}

namespace {

template <class T>
T integrate_impl(const Field<T>& f) {
    const Geometry& g = f.geometry;
    std::array<std::vector<double>, 3> w;
    for (int a = 0; a < 3; ++a) w[a] = trapezoid_weights(g.shape[a], a < g.dim ? g.spacing[a] : 1.0);
    T total{};
    for (std::size_t i = 0; i < g.shape[0]; ++i) {
        T plane{};
        for (std::size_t j = 0; j < g.shape[1]; ++j) {
            T line{};
            const T* row = &f.values[g.index(i, j, 0)];
            for (std::size_t k = 0; k < g.shape[2]; ++k) line += w[2][k] * row[k];
            plane += w[1][j] * line;
        }
        total += w[0][i] * plane;
    }
    return total;
}

template <class T>
T interpolate_impl(const Field<T>& f, const Vec3& x) {
    const Geometry& g = f.geometry;
    std::array<std::size_t, 3> i0{0, 0, 0};
    std::array<double, 3> t{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim; ++a) {
        double u = (x[a] - g.origin[a]) / g.spacing[a];
        // snap rounding noise so nodes return their stored value
        if (double r = std::round(u); std::abs(u - r) < 1e-9) u = r;
        double top = static_cast<double>(g.shape[a] - 1);
        if (!(u >= 0.0 && u <= top)) return T{};
        auto i = static_cast<std::size_t>(u);
        if (i >= g.shape[a] - 1) i = g.shape[a] - 2;
        i0[a] = i;
        t[a] = u - static_cast<double>(i);
    }
    T acc{};
    const int corners = 1 << g.dim;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        std::array<std::size_t, 3> idx{0, 0, 0};
        for (int a = 0; a < g.dim; ++a) {
            bool hi = (c >> a) & 1;
            w *= hi ? t[a] : 1.0 - t[a];
            idx[a] = i0[a] + (hi ? 1 : 0);
        }
        if (w != 0.0) acc += w * f.values[g.index(idx[0], idx[1], idx[2])];
    }
    return acc;
}

// Per-axis factors of the centred transform.
struct AxisPhases {
    std::vector<cplx> pre;   // exp(+2 pi i c m / N)
    std::vector<cplx> post;  // h * exp(-i k_j o)
};

AxisPhases axis_phases(const Geometry& g, int a) {
    const std::size_t n = g.shape[a];
    const double c = static_cast<double>(n / 2);
    const double dk = 2.0 * pi / (static_cast<double>(n) * g.spacing[a]);
    AxisPhases p;
    p.pre.resize(n);
    p.post.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
        // reduce the phase argument modulo N before scaling to keep it accurate
        double frac = std::fmod(c * static_cast<double>(m), static_cast<double>(n)) / static_cast<double>(n);
        p.pre[m] = std::polar(1.0, 2.0 * pi * frac);
        double k = (static_cast<double>(m) - c) * dk;
        p.post[m] = g.spacing[a] * std::polar(1.0, -k * g.origin[a]);
    }
    return p;
}

Spectrum forward_complex(const Geometry& g, std::vector<cplx> data) {
    g.validate();
    std::array<AxisPhases, 3> ph;
    for (int a = 0; a < g.dim; ++a) ph[a] = axis_phases(g, a);
    auto factor = [&](std::size_t flat, bool pre) {
        auto idx = g.unravel(flat);
        cplx z(1.0, 0.0);
        for (int a = 0; a < g.dim; ++a) z *= pre ? ph[a].pre[idx[a]] : ph[a].post[idx[a]];
        return z;
    };
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= factor(i, true);
    detail::fft(data, g.dim, g.shape, -1);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= factor(i, false);
    return {g, std::move(data)};
}

}  // namespace

double integrate(const ScalarField& f) { return integrate_impl(f); }
cplx integrate(const ComplexField& f) { return integrate_impl(f); }

double interpolate(const ScalarField& f, const Vec3& x) { return interpolate_impl(f, x); }
cplx interpolate(const ComplexField& f, const Vec3& x) { return interpolate_impl(f, x); }

double effective_support_radius(const ScalarField& f) {
    const Geometry& g = f.geometry;
    double diag = 0.0;
    for (int a = 0; a < g.dim; ++a) diag += g.spacing[a] * g.spacing[a];
    diag = std::sqrt(diag);
    double box = g.bounding_radius();
    if (f.support_radius > 0) return std::min(f.support_radius + diag, box);
    return box;
}

void check_support(const ScalarField& f) {
    if (f.values.size() != f.geometry.size())
        throw InvariantViolation("field size", "values length does not match the geometry");
    if (f.support_radius <= 0) return;
    const double r2 = f.support_radius * f.support_radius;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.values[i] == 0.0) continue;
        Vec3 x = f.geometry.point(i);
        if (dot(x, x) > r2 * (1 + 1e-12)) {
            std::ostringstream os;
            os << "non-zero sample at |x| = " << std::sqrt(dot(x, x)) << " beyond support radius " << f.support_radius;
            throw InvariantViolation("compact support", os.str());
        }
    }
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double l2_norm(const ScalarField& f) {
    ScalarField sq = f;
    for (double& v : sq.values) v = v * v;
    return std::sqrt(std::max(0.0, integrate(sq)));
}

double relative_l2(const ScalarField& a, const ScalarField& b) {
    if (!a.geometry.same_as(b.geometry, 1e-9)) throw InvalidArgument("relative_l2: geometry mismatch");
    ScalarField d = a;
    for (std::size_t i = 0; i < d.size(); ++i) d.values[i] -= b.values[i];
    double nb = l2_norm(b);
    double nd = l2_norm(d);
    if (nb == 0.0) return nd == 0.0 ? 0.0 : INFINITY;
    return nd / nb;
}

Spectrum dft_forward(const ScalarField& f) {
    std::vector<cplx> data(f.values.begin(), f.values.end());
    return forward_complex(f.geometry, std::move(data));
}

Spectrum dft_forward(const ComplexField& f) { return forward_complex(f.geometry, f.values); }

ComplexField dft_inverse(const Spectrum& s) {
    const Geometry& g = s.spatial;
    g.validate();
    if (s.values.size() != g.size()) throw InvalidArgument("dft_inverse: spectrum size does not match its geometry");
    std::array<AxisPhases, 3> ph;
    for (int a = 0; a < g.dim; ++a) ph[a] = axis_phases(g, a);
    std::vector<cplx> data = s.values;
    double scale = 1.0;
    for (int a = 0; a < g.dim; ++a) scale /= static_cast<double>(g.shape[a]) * g.spacing[a];
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto idx = g.unravel(i);
        cplx z(1.0, 0.0);
        // undo h*exp(-i k o) without the spacing factor
        for (int a = 0; a < g.dim; ++a) z *= std::conj(ph[a].post[idx[a]]) / g.spacing[a];
        data[i] *= z;
    }
    detail::fft(data, g.dim, g.shape, +1);
    ComplexField out(g);
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto idx = g.unravel(i);
        cplx z(scale, 0.0);
        for (int a = 0; a < g.dim; ++a) z *= std::conj(ph[a].pre[idx[a]]);
        out.values[i] = data[i] * z;
    }
    return out;
}

ScalarField real_part(const ComplexField& f, double tol) {
    double mz = 0.0, mi = 0.0;
    for (const cplx& z : f.values) {
        mz = std::max(mz, std::abs(z));
        mi = std::max(mi, std::abs(z.imag()));
    }
    if (mi > tol * std::max(mz, 1e-300) && mi > 1e-300) {
        std::ostringstream os;
        os << "imaginary residue " << mi << " exceeds " << tol << " relative to max " << mz;
        throw InvariantViolation("real output", os.str());
    }
    ScalarField out(f.geometry, f.support_radius);
    for (std::size_t i = 0; i < f.size(); ++i) out.values[i] = f.values[i].real();
    return out;
}

std::vector<cplx> spectrum_along_ray(const ScalarField& f, const Vec3& direction, const std::vector<double>& taus) {
    const Geometry& g = f.geometry;
    const std::size_t nt = taus.size();
    std::vector<cplx> out(nt);
    const double cell = g.cell_volume();
    // separable phases: exp(-i tau xi_a x_a) per axis
    auto axis_table = [&](int a, double tau) {
        std::vector<double> c(g.shape[a]), s(g.shape[a]);
        for (std::size_t m = 0; m < g.shape[a]; ++m) {
            double arg = tau * direction[a] * g.coord(a, m);
            c[m] = std::cos(arg);
            s[m] = -std::sin(arg);
        }
        return std::make_pair(c, s);
    };
#pragma omp parallel for schedule(dynamic)
    for (std::size_t t = 0; t < nt; ++t) {
        const double tau = taus[t];
        std::array<std::pair<std::vector<double>, std::vector<double>>, 3> tab;
        for (int a = 0; a < g.dim; ++a) tab[a] = axis_table(a, tau);
        const int last = g.dim - 1;
        const std::size_t nl = g.shape[last];
        const double* lc = tab[last].first.data();
        const double* ls = tab[last].second.data();
        cplx total(0.0, 0.0);
        const std::size_t outer = g.size() / nl;
        // outer index walks the leading axes, each line summed in fixed order
        for (std::size_t o = 0; o < outer; ++o) {
            const double* row = &f.values[o * nl];
            double re0 = 0, im0 = 0, re1 = 0, im1 = 0;
            std::size_t m = 0;
            for (; m + 1 < nl; m += 2) {
                re0 += row[m] * lc[m];
                im0 += row[m] * ls[m];
                re1 += row[m + 1] * lc[m + 1];
                im1 += row[m + 1] * ls[m + 1];
            }
            for (; m < nl; ++m) {
                re0 += row[m] * lc[m];
                im0 += row[m] * ls[m];
            }
            cplx line(re0 + re1, im0 + im1);
            if (g.dim == 1) {
                total += line;
                continue;
            }
            cplx ph(1.0, 0.0);
            if (g.dim == 2) {
                ph = cplx(tab[0].first[o], tab[0].second[o]);
            } else {
                std::size_t i = o / g.shape[1], j = o % g.shape[1];
                ph = cplx(tab[0].first[i], tab[0].second[i]) * cplx(tab[1].first[j], tab[1].second[j]);
            }
            total += ph * line;
        }
        out[t] = total * cell;
    }
    return out;
}

cplx spectrum_at(const ScalarField& f, const Vec3& k) {
    double kn = norm(k);
    if (kn == 0.0) {
        double s = 0.0;
        for (double v : f.values) s += v;
        return s * f.geometry.cell_volume();
    }
    Vec3 dir{k[0] / kn, k[1] / kn, k[2] / kn};
    return spectrum_along_ray(f, dir, {kn})[0];
}

std::vector<Disk> shepp_logan_disks() {
    return {
        {{0.0, 0.0, 0.0}, 0.90, 0.2},     {{0.0, -0.02, 0.0}, 0.82, 0.3},  {{0.22, 0.0, 0.0}, 0.16, 0.4},
        {{-0.22, 0.0, 0.0}, 0.20, 0.4},   {{0.0, 0.35, 0.0}, 0.21, 0.3},   {{0.0, 0.10, 0.0}, 0.046, 0.5},
        {{0.0, -0.10, 0.0}, 0.046, 0.5},  {{-0.08, -0.605, 0.0}, 0.046, 0.6}, {{0.06, -0.605, 0.0}, 0.046, 0.6},
        {{0.0, -0.605, 0.0}, 0.023, 0.6},
    };
}

namespace {

double dist(const Vec3& a, const Vec3& b, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

// Cell-averaged indicator-like profile; only cells straddling the boundary are subsampled.
double shape_value(const Disk& d, const Vec3& x, const Geometry& g, int smoothness, int supersample) {
    auto profile = [&](const Vec3& p) {
        double r = dist(p, d.center, g.dim);
        if (r > d.radius) return 0.0;
        if (smoothness == 0) return d.weight;
        double u = 1.0 - (r / d.radius) * (r / d.radius);
        return d.weight * std::pow(u, smoothness);
    };
    if (supersample <= 1 || smoothness > 0) return profile(x);
    double half_diag = 0.0;
    for (int a = 0; a < g.dim; ++a) half_diag += 0.25 * g.spacing[a] * g.spacing[a];
    half_diag = std::sqrt(half_diag);
    double r = dist(x, d.center, g.dim);
    if (r + half_diag <= d.radius) return d.weight;
    if (r - half_diag > d.radius) return 0.0;
    const int s = supersample;
    double acc = 0.0;
    int count = 0;
    std::array<int, 3> n{1, 1, 1};
    for (int a = 0; a < g.dim; ++a) n[a] = s;
    for (int i = 0; i < n[0]; ++i)
        for (int j = 0; j < n[1]; ++j)
            for (int k = 0; k < n[2]; ++k) {
                std::array<int, 3> ijk{i, j, k};
                Vec3 p = x;
                for (int a = 0; a < g.dim; ++a) p[a] += ((ijk[a] + 0.5) / s - 0.5) * g.spacing[a];
                acc += profile(p);
                ++count;
            }
    return acc / count;
}

}  // namespace

ScalarField phantom(const PhantomSpec& spec, const Geometry& geometry) {
    geometry.validate();
    for (const Disk& d : spec.disks) {
        if (d.weight < 0) throw InvalidArgument("phantom: negative weights are not allowed");
        if (!(d.radius > 0)) throw InvalidArgument("phantom: disk radius must be positive");
    }
    for (const GaussianComponent& c : spec.gaussians) {
        if (c.weight < 0) throw InvalidArgument("phantom: negative weights are not allowed");
        if (!(c.sigma > 0)) throw InvalidArgument("phantom: gaussian sigma must be positive");
    }
    const int dim = geometry.dim;
    if (spec.kind == PhantomKind::disks2d && dim != 2) throw InvalidArgument("disks2d phantom needs a 2-D grid");
    if (spec.kind == PhantomKind::ball3d && dim != 3) throw InvalidArgument("ball3d phantom needs a 3-D grid");

    double half_diag = 0.0;
    for (int a = 0; a < dim; ++a) half_diag += 0.25 * geometry.spacing[a] * geometry.spacing[a];
    half_diag = std::sqrt(half_diag);

    double support = 0.0;
    ScalarField f(geometry);
    if (spec.kind == PhantomKind::gaussian_mix) {
        for (const auto& c : spec.gaussians) support = std::max(support, norm(c.center) + spec.gaussian_cutoff * c.sigma);
        for (std::size_t i = 0; i < f.size(); ++i) {
            Vec3 x = geometry.point(i);
            double v = 0.0;
            for (const auto& c : spec.gaussians) {
                double r = dist(x, c.center, dim);
                if (r > spec.gaussian_cutoff * c.sigma) continue;
                double norm_c = std::pow(2.0 * pi * c.sigma * c.sigma, -0.5 * dim);
                v += c.weight * norm_c * std::exp(-0.5 * r * r / (c.sigma * c.sigma));
            }
            f.values[i] = v;
        }
    } else {
        const bool averaged = spec.supersample > 1 && spec.smoothness == 0;
        for (const auto& d : spec.disks) support = std::max(support, norm(d.center) + d.radius + (averaged ? half_diag : 0.0));
        for (std::size_t i = 0; i < f.size(); ++i) {
            Vec3 x = geometry.point(i);
            double v = 0.0;
            for (const auto& d : spec.disks) v += shape_value(d, x, geometry, spec.smoothness, spec.supersample);
            f.values[i] = v;
        }
    }
    f.support_radius = spec.disks.empty() && spec.gaussians.empty() ? 0.0 : support;
    if (f.support_radius > 0) {
        // keep the support certificate exact even when the support reaches beyond the box
        const double r2 = f.support_radius * f.support_radius;
        for (std::size_t i = 0; i < f.size(); ++i) {
            Vec3 x = geometry.point(i);
            if (dot(x, x) > r2) f.values[i] = 0.0;
        }
    }
    if (spec.normalize) {
        double mass = integrate(f);
        if (mass > 0) {
            for (double& v : f.values) v /= mass;
        }
    }
    return f;
}

}  // namespace tomokit
