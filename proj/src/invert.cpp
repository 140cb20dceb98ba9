#include "tomokit/invert.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "sampler.hpp"

namespace tomokit {

using std::numbers::pi;

double sphere_area(int n) { return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n); }

double riesz_constant(int n, double alpha) {
    if (!(alpha > 0) || alpha >= n) throw InvalidArgument("riesz_constant: need 0 < alpha < n");
    return std::pow(2.0, n - alpha) * std::pow(pi, 0.5 * n) * std::tgamma(0.5 * (n - alpha)) / std::tgamma(0.5 * alpha);
}

DimensionalConstants constants(int n, int d) {
    if (!(n >= 2 && n <= 3 && d > 0 && d < n)) {
        std::ostringstream os;
        os << "constants: (n, d) = (" << n << ", " << d << ") outside 0 < d < n <= 3";
        throw InvalidArgument(os.str());
    }
    DimensionalConstants c;
    c.n = n;
    c.d = d;
    c.a_n = 2.0 * std::pow(pi, 0.5 * (n - 1)) / std::tgamma(0.5 * (n - 1));
    c.b_n = riesz_constant(n, 1.0);
    const double g = std::tgamma(0.5 * (n - 1));
    c.c_nd = std::pow(g, d) * std::tgamma(0.5 * d) /
             (std::pow(2.0, n) * std::pow(pi, 0.5 * (d * n - d + n)) * std::tgamma(0.5 * (n - d)));
    return c;
}

double FilterWindow::operator()(double k, double k_max) const {
    k = std::abs(k);
    if (kind == WindowKind::none) return k <= k_max ? 1.0 : 0.0;
    const double k0 = (1.0 - fraction) * k_max;
    if (k <= k0) return 1.0;
    if (k >= k_max) return 0.0;
    return 0.5 * (1.0 + std::cos(pi * (k - k0) / (k_max - k0)));
}

namespace {

double nyquist_radius(const Geometry& g) {
    double k = INFINITY;
    for (int a = 0; a < g.dim; ++a) k = std::min(k, pi / g.spacing[a]);
    return k;
}

// Applies a radial multiplier m(|k|) in the spectral domain; unpaired Nyquist samples are dropped.
template <class Multiplier>
ScalarField spectral_filter(const ScalarField& f, Multiplier m) {
    Spectrum s = dft_forward(f);
    const Geometry& g = f.geometry;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        auto idx = g.unravel(i);
        bool unpaired = false;
        for (int a = 0; a < g.dim; ++a)
            if (g.shape[a] % 2 == 0 && idx[a] == 0) unpaired = true;
        if (unpaired) {
            s.values[i] = 0.0;
            continue;
        }
        s.values[i] *= m(norm(s.k_point(i)));
    }
    ScalarField out = real_part(dft_inverse(s), 1e-10);
    out.support_radius = 0.0;
    return out;
}

Geometry padded_geometry(const Geometry& target, double factor) {
    Geometry p = target;
    for (int a = 0; a < target.dim; ++a) {
        auto extra = static_cast<std::size_t>(std::ceil(0.5 * (factor - 1.0) * static_cast<double>(target.shape[a])));
        p.shape[a] = target.shape[a] + 2 * extra;
        p.origin[a] = target.origin[a] - static_cast<double>(extra) * target.spacing[a];
    }
    return p;
}

ScalarField crop(const ScalarField& big, const Geometry& target) {
    ScalarField out(target);
    std::array<std::size_t, 3> off{0, 0, 0};
    for (int a = 0; a < target.dim; ++a)
        off[a] = static_cast<std::size_t>(std::lround((target.origin[a] - big.geometry.origin[a]) / target.spacing[a]));
    for (std::size_t i = 0; i < target.shape[0]; ++i)
        for (std::size_t j = 0; j < target.shape[1]; ++j)
            for (std::size_t k = 0; k < target.shape[2]; ++k)
                out.at(i, j, k) = big.at(i + off[0], j + off[1], k + off[2]);
    return out;
}

// Cubic (Catmull-Rom) table of a smooth radial profile.
class RadialTable {
public:
    template <class Fn>
    RadialTable(Fn fn, double r_max, double dr) : dr_(dr) {
        auto n = static_cast<std::size_t>(std::ceil(r_max / dr)) + 4;
        v_.resize(n);
        for (std::size_t i = 0; i < n; ++i) v_[i] = fn(static_cast<double>(i) * dr);
    }
    double operator()(double r) const {
        double u = r / dr_;
        auto i = static_cast<std::size_t>(u);
        if (i + 2 >= v_.size()) i = v_.size() - 3;
        double t = u - static_cast<double>(i);
        double p0 = i == 0 ? v_[1] : v_[i - 1];  // even extension at r = 0
        double p1 = v_[i], p2 = v_[i + 1], p3 = v_[i + 2];
        return p1 + 0.5 * t * (p2 - p0 + t * (2 * p0 - 5 * p1 + 4 * p2 - p3 + t * (3 * (p1 - p2) + p3 - p0)));
    }

private:
    double dr_;
    std::vector<double> v_;
};

struct Monopole {
    double mass = 0.0;
    Vec3 center{0.0, 0.0, 0.0};
    double width = 0.0;
};

// Inverts B = K (f * |x|^-beta) on a padded grid by subtracting the potential of a
// Gaussian with the data's mass, centre and spread before the spectral filter.
ScalarField invert_potential(const ScalarField& B, const Geometry& target, double K, double beta, double scale,
                             Monopole mono, const FilterWindow& window) {
    const Geometry& g = B.geometry;
    const int n = g.dim;
    const double alpha = 0.5 * (n - beta);
    const double kmax = nyquist_radius(g);
    ScalarField residual = B;
    ScalarField gauss(g);
    const bool use_mono = std::abs(mono.mass) > 0.0 && std::isfinite(mono.mass);
    if (use_mono) {
        mono.width = std::max(mono.width, 2.0 * g.max_spacing());
        const double s = mono.width;
        double r_max = 0.0;
        for (std::size_t c = 0; c < 8; ++c) {
            Vec3 corner{};
            for (int a = 0; a < n; ++a) corner[a] = ((c >> a) & 1) ? g.coord(a, g.shape[a] - 1) : g.origin[a];
            Vec3 d{corner[0] - mono.center[0], corner[1] - mono.center[1], corner[2] - mono.center[2]};
            r_max = std::max(r_max, norm(d));
        }
        RadialTable pot([&](double r) { return gaussian_riesz_potential(n, beta, s, r); }, r_max + s, s / 64.0);
        const double gnorm = std::pow(2.0 * pi * s * s, -0.5 * n);
        for (std::size_t i = 0; i < g.size(); ++i) {
            Vec3 x = g.point(i);
            Vec3 d{x[0] - mono.center[0], x[1] - mono.center[1], x[2] - mono.center[2]};
            double r = norm(d);
            residual.values[i] -= K * mono.mass * pot(r);
            gauss.values[i] = mono.mass * gnorm * std::exp(-0.5 * r * r / (s * s));
        }
    }
    ScalarField filtered = spectral_filter(residual, [&](double k) { return std::pow(k, 2 * alpha) * window(k, kmax); });
    const double analytic = scale * K * riesz_constant(n, beta);  // equals 1 for the matched constants
    if (use_mono) {
        ScalarField smooth = spectral_filter(gauss, [&](double k) { return window(k, kmax); });
        for (std::size_t i = 0; i < g.size(); ++i) filtered.values[i] = scale * filtered.values[i] + analytic * smooth.values[i];
    } else {
        for (double& v : filtered.values) v *= scale;
    }
    return crop(filtered, target);
}

Monopole sinogram_monopole(const Sinogram& g) {
    const std::size_t nd = g.directions.size();
    const int n = g.dim;
    Monopole m;
    std::vector<double> m0(nd), m1(nd), m2(nd);
    for (std::size_t d = 0; d < nd; ++d) {
        m0[d] = moment(g, 0, d);
        m1[d] = moment(g, 1, d);
        m2[d] = moment(g, 2, d);
        m.mass += m0[d];
    }
    m.mass /= static_cast<double>(nd);
    if (!(std::abs(m.mass) > 0)) return m;
    Eigen::MatrixXd A(static_cast<Eigen::Index>(nd), n);
    Eigen::VectorXd b(static_cast<Eigen::Index>(nd));
    for (std::size_t d = 0; d < nd; ++d) {
        for (int a = 0; a < n; ++a) A(static_cast<Eigen::Index>(d), a) = g.directions.directions[d][a];
        b(static_cast<Eigen::Index>(d)) = m1[d] / m.mass;
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    for (int a = 0; a < n; ++a) m.center[a] = c(a);
    double var = 0.0;
    for (std::size_t d = 0; d < nd; ++d) {
        double mu = dot(g.directions.directions[d], m.center);
        var += m2[d] / m.mass - mu * mu;
    }
    var /= static_cast<double>(nd);
    m.width = std::sqrt(std::max(var, 0.0));
    return m;
}

}  // namespace

ScalarField fractional_laplacian(const ScalarField& f, double alpha, const FilterWindow& window) {
    if (!(alpha > 0)) throw InvalidArgument("fractional_laplacian: alpha must be positive");
    const double kmax = nyquist_radius(f.geometry);
    return spectral_filter(f, [&](double k) { return std::pow(k, 2 * alpha) * window(k, kmax); });
}

Sinogram filter_sinogram(const Sinogram& g, const FilterWindow& window) {
    g.validate();
    if (g.dim != 2 && g.dim != 3) throw InvalidArgument("filter_sinogram: dimension must be 2 or 3");
    const std::size_t N = g.offsets.count;
    const std::size_t P = 4 * N;
    const double dX = g.offsets.step;
    const double kmax = pi / dX;
    // frequency response of the |tau|^(n-1) filter on the padded circular grid
    std::vector<cplx> H(P);
    if (g.dim == 2) {
        std::vector<cplx> kernel(P, 0.0);
        for (std::size_t q = 0; q < P; ++q) {
            long m = q < P / 2 ? static_cast<long>(q) : static_cast<long>(q) - static_cast<long>(P);
            double v = 0.0;
            if (m == 0) v = pi / (2.0 * dX * dX);
            else if (m % 2 != 0) v = -2.0 / (pi * static_cast<double>(m * m) * dX * dX);
            kernel[q] = v * dX;
        }
        detail::fft1(kernel, -1);
        H = kernel;
    }
    for (std::size_t q = 0; q < P; ++q) {
        long m = q < P / 2 ? static_cast<long>(q) : static_cast<long>(q) - static_cast<long>(P);
        double tau = 2.0 * pi * static_cast<double>(m) / (static_cast<double>(P) * dX);
        if (g.dim == 3) H[q] = tau * tau;
        H[q] = cplx(H[q].real(), 0.0) * window(tau, kmax);
    }
    Sinogram out;
    out.dim = g.dim;
    out.directions = g.directions;
    out.offsets = {g.offsets.start - static_cast<double>(N) * dX, dX, 3 * N};
    out.source_support_radius = g.source_support_radius;
    out.data.assign(g.directions.size() * out.offsets.count, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t d = 0; d < g.directions.size(); ++d) {
        std::vector<cplx> buf(P, 0.0);
        for (std::size_t j = 0; j < N; ++j) buf[j] = g.at(d, j);
        detail::fft1(buf, -1);
        for (std::size_t q = 0; q < P; ++q) buf[q] *= H[q];
        detail::fft1(buf, +1);
        for (std::size_t j = 0; j < 3 * N; ++j) {
            std::size_t src = (j + P - N) % P;
            out.data[d * out.offsets.count + j] = buf[src].real() / static_cast<double>(P);
        }
    }
    return out;
}

ScalarField fbp_invert(const Sinogram& g, const Geometry& target, const FbpOptions& options) {
    g.validate();
    target.validate();
    if (g.dim != 2 && g.dim != 3) throw InvalidArgument("fbp_invert: dimension must be 2 or 3");
    if (target.dim != g.dim) throw InvalidArgument("fbp_invert: target dimension differs from the sinogram");
    const int n = g.dim;
    const double scale = 1.0 / (2.0 * std::pow(2.0 * pi, n - 1));
    if (options.path == FbpPath::filter_first) {
        Sinogram q = filter_sinogram(g, options.window);
        BackProjection bp = back_project(q, target);
        if (bp.truncated)
            throw InvariantViolation("offset coverage", "filtered tomograms do not reach every target point");
        for (double& v : bp.field.values) v *= scale;
        return bp.field;
    }
    Geometry big = padded_geometry(target, std::max(1.0, options.padding));
    BackProjection bp = back_project(g, big);
    if (bp.truncated) throw InvariantViolation("offset coverage", "tomogram rows do not vanish at the offset range edge");
    const double an = constants(n, 1).a_n;
    return invert_potential(bp.field, target, an, 1.0, scale, sinogram_monopole(g), options.window);
}

Vec3 LineFrame::direction() const {
    Vec3 u{eta1[1] * eta2[2] - eta1[2] * eta2[1], eta1[2] * eta2[0] - eta1[0] * eta2[2],
           eta1[0] * eta2[1] - eta1[1] * eta2[0]};
    double nu = norm(u);
    if (!(nu > 0)) throw InvariantViolation("frame rank", "frame rows are linearly dependent");
    for (double& v : u) v /= nu;
    return u;
}

double LineFrame::gram_det() const {
    double g11 = dot(eta1, eta1), g12 = dot(eta1, eta2), g22 = dot(eta2, eta2);
    return g11 * g22 - g12 * g12;
}

void LineTomograms::validate() const {
    offsets.validate();
    if (frames.size() != weights.size()) throw InvalidArgument("line tomograms: frame and weight counts differ");
    if (data.size() != frames.size() * offsets.count * offsets.count)
        throw InvalidArgument("line tomograms: data size mismatch");
}

std::vector<LineFrame> orthonormal_line_frames(const DirectionSet& orientations) {
    if (orientations.dim != 3) throw InvalidArgument("line orientations must be 3-D");
    std::vector<LineFrame> out;
    for (const Vec3& u : orientations.directions) {
        auto fr = plane_frame(u, 3);
        out.push_back({fr[0], fr[1]});
    }
    return out;
}

LineFrame transform_frame(const LineFrame& f, const double A[2][2]) {
    LineFrame out;
    for (int a = 0; a < 3; ++a) {
        out.eta1[a] = A[0][0] * f.eta1[a] + A[0][1] * f.eta2[a];
        out.eta2[a] = A[1][0] * f.eta1[a] + A[1][1] * f.eta2[a];
    }
    return out;
}

namespace {

double line_integral(const detail::Sampler& s, double R, double h, const LineFrame& frame, double Y1, double Y2) {
    const double g11 = dot(frame.eta1, frame.eta1), g12 = dot(frame.eta1, frame.eta2), g22 = dot(frame.eta2, frame.eta2);
    const double det = g11 * g22 - g12 * g12;
    const double scale = std::max(g11, g22);
    if (!(det > 1e-14 * scale * scale)) throw InvariantViolation("frame rank", "frame rows are linearly dependent");
    // foot point x0 = a eta1 + b eta2 with Gram * (a, b) = Y
    const double a = (g22 * Y1 - g12 * Y2) / det;
    const double b = (g11 * Y2 - g12 * Y1) / det;
    Vec3 x0{a * frame.eta1[0] + b * frame.eta2[0], a * frame.eta1[1] + b * frame.eta2[1],
            a * frame.eta1[2] + b * frame.eta2[2]};
    const Vec3 u = frame.direction();
    double rem = R * R - dot(x0, x0);
    if (rem <= 0) return 0.0;
    auto m = static_cast<long>(std::floor(std::sqrt(rem) / h));
    double acc = 0.0;
    for (long j = -m; j <= m; ++j) {
        double t = static_cast<double>(j) * h;
        acc += s.eval3(x0[0] + t * u[0], x0[1] + t * u[1], x0[2] + t * u[2]);
    }
    // the delta constraints contribute 1/sqrt(det), cancelled by the sqrt(det) weight
    return acc * h;
}

}  // namespace

double codim_line(const ScalarField& f, const LineFrame& frame, double Y1, double Y2) {
    if (f.geometry.dim != 3) throw InvalidArgument("codimension-2 lines need a 3-D field");
    detail::Sampler s(f);
    return line_integral(s, effective_support_radius(f), f.geometry.min_spacing(), frame, Y1, Y2);
}

LineTomograms codim_forward(const ScalarField& f, const std::vector<LineFrame>& frames, const std::vector<double>& weights,
                            const UniformGrid& offsets) {
    if (f.geometry.dim != 3) throw InvalidArgument("codim_forward: only (n, d) = (3, 2) is implemented");
    offsets.validate();
    const double R = effective_support_radius(f);
    if (offsets.start > -R + 1e-9 * R || offsets.end() < R - 1e-9 * R)
        throw InvariantViolation("offset coverage", "line offsets do not cover the support");
    for (const LineFrame& fr : frames) fr.direction();
    LineTomograms out;
    out.frames = frames;
    out.weights = weights;
    out.offsets = offsets;
    out.source_support_radius = R;
    const std::size_t m = offsets.count;
    out.data.assign(frames.size() * m * m, 0.0);
    detail::Sampler s(f);
    const double h = f.geometry.min_spacing();
#pragma omp parallel for schedule(dynamic, 64)
    for (std::size_t idx = 0; idx < out.data.size(); ++idx) {
        std::size_t fi = idx / (m * m), i = (idx / m) % m, j = idx % m;
        out.data[idx] = line_integral(s, R, h, frames[fi], offsets.at(i), offsets.at(j));
    }
    out.validate();
    return out;
}

LineTomograms codim_forward(const ScalarField& f, std::size_t orientations, const UniformGrid& offsets) {
    DirectionSet dirs = DirectionSet::fibonacci_hemisphere(orientations);
    return codim_forward(f, orthonormal_line_frames(dirs), dirs.weights, offsets);
}

ScalarField codim_back_project(const LineTomograms& g, const Geometry& target) {
    g.validate();
    if (target.dim != 3) throw InvalidArgument("codim_back_project: target must be 3-D");
    // total frame measure 8*pi^3 spread over orientations: 2*pi^2 per unit of sphere area
    const double measure = 2.0 * pi * pi;
    ScalarField out(target);
    const std::size_t m = g.offsets.count;
    bool truncated = false;
    for (std::size_t fi = 0; fi < g.frames.size(); ++fi) {
        const LineFrame& fr = g.frames[fi];
        const double gd = fr.gram_det();
        if (std::abs(gd - 1.0) > 1e-10) throw InvalidArgument("codim_back_project expects orthonormal frames");
        ScalarField plane(Geometry::make(2, {m, m, 1}, {g.offsets.start, g.offsets.start, 0}, {g.offsets.step, g.offsets.step, 1}));
        std::copy(g.data.begin() + static_cast<long>(fi * m * m), g.data.begin() + static_cast<long>((fi + 1) * m * m),
                  plane.values.begin());
        detail::Sampler s(plane);
        const double w = measure * g.weights[fi];
        const double lo = g.offsets.start, hi = g.offsets.end();
#pragma omp parallel for reduction(|| : truncated)
        for (std::size_t i = 0; i < out.size(); ++i) {
            Vec3 x = target.point(i);
            double y1 = dot(fr.eta1, x), y2 = dot(fr.eta2, x);
            if (y1 < lo || y1 > hi || y2 < lo || y2 > hi) {
                if (std::max(std::abs(y1), std::abs(y2)) < g.source_support_radius) truncated = true;
                continue;
            }
            out.values[i] += w * s.eval2(y1, y2);
        }
    }
    if (truncated) throw InvariantViolation("offset coverage", "line offsets do not cover the support");
    return out;
}

ScalarField codim_invert(const LineTomograms& g, const Geometry& target, const FilterWindow& window, double padding) {
    g.validate();
    if (target.dim != 3) throw InvalidArgument("codim_invert: only (n, d) = (3, 2) is implemented");
    if (g.frames.empty()) throw InvalidArgument("codim_invert: no line orientations");
    Geometry big = padded_geometry(target, std::max(1.0, padding));
    ScalarField B = codim_back_project(g, big);

    // mass, centre and spread of the source from the line moments
    const std::size_t m = g.offsets.count;
    auto w = trapezoid_weights(m, g.offsets.step);
    const std::size_t nf = g.frames.size();
    Monopole mono;
    std::vector<std::array<double, 5>> mom(nf);
    for (std::size_t fi = 0; fi < nf; ++fi) {
        std::array<double, 5> acc{};
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                double v = w[i] * w[j] * g.at(fi, i, j);
                double y1 = g.offsets.at(i), y2 = g.offsets.at(j);
                acc[0] += v;
                acc[1] += v * y1;
                acc[2] += v * y2;
                acc[3] += v * y1 * y1;
                acc[4] += v * y2 * y2;
            }
        mom[fi] = acc;
        mono.mass += acc[0];
    }
    mono.mass /= static_cast<double>(nf);
    if (std::abs(mono.mass) > 0) {
        Eigen::MatrixXd A(static_cast<Eigen::Index>(2 * nf), 3);
        Eigen::VectorXd b(static_cast<Eigen::Index>(2 * nf));
        for (std::size_t fi = 0; fi < nf; ++fi) {
            auto r = static_cast<Eigen::Index>(2 * fi);
            for (int a = 0; a < 3; ++a) {
                A(r, a) = g.frames[fi].eta1[a];
                A(r + 1, a) = g.frames[fi].eta2[a];
            }
            b(r) = mom[fi][1] / mono.mass;
            b(r + 1) = mom[fi][2] / mono.mass;
        }
        Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
        mono.center = {c(0), c(1), c(2)};
        double var = 0.0;
        for (std::size_t fi = 0; fi < nf; ++fi) {
            double m1 = dot(g.frames[fi].eta1, mono.center), m2 = dot(g.frames[fi].eta2, mono.center);
            var += 0.5 * (mom[fi][3] / mono.mass - m1 * m1 + mom[fi][4] / mono.mass - m2 * m2);
        }
        mono.width = std::sqrt(std::max(0.0, var / static_cast<double>(nf)));
    }
    const DimensionalConstants k = constants(3, 2);
    return invert_potential(B, target, k.a_n * k.a_n, 2.0, k.c_nd, mono, window);
}

}  // namespace tomokit
