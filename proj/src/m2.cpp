#include "tomokit/m2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "fft.hpp"

namespace tomokit {

using std::numbers::pi;

std::size_t M2Tomogram::row_start(std::size_t r) const {
    std::size_t s = 0;
    for (std::size_t i = 0; i < r; ++i) s += offsets[i].count;
    return s;
}

std::vector<double> M2Tomogram::row(std::size_t r) const {
    std::size_t s = row_start(r);
    return {data.begin() + static_cast<long>(s), data.begin() + static_cast<long>(s + offsets[r].count)};
}

double M2Tomogram::value(std::size_t r, double X) const {
    const UniformGrid& o = offsets[r];
    double u = (X - o.start) / o.step;
    double top = static_cast<double>(o.count - 1);
    if (!(u >= 0.0 && u <= top)) return 0.0;
    auto j = static_cast<std::size_t>(u);
    if (j >= o.count - 1) j = o.count - 2;
    double t = u - static_cast<double>(j);
    const double* p = data.data() + row_start(r);
    return (1 - t) * p[j] + t * p[j + 1];
}

void M2Tomogram::validate() const {
    if (dim < 2 || dim > 3) throw InvalidArgument("M2 tomogram dimension must be 2 or 3");
    if (mus.size() != offsets.size()) throw InvalidArgument("M2 tomogram: one offset grid per covector is required");
    if (!weights.empty() && weights.size() != mus.size()) throw InvalidArgument("M2 tomogram: weight count mismatch");
    std::size_t total = 0;
    for (std::size_t r = 0; r < mus.size(); ++r) {
        if (!(norm(mus[r]) > 0)) throw InvalidArgument("M2 tomogram: covector mu = 0");
        offsets[r].validate();
        total += offsets[r].count;
    }
    if (total != data.size()) throw InvalidArgument("M2 tomogram: data size mismatch");
}

namespace {

Vec3 unit(const Vec3& mu) {
    double n = norm(mu);
    if (!(n > 0)) throw InvalidArgument("covector mu = 0 has no direction");
    return {mu[0] / n, mu[1] / n, mu[2] / n};
}

DirectionSet single(const Vec3& xi, int dim) {
    DirectionSet s;
    s.dim = dim;
    s.directions = {xi};
    s.weights = {1.0};
    return s;
}

}  // namespace

M2Tomogram m2_forward(const ScalarField& f, const std::vector<Vec3>& mus, const std::vector<UniformGrid>& offsets) {
    if (mus.size() != offsets.size()) throw InvalidArgument("m2_forward: one offset grid per covector is required");
    M2Tomogram t;
    t.dim = f.geometry.dim;
    t.mus = mus;
    t.offsets = offsets;
    t.source_support_radius = effective_support_radius(f);
    for (std::size_t r = 0; r < mus.size(); ++r) {
        const double lambda = norm(mus[r]);
        if (!(lambda > 0)) throw InvalidArgument("m2_forward: covector mu = 0");
        Vec3 xi = unit(mus[r]);
        if (t.dim == 2) xi[2] = 0.0;
        UniformGrid scaled{offsets[r].start / lambda, offsets[r].step / lambda, offsets[r].count};
        Sinogram g = radon_forward(f, single(xi, t.dim), scaled);
        for (double v : g.data) t.data.push_back(v / lambda);
    }
    return t;
}

M2Tomogram m2_forward(const ScalarField& f, const std::vector<Vec3>& mus, std::size_t count) {
    const double R = effective_support_radius(f);
    std::vector<UniformGrid> offsets;
    for (const Vec3& mu : mus) {
        double lambda = norm(mu);
        if (!(lambda > 0)) throw InvalidArgument("m2_forward: covector mu = 0");
        offsets.push_back(UniformGrid::symmetric(lambda * R, count));
    }
    return m2_forward(f, mus, offsets);
}

M2Tomogram m2_from_radon(const Sinogram& g, const std::vector<double>& scales) {
    g.validate();
    if (!scales.empty() && scales.size() != g.directions.size())
        throw InvalidArgument("m2_from_radon: one scale per direction is required");
    M2Tomogram t;
    t.dim = g.dim;
    t.weights = g.directions.weights;
    t.source_support_radius = g.source_support_radius;
    for (std::size_t d = 0; d < g.directions.size(); ++d) {
        double s = scales.empty() ? 1.0 : scales[d];
        if (!(s > 0)) throw InvalidArgument("m2_from_radon: scales must be positive");
        const Vec3& xi = g.directions.directions[d];
        t.mus.push_back({s * xi[0], s * xi[1], s * xi[2]});
        t.offsets.push_back({s * g.offsets.start, s * g.offsets.step, g.offsets.count});
        for (double v : g.row(d)) t.data.push_back(s == 1.0 ? v : v / s);
    }
    return t;
}

Sinogram radon_from_m2(const M2Tomogram& t, const UniformGrid* offsets) {
    t.validate();
    if (t.rows() == 0) throw InvalidArgument("radon_from_m2: empty tomogram");
    Sinogram g;
    g.dim = t.dim;
    g.directions.dim = t.dim;
    g.source_support_radius = t.source_support_radius;
    const double l0 = norm(t.mus[0]);
    g.offsets = offsets ? *offsets : UniformGrid{t.offsets[0].start / l0, t.offsets[0].step / l0, t.offsets[0].count};
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const double lambda = norm(t.mus[r]);
        g.directions.directions.push_back(unit(t.mus[r]));
        const UniformGrid& o = t.offsets[r];
        const bool same = lambda == l0 && o.start == t.offsets[0].start && o.step == t.offsets[0].step &&
                          o.count == g.offsets.count && !offsets;
        auto row = t.row(r);
        for (std::size_t j = 0; j < g.offsets.count; ++j) {
            if (same) {
                g.data.push_back(lambda == 1.0 ? row[j] : row[j] * lambda);
            } else {
                g.data.push_back(lambda * t.value(r, lambda * g.offsets.at(j)));
            }
        }
    }
    if (!t.weights.empty()) {
        g.directions.weights = t.weights;
    } else if (t.dim == 3) {
        g.directions.weights.assign(t.rows(), 4.0 * pi / static_cast<double>(t.rows()));
    } else {
        // angular trapezoid weights on the half circle, doubled for the even identification
        const std::size_t n = t.rows();
        std::vector<double> ang(n);
        for (std::size_t r = 0; r < n; ++r) {
            const Vec3& xi = g.directions.directions[r];
            double a = std::atan2(xi[1], xi[0]);
            if (a < 0) a += pi;
            if (a >= pi) a -= pi;
            ang[r] = a;
        }
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ang[a] < ang[b]; });
        g.directions.weights.assign(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            double prev = k == 0 ? ang[order[n - 1]] - pi : ang[order[k - 1]];
            double next = k + 1 == n ? ang[order[0]] + pi : ang[order[k + 1]];
            g.directions.weights[order[k]] = next - prev;  // 2 * (next - prev) / 2
        }
    }
    return g;
}

double m2_query(const M2Tomogram& t, double X, const Vec3& mu) {
    const double lambda = norm(mu);
    if (!(lambda > 0)) throw InvalidArgument("m2_query: covector mu = 0");
    Vec3 xi = unit(mu);
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const double lr = norm(t.mus[r]);
        Vec3 xr = unit(t.mus[r]);
        double c = dot(xi, xr);
        if (std::abs(c - 1.0) < 1e-12) return (lr / lambda) * t.value(r, X * lr / lambda);
        if (std::abs(c + 1.0) < 1e-12) return (lr / lambda) * t.value(r, -X * lr / lambda);
    }
    throw InvalidArgument("m2_query: no stored row is parallel to the requested covector");
}

double m2_normalization_check(const M2Tomogram& t) {
    t.validate();
    return density_rows(t.data, t.offsets).max_mass_deviation;
}

double m2_homogeneity_check(const M2Tomogram& t) {
    t.validate();
    double dev = 0.0;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const double lambda = norm(t.mus[r]);
        Vec3 xi = unit(t.mus[r]);
        // look for the unit row along the same direction
        for (std::size_t u = 0; u < t.rows(); ++u) {
            if (std::abs(norm(t.mus[u]) - 1.0) > 1e-12 || std::abs(dot(unit(t.mus[u]), xi) - 1.0) > 1e-12) continue;
            auto row = t.row(r);
            for (std::size_t j = 0; j < row.size(); ++j) {
                double X = t.offsets[r].at(j);
                dev = std::max(dev, std::abs(row[j] - t.value(u, X / lambda) / lambda));
            }
            break;
        }
    }
    return dev;
}

PolarSpectrum::PolarSpectrum(const M2Tomogram& t, int oversample) {
    t.validate();
    if (t.dim != 2) throw InvalidArgument("polar spectrum assembly is implemented for planar data");
    if (t.rows() == 0) throw InvalidArgument("tomogram has no rows");
    if (oversample < 1) throw InvalidArgument("oversample must be >= 1");
    struct Row {
        double angle;
        UniformGrid grid;
        std::vector<double> values;
    };
    std::vector<Row> rows;
    double dX = INFINITY, extent = 0.0;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const double lambda = norm(t.mus[r]);
        Vec3 xi = unit(t.mus[r]);
        Row row;
        row.grid = {t.offsets[r].start / lambda, t.offsets[r].step / lambda, t.offsets[r].count};
        row.values = t.row(r);
        for (double& v : row.values) v *= lambda;
        double a = std::atan2(xi[1], xi[0]);
        if (a < 0 || a >= pi) {
            // (X, xi) ~ (-X, -xi)
            a = a < 0 ? a + pi : a - pi;
            std::reverse(row.values.begin(), row.values.end());
            row.grid.start = -row.grid.end();
        }
        if (a >= pi) a -= pi;
        row.angle = a;
        dX = std::min(dX, row.grid.step);
        extent = std::max({extent, std::abs(row.grid.start), std::abs(row.grid.end())});
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.angle < b.angle; });
    auto M = static_cast<std::size_t>(std::ceil(extent / dX - 1e-9));
    const std::size_t L = 2 * M + 1;
    const std::size_t P = static_cast<std::size_t>(oversample) * L;
    dtau_ = 2.0 * pi / (static_cast<double>(P) * dX);
    half_ = P / 2;
    tau_max_ = pi / dX;
    for (const Row& row : rows) {
        if (!angles_.empty() && row.angle - angles_.back() < 1e-12) continue;
        std::vector<cplx> buf(P, 0.0);
        for (std::size_t j = 0; j < L; ++j) {
            double X = (static_cast<double>(j) - static_cast<double>(M)) * dX;
            double u = (X - row.grid.start) / row.grid.step;
            double v = 0.0;
            double top = static_cast<double>(row.grid.count - 1);
            if (u >= -1e-9 && u <= top + 1e-9) {
                u = std::clamp(u, 0.0, top);
                auto i = static_cast<std::size_t>(u);
                if (i >= row.grid.count - 1) i = row.grid.count - 2;
                double w = u - static_cast<double>(i);
                v = w == 0.0 ? row.values[i] : (1 - w) * row.values[i] + w * row.values[i + 1];
            }
            buf[j] = v;
        }
        detail::fft1(buf, -1);
        std::vector<cplx> s(P);
        for (std::size_t q = 0; q < P; ++q) {
            // centred index: tau = (q - half) * dtau
            long m = static_cast<long>(q) - static_cast<long>(half_);
            std::size_t src = static_cast<std::size_t>((m + static_cast<long>(P)) % static_cast<long>(P));
            double tau = static_cast<double>(m) * dtau_;
            s[q] = dX * buf[src] * std::polar(1.0, tau * static_cast<double>(M) * dX);
        }
        angles_.push_back(row.angle);
        slices_.push_back(std::move(s));
    }
}

cplx PolarSpectrum::slice(std::size_t d, double tau) const {
    // symmetric range only, so that S(-tau) = conj S(tau) holds exactly
    const double lim = static_cast<double>(slices_[d].size() - 1 - half_) * dtau_;
    if (std::abs(tau) > lim) return 0.0;
    double u = tau / dtau_ + static_cast<double>(half_);
    auto q = static_cast<std::size_t>(u);
    if (q >= slices_[d].size() - 1) q = slices_[d].size() - 2;
    double w = u - static_cast<double>(q);
    return (1 - w) * slices_[d][q] + w * slices_[d][q + 1];
}

cplx PolarSpectrum::operator()(double k1, double k2) const {
    double rho = std::hypot(k1, k2);
    if (rho > tau_max_) return 0.0;
    double phi = std::atan2(k2, k1);
    double tau = rho;
    if (phi < 0) {
        phi += pi;
        tau = -rho;
    }
    if (phi >= pi) {
        phi -= pi;
        tau = -tau;
    }
    const std::size_t D = angles_.size();
    if (D == 1) return slice(0, tau);
    auto it = std::upper_bound(angles_.begin(), angles_.end(), phi);
    std::size_t hi = static_cast<std::size_t>(it - angles_.begin());
    double a0, a1;
    cplx v0, v1;
    if (hi == 0) {
        a0 = angles_[D - 1] - pi;
        v0 = slice(D - 1, -tau);
        a1 = angles_[0];
        v1 = slice(0, tau);
    } else if (hi == D) {
        a0 = angles_[D - 1];
        v0 = slice(D - 1, tau);
        a1 = angles_[0] + pi;
        v1 = slice(0, -tau);
    } else {
        a0 = angles_[hi - 1];
        v0 = slice(hi - 1, tau);
        a1 = angles_[hi];
        v1 = slice(hi, tau);
    }
    double w = (phi - a0) / (a1 - a0);
    return (1 - w) * v0 + w * v1;
}

ScalarField m2_invert(const M2Tomogram& t, const Geometry& target, const M2InvertOptions& options,
                      M2InvertReport* report) {
    if (t.rows() == 0 || t.data.empty()) throw InvalidArgument("m2_invert: empty tomogram");
    if (target.dim != 2) throw InvalidArgument("m2_invert: only planar reconstruction is implemented");
    target.validate();
    PolarSpectrum ps(t, options.oversample);
    M2InvertReport rep;
    rep.directions = ps.directions();
    rep.sparse_coverage = rep.directions < options.min_directions;
    if (rep.sparse_coverage) {
        std::ostringstream os;
        os << "m2_invert: only " << rep.directions << " distinct directions (minimum " << options.min_directions << ")";
        warn(os.str());
    }
    if (report) *report = rep;
    Spectrum s{target, std::vector<cplx>(target.size())};
#pragma omp parallel for
    for (std::size_t i = 0; i < target.size(); ++i) {
        auto idx = target.unravel(i);
        bool unpaired = false;
        for (int a = 0; a < 2; ++a)
            if (target.shape[a] % 2 == 0 && idx[a] == 0) unpaired = true;
        if (unpaired) continue;
        Vec3 k = s.k_point(i);
        s.values[i] = ps(k[0], k[1]);
    }
    return real_part(dft_inverse(s), 1e-8);
}

}  // namespace tomokit
