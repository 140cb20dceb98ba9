#include "tomokit/quantum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tomokit/radon.hpp"

namespace tomokit {

namespace {

constexpr double pi = std::numbers::pi;

using Matrix = Eigen::MatrixXcd;

Matrix to_matrix(const OperatorKernel& k) {
    const std::size_t n = k.size();
    Matrix m(static_cast<long>(n), static_cast<long>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(static_cast<long>(i), static_cast<long>(j)) = k(i, j) * k.x.step;
    return m;
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

void require_phase_space(const Geometry& g) {
    if (g.dim != 2) throw InvalidArgument("phase-space grids are two-dimensional (q, p)");
    g.validate();
}

void require_same_grid(const UniformGrid& a, const UniformGrid& b) {
    if (a.count != b.count || std::abs(a.start - b.start) > 1e-12 * (1 + std::abs(a.start)) ||
        std::abs(a.step - b.step) > 1e-12 * a.step)
        throw InvalidArgument("density matrices live on different x grids");
}

// lattice index of value v on grid (start, step) when it falls on a node
bool lattice_index(double v, double start, double step, long& index) {
    double u = (v - start) / step;
    double r = std::round(u);
    if (std::abs(u - r) > 1e-7) return false;
    index = static_cast<long>(r);
    return true;
}

// W(K)(q, p) = (1/(pi hbar)) sum_a h K(x_a, 2q - x_a) exp(-2i (x_a - q) p / hbar)
ScalarField wigner_core(const OperatorKernel& k, const Geometry& ps, double* imag_residue) {
    const UniformGrid& x = k.x;
    const std::size_t N = x.count;
    const double h = x.step, hbar = k.hbar;
    const std::size_t Nq = ps.shape[0], Np = ps.shape[1];
    const double p0 = ps.origin[1], dp = ps.spacing[1];
    ScalarField w(ps);
    double max_re = 0.0, max_im = 0.0;
#pragma omp parallel for schedule(dynamic, 4) reduction(max : max_re, max_im)
    for (std::size_t iq = 0; iq < Nq; ++iq) {
        const double q = ps.coord(0, iq);
        std::vector<cplx> acc(Np, 0.0);
        for (std::size_t a = 0; a < N; ++a) {
            const double xa = x.at(a);
            double u = (2.0 * q - xa - x.start) / h;
            if (u < -1e-9 || u > static_cast<double>(N - 1) + 1e-9) continue;
            cplx v;
            double r = std::round(u);
            if (std::abs(u - r) < 1e-9) {
                v = k(a, static_cast<std::size_t>(r));
            } else {
                auto j = static_cast<std::size_t>(std::floor(u));
                if (j >= N - 1) j = N - 2;
                double t = u - static_cast<double>(j);
                v = (1 - t) * k(a, j) + t * k(a, j + 1);
            }
            if (v == 0.0) continue;
            v *= h / (pi * hbar);
            const double d = xa - q;
            cplx phase = std::polar(1.0, -2.0 * d * p0 / hbar);
            const cplx step = std::polar(1.0, -2.0 * d * dp / hbar);
            for (std::size_t m = 0; m < Np; ++m) {
                acc[m] += v * phase;
                phase *= step;
            }
        }
        for (std::size_t m = 0; m < Np; ++m) {
            w.at(iq, m) = acc[m].real();
            max_re = std::max(max_re, std::abs(acc[m].real()));
            max_im = std::max(max_im, std::abs(acc[m].imag()));
        }
    }
    if (imag_residue) *imag_residue = max_re > 0 ? max_im / max_re : max_im;
    return w;
}

// c_m = sum_{i-j=m} rho_ij h^2, m in [-(N-1), N-1]
std::vector<cplx> difference_sums(const DensityMatrix& rho) {
    const std::size_t N = rho.size();
    const double h2 = rho.x.step * rho.x.step;
    std::vector<cplx> c(2 * N - 1, 0.0);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) c[i + N - 1 - j] += rho(i, j) * h2;
    return c;
}

}  // namespace

void OperatorKernel::validate() const {
    x.validate();
    if (values.size() != x.count * x.count) throw InvalidArgument("kernel size does not match its x grid");
    if (!(hbar > 0)) throw InvalidArgument("hbar must be positive");
}

DensityMatrix pure_state(const std::vector<cplx>& psi, const UniformGrid& x, double hbar, bool strict) {
    x.validate();
    if (psi.size() != x.count) throw InvalidArgument("pure_state: psi has the wrong number of samples");
    if (!(hbar > 0)) throw InvalidArgument("hbar must be positive");
    double n2 = 0.0;
    for (const cplx& v : psi) n2 += std::norm(v);
    n2 *= x.step;
    if (!(n2 > 0) || !std::isfinite(n2)) throw InvalidArgument("pure_state: psi is zero or not finite");
    double scale = 1.0;
    if (std::abs(n2 - 1.0) > 1e-8) {
        std::ostringstream os;
        os << "state has squared norm " << n2;
        if (strict) throw InvariantViolation("normalization", os.str());
        warn(os.str() + ", rescaling to 1");
        scale = 1.0 / std::sqrt(n2);
    }
    DensityMatrix rho(x, hbar);
    const std::size_t N = x.count;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) rho(i, j) = scale * scale * psi[i] * std::conj(psi[j]);
    return rho;
}

DensityMatrix mixture(const std::vector<DensityMatrix>& states, const std::vector<double>& weights) {
    if (states.empty() || states.size() != weights.size())
        throw InvalidArgument("mixture: one weight per state is required");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0)) throw InvalidArgument("mixture: weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("mixture: weights must sum to 1");
    DensityMatrix rho(states[0].x, states[0].hbar);
    for (std::size_t s = 0; s < states.size(); ++s) {
        require_same_grid(states[s].x, rho.x);
        if (states[s].hbar != rho.hbar) throw InvalidArgument("mixture: states disagree on hbar");
        for (std::size_t i = 0; i < rho.values.size(); ++i) rho.values[i] += weights[s] * states[s].values[i];
    }
    return rho;
}

std::vector<cplx> oscillator_state(int n, const UniformGrid& x, double hbar) {
    if (n < 0) throw InvalidArgument("oscillator_state: n must be >= 0");
    if (!(hbar > 0)) throw InvalidArgument("hbar must be positive");
    x.validate();
    std::vector<cplx> psi(x.count);
    const double s = 1.0 / std::sqrt(hbar);
    const double norm0 = std::pow(pi * hbar, -0.25);
    for (std::size_t i = 0; i < x.count; ++i) {
        double xi = x.at(i) * s;
        double prev = 0.0, cur = norm0 * std::exp(-0.5 * xi * xi);
        for (int k = 0; k < n; ++k) {
            double next = std::sqrt(2.0 / (k + 1)) * xi * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
            prev = cur;
            cur = next;
        }
        psi[i] = cur;
    }
    return psi;
}

DensityReport inspect_density(const DensityMatrix& rho) {
    rho.validate();
    DensityReport r;
    const std::size_t N = rho.size();
    for (std::size_t i = 0; i < N; ++i) {
        r.trace += rho(i, i).real() * rho.x.step;
        for (std::size_t j = i; j < N; ++j)
            r.hermitian_deviation = std::max(r.hermitian_deviation, std::abs(rho(i, j) - std::conj(rho(j, i))));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(to_matrix(rho)), Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.max_eigenvalue = es.eigenvalues().maxCoeff();
    return r;
}

void check_density(const DensityMatrix& rho) {
    DensityReport r = inspect_density(rho);
    double scale = 1.0;
    for (const cplx& v : rho.values) scale = std::max(scale, std::abs(v));
    std::ostringstream os;
    if (std::abs(r.trace - 1.0) > 1e-6) {
        os << "trace is " << r.trace;
        throw InvariantViolation("unit trace", os.str());
    }
    if (r.hermitian_deviation > 1e-10 * scale) {
        os << "kernel deviates from its adjoint by " << r.hermitian_deviation;
        throw InvariantViolation("hermitian", os.str());
    }
    if (r.min_eigenvalue < -1e-8) {
        os << "smallest eigenvalue is " << r.min_eigenvalue;
        throw InvariantViolation("positive semidefinite", os.str());
    }
}

WignerField wigner(const DensityMatrix& rho, const Geometry& phase_space) {
    rho.validate();
    require_phase_space(phase_space);
    const double h = rho.x.step, hbar = rho.hbar;
    const double fold = pi * hbar / (2.0 * h);
    const double pmax = std::max(std::abs(phase_space.origin[1]), std::abs(phase_space.coord(1, phase_space.shape[1] - 1)));
    StateMoments m = moments(rho);
    const double spread = std::sqrt(std::max(0.0, m.var_p + m.mean_p * m.mean_p));
    if (5.0 * spread >= fold || pmax + 5.0 * spread > 2.0 * fold) {
        std::ostringstream os;
        os << "x spacing " << h << " resolves |p| < " << fold << " but the state spreads to " << 5.0 * spread
           << " and the grid reaches |p| = " << pmax;
        throw InvariantViolation("Nyquist", os.str());
    }
    double residue = 0.0;
    WignerField w;
    w.hbar = hbar;
    w.field = wigner_core(rho, phase_space, &residue);
    if (residue > 1e-8) {
        std::ostringstream os;
        os << "imaginary residue " << residue << " relative to max |W|";
        throw InvariantViolation("real Wigner function", os.str());
    }
    return w;
}

OperatorKernel weyl_quantize(const ScalarField& sigma, double hbar) {
    require_phase_space(sigma.geometry);
    const Geometry& g = sigma.geometry;
    UniformGrid x{g.origin[0], 2.0 * g.spacing[0], (g.shape[0] - 1) / 2 + 1};
    return weyl_quantize(sigma, hbar, x);
}

// K(x_i, x_j) = sum_l sigma((x_i + x_j)/2, eta_l) exp(i eta_l (x_i - x_j)/hbar) dp/(2 pi hbar)
OperatorKernel weyl_quantize(const ScalarField& sigma, double hbar, const UniformGrid& x) {
    require_phase_space(sigma.geometry);
    if (!(hbar > 0)) throw InvalidArgument("hbar must be positive");
    x.validate();
    const Geometry& g = sigma.geometry;
    const double hq = g.spacing[0];
    long ratio = 0, offset = 0;
    if (!lattice_index(x.step / 2.0, 0.0, hq, ratio) || ratio < 1 || !lattice_index(x.start, g.origin[0], hq, offset)) {
        std::ostringstream os;
        os << "midpoints of the x grid (start " << x.start << ", step " << x.step << ") miss the q lattice (start "
           << g.origin[0] << ", step " << hq << ")";
        throw InvalidArgument(os.str());
    }
    const std::size_t N = x.count, Np = g.shape[1];
    const auto Nq = static_cast<long>(g.shape[0]);
    const double p0 = g.origin[1], dp = g.spacing[1];
    OperatorKernel k(x, hbar);
    const double c = dp / (2.0 * pi * hbar);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            long iq = offset + static_cast<long>(i + j) * ratio;
            if (iq < 0 || iq >= Nq) continue;
            const double* row = &sigma.values[static_cast<std::size_t>(iq) * Np];
            const double d = x.at(i) - x.at(j);
            cplx phase = std::polar(1.0, p0 * d / hbar);
            const cplx step = std::polar(1.0, dp * d / hbar);
            cplx acc = 0.0;
            for (std::size_t l = 0; l < Np; ++l) {
                acc += row[l] * phase;
                phase *= step;
            }
            k(i, j) = c * acc;
            k(j, i) = std::conj(c * acc);
        }
    }
    return k;
}

ScalarField dequantize(const OperatorKernel& kernel, const Geometry& phase_space) {
    kernel.validate();
    require_phase_space(phase_space);
    ScalarField w = wigner_core(kernel, phase_space, nullptr);
    for (double& v : w.values) v *= 2.0 * pi * kernel.hbar;
    return w;
}

TracePairing trace_pairing(const ScalarField& sigma, const ScalarField& tau, double hbar) {
    if (!sigma.geometry.same_as(tau.geometry)) throw InvalidArgument("trace_pairing: symbols on different grids");
    OperatorKernel a = weyl_quantize(sigma, hbar);
    OperatorKernel b = weyl_quantize(tau, hbar);
    const std::size_t N = a.size();
    const double h = a.x.step;
    double lhs = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) lhs += (a(i, j) * b(j, i)).real();
    lhs *= h * h;
    double rhs = 0.0;
    for (std::size_t i = 0; i < sigma.size(); ++i) rhs += sigma.values[i] * tau.values[i];
    rhs *= sigma.geometry.cell_volume() / (2.0 * pi * hbar);
    TracePairing r{lhs, rhs, 0.0};
    const double diff = std::abs(lhs - rhs);
    r.deviation = diff == 0.0 ? 0.0 : diff / std::max(std::abs(rhs), std::abs(lhs));
    return r;
}

QuadratureTomogramSet quadrature_tomograms(const DensityMatrix& rho, const Geometry& phase_space,
                                           const std::vector<Vec3>& params, const std::vector<UniformGrid>& offsets) {
    WignerField w = wigner(rho, phase_space);
    QuadratureTomogramSet t;
    t.hbar = rho.hbar;
    t.tomograms = m2_forward(w.field, params, offsets);
    t.min_value = t.tomograms.data.empty() ? 0.0 : t.tomograms.data[0];
    for (double& v : t.tomograms.data) {
        t.min_value = std::min(t.min_value, v);
        if (v < -1e-9) ++t.violations;
        if (v < 0.0) v = 0.0;
    }
    if (t.violations > 0) {
        std::ostringstream os;
        os << t.violations << " tomogram samples below -1e-9 (min " << t.min_value << ") were clipped";
        warn(os.str());
    }
    return t;
}

QuadratureTomogramSet quadrature_tomograms(const DensityMatrix& rho, const Geometry& phase_space, std::size_t angles,
                                           const UniformGrid& offsets) {
    if (angles == 0) throw InvalidArgument("quadrature_tomograms: need at least one angle");
    std::vector<Vec3> params;
    for (std::size_t j = 0; j < angles; ++j) {
        double th = pi * static_cast<double>(j) / static_cast<double>(angles);
        params.push_back({std::cos(th), std::sin(th), 0.0});
    }
    return quadrature_tomograms(rho, phase_space, params, std::vector<UniformGrid>(angles, offsets));
}

// rho(x, y) = (1/2pi) int W^(k, -(x - y)/hbar) exp(i k (x + y)/2) dk
DensityMatrix reconstruct_density(const QuadratureTomogramSet& t, const UniformGrid& x, const ReconstructOptions& options,
                                  ReconstructReport* report) {
    x.validate();
    if (!(t.hbar > 0)) throw InvalidArgument("hbar must be positive");
    const M2Tomogram& m = t.tomograms;
    m.validate();
    if (m.dim != 2) throw InvalidArgument("quadrature tomograms are planar");
    DensityRowReport rows = density_rows(m.data, m.offsets);
    if (rows.max_mass_deviation > options.normalization_tolerance) {
        std::ostringstream os;
        os << "a tomogram row integrates to 1 +- " << rows.max_mass_deviation;
        throw InvariantViolation("row normalization", os.str());
    }
    PolarSpectrum spec(m, options.oversample);
    if (spec.directions() < options.min_directions) {
        std::ostringstream os;
        os << spec.directions() << " distinct directions, at least " << options.min_directions << " required";
        throw InvariantViolation("angular coverage", os.str());
    }
    const std::size_t N = x.count;
    const double h = x.step, hbar = t.hbar;
    double umax = std::max(std::abs(x.start), std::abs(x.end()));
    double qmax = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double lambda = norm(m.mus[r]);
        qmax = std::max({qmax, std::abs(m.offsets[r].start) / lambda, std::abs(m.offsets[r].end()) / lambda});
    }
    // the k-sum is periodic in (x + y)/2 with period 2 pi / dk
    const double dk = 2.0 * pi / (2.0 * (umax + qmax));
    const double kmax = std::min(spec.tau_max(), 2.0 * pi / h);
    auto nk = static_cast<long>(std::floor(kmax / dk));
    const std::size_t K = static_cast<std::size_t>(2 * nk + 1);
    std::vector<cplx> table((2 * N - 1) * K);
#pragma omp parallel for schedule(static)
    for (std::size_t d = 0; d < 2 * N - 1; ++d) {
        double k2 = -(static_cast<double>(d) - static_cast<double>(N - 1)) * h / hbar;
        for (std::size_t j = 0; j < K; ++j)
            table[d * K + j] = spec((static_cast<double>(j) - static_cast<double>(nk)) * dk, k2);
    }
    // drop wave numbers where the spectrum has died out
    double peak = 0.0;
    for (const cplx& v : table) peak = std::max(peak, std::abs(v));
    std::size_t lo = 0, hi = K;
    auto column_max = [&](std::size_t j) {
        double mx = 0.0;
        for (std::size_t d = 0; d < 2 * N - 1; ++d) mx = std::max(mx, std::abs(table[d * K + j]));
        return mx;
    };
    while (lo + 1 < hi && column_max(lo) <= 1e-15 * peak) ++lo;
    while (hi - 1 > lo && column_max(hi - 1) <= 1e-15 * peak) --hi;

    DensityMatrix rho(x, hbar);
    const double k_lo = (static_cast<double>(lo) - static_cast<double>(nk)) * dk;
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            const double u = 0.5 * (x.at(i) + x.at(j));
            const cplx* row = &table[(i + N - 1 - j) * K];
            cplx phase = std::polar(1.0, k_lo * u);
            const cplx step = std::polar(1.0, dk * u);
            cplx acc = 0.0;
            for (std::size_t q = lo; q < hi; ++q) {
                acc += row[q] * phase;
                phase *= step;
            }
            rho(i, j) = acc * dk / (2.0 * pi);
        }
    }
    ReconstructReport rep;
    rep.directions = spec.directions();
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = i; j < N; ++j) {
            cplx a = rho(i, j), b = std::conj(rho(j, i));
            rep.hermitian_correction = std::max(rep.hermitian_correction, 0.5 * std::abs(a - b));
            cplx mean = 0.5 * (a + b);
            rho(i, j) = mean;
            rho(j, i) = std::conj(mean);
        }
    }
    if (options.clip_negative) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(to_matrix(rho));
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
        Matrix a = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) rho(i, j) = a(static_cast<long>(i), static_cast<long>(j)) / h;
    }
    double trace = 0.0;
    for (std::size_t i = 0; i < N; ++i) trace += rho(i, i).real() * h;
    rep.trace_correction = std::abs(trace - 1.0);
    if (!(trace > 0) || rep.trace_correction > options.max_trace_correction) {
        std::ostringstream os;
        os << "reconstructed trace " << trace << " is inconsistent with normalized tomograms";
        throw InvariantViolation("unit trace", os.str());
    }
    for (cplx& v : rho.values) v /= trace;
    if (report) {
        rep.min_eigenvalue = inspect_density(rho).min_eigenvalue;
        *report = rep;
    }
    return rho;
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    a.validate();
    b.validate();
    require_same_grid(a.x, b.x);
    Eigen::SelfAdjointEigenSolver<Matrix> ea(hermitian_part(to_matrix(a)));
    Eigen::VectorXd root = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Matrix sa = ea.eigenvectors() * root.asDiagonal() * ea.eigenvectors().adjoint();
    Matrix mid = hermitian_part(sa * hermitian_part(to_matrix(b)) * sa);
    Eigen::SelfAdjointEigenSolver<Matrix> em(mid, Eigen::EigenvaluesOnly);
    double s = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return s * s;
}

double fidelity(const DensityMatrix& rho, const std::vector<cplx>& psi) {
    rho.validate();
    if (psi.size() != rho.size()) throw InvalidArgument("fidelity: psi has the wrong number of samples");
    const std::size_t N = rho.size();
    cplx acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        cplx row = 0.0;
        for (std::size_t j = 0; j < N; ++j) row += rho(i, j) * psi[j];
        acc += std::conj(psi[i]) * row;
    }
    return acc.real() * rho.x.step * rho.x.step;
}

cplx expectation(const DensityMatrix& rho, const ScalarField& sigma) {
    OperatorKernel k = weyl_quantize(sigma, rho.hbar, rho.x);
    const std::size_t N = rho.size();
    cplx acc = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) acc += k(i, j) * rho(j, i);
    return acc * rho.x.step * rho.x.step;
}

double phase_space_average(const WignerField& w, const ScalarField& sigma) {
    if (!w.field.geometry.same_as(sigma.geometry)) throw InvalidArgument("phase_space_average: grids differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < sigma.size(); ++i) acc += sigma.values[i] * w.field.values[i];
    return acc * sigma.geometry.cell_volume();
}

std::vector<double> momentum_density(const DensityMatrix& rho, const UniformGrid& p) {
    rho.validate();
    const std::vector<cplx> c = difference_sums(rho);
    const std::size_t N = rho.size();
    const double h = rho.x.step, hbar = rho.hbar;
    std::vector<double> out(p.count);
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < p.count; ++j) {
        cplx acc = 0.0;
        for (std::size_t m = 0; m < c.size(); ++m) {
            double d = (static_cast<double>(m) - static_cast<double>(N - 1)) * h;
            acc += c[m] * std::polar(1.0, -p.at(j) * d / hbar);
        }
        out[j] = acc.real() / (2.0 * pi * hbar);
    }
    return out;
}

StateMoments moments(const DensityMatrix& rho) {
    rho.validate();
    const std::size_t N = rho.size();
    const double h = rho.x.step, hbar = rho.hbar;
    StateMoments s;
    double tr = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        double w = rho(i, i).real() * h, xi = rho.x.at(i);
        tr += w;
        m1 += w * xi;
        m2 += w * xi * xi;
    }
    if (!(tr > 0)) throw InvariantViolation("unit trace", "density has non-positive trace");
    s.mean_q = m1 / tr;
    s.var_q = m2 / tr - s.mean_q * s.mean_q;
    // one period of the momentum density of the lattice kernel, sampled so the sum is exact
    const std::size_t M = 2 * N - 1;
    const double dp = 2.0 * pi * hbar / (static_cast<double>(M) * h);
    UniformGrid pg{-static_cast<double>(N - 1) * dp, dp, M};
    std::vector<double> P = momentum_density(rho, pg);
    double t0 = 0.0, p1 = 0.0, p2 = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        double pj = pg.at(j);
        t0 += P[j] * dp;
        p1 += P[j] * pj * dp;
        p2 += P[j] * pj * pj * dp;
    }
    s.mean_p = p1 / t0;
    s.var_p = p2 / t0 - s.mean_p * s.mean_p;
    return s;
}

}  // namespace tomokit
