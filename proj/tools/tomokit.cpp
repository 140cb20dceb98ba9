// tomokit command line: phantoms, transforms, inversions, quantum tomography,
// acquisition and the acceptance suite over TGM files.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tomokit/io.hpp"
#include "tomokit/parallel.hpp"
#include "tomokit/verify.hpp"

using namespace tomokit;
using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

struct Globals {
    int threads = 0;
    std::string dump_csv;
};

void check_paths(const std::string& in, const std::string& out) {
    if (in.empty() || out.empty()) return;
    std::error_code ec;
    if (in == out || std::filesystem::equivalent(in, out, ec))
        throw InvalidArgument("input and output paths must differ ('" + in + "')");
}

void save(const TgmFile& file, const std::string& path, const Globals& g) {
    write_tgm(path, file);
    if (!g.dump_csv.empty()) {
        std::ofstream csv(g.dump_csv);
        if (!csv) throw InvalidArgument("cannot write '" + g.dump_csv + "'");
        csv << to_csv(file);
    }
}

void save_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

std::string sidecar(const std::string& out, const std::string& metrics) {
    if (!metrics.empty()) return metrics;
    return out + ".json";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Cycled magnitudes for covector rows: row j gets scales[j % size].
std::vector<Vec3> covectors(const DirectionSet& dirs, const std::vector<double>& scales) {
    std::vector<Vec3> mus;
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        const double s = scales[j % scales.size()];
        const Vec3& d = dirs.directions[j];
        mus.push_back({s * d[0], s * d[1], s * d[2]});
    }
    return mus;
}

bool edges_nonzero(const std::vector<double>& data, const std::vector<std::size_t>& starts,
                   const std::vector<std::size_t>& counts) {
    for (std::size_t r = 0; r < starts.size(); ++r) {
        if (counts[r] == 0) continue;
        if (data[starts[r]] != 0.0 || data[starts[r] + counts[r] - 1] != 0.0) return true;
    }
    return false;
}

bool truncated(const Sinogram& g) {
    std::vector<std::size_t> s, c;
    for (std::size_t d = 0; d < g.directions.size(); ++d) {
        s.push_back(d * g.offsets.count);
        c.push_back(g.offsets.count);
    }
    return edges_nonzero(g.data, s, c);
}

bool truncated(const M2Tomogram& t) {
    std::vector<std::size_t> s, c;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        s.push_back(t.row_start(r));
        c.push_back(t.offsets[r].count);
    }
    return edges_nonzero(t.data, s, c);
}

// ------------------------------------------------------------------ phantom
struct PhantomArgs {
    std::string kind = "disks2d";
    std::size_t grid = 256;
    double extent = 1.0;
    double sigma = 0.2;
    double cutoff = 8.0;
    std::vector<double> center;
    int supersample = 4;
    int smoothness = 3;
    double radius = 1.0;
    bool normalize = false;
    std::string out;
};

void run_phantom(const PhantomArgs& a, const Globals& g) {
    PhantomSpec spec;
    spec.normalize = a.normalize;
    spec.supersample = a.supersample;
    int dim = 2;
    Vec3 c{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < a.center.size() && i < 3; ++i) c[i] = a.center[i];
    if (a.kind == "disks2d") {
        spec.kind = PhantomKind::disks2d;
        spec.disks = shepp_logan_disks();
    } else if (a.kind == "gaussian" || a.kind == "gaussian3d") {
        spec.kind = PhantomKind::gaussian_mix;
        spec.gaussians = {{c, a.sigma, 1.0}};
        spec.gaussian_cutoff = a.cutoff;
        if (a.kind == "gaussian3d") dim = 3;
    } else if (a.kind == "ball3d") {
        spec.kind = PhantomKind::ball3d;
        spec.disks = {{c, a.radius, 1.0}};
        spec.smoothness = a.smoothness;
        dim = 3;
    } else {
        throw InvalidArgument("unknown phantom kind '" + a.kind + "'");
    }
    save(to_tgm(phantom(spec, Geometry::cube(dim, a.grid, -a.extent, a.extent))), a.out, g);
}

// ------------------------------------------------------------------ forward
struct ForwardArgs {
    std::string in, out, transform = "radon";
    std::size_t angles = 180;
    std::size_t offsets = 256;
    std::vector<double> scales{1.0};
    std::size_t points = 600;
};

void run_forward(const ForwardArgs& a, const Globals& g) {
    check_paths(a.in, a.out);
    ScalarField f = field_from_tgm(read_tgm(a.in));
    const int dim = f.geometry.dim;
    const double R = effective_support_radius(f);
    auto directions = [&] {
        return dim == 2 ? DirectionSet::half_circle(a.angles) : DirectionSet::fibonacci_hemisphere(a.angles);
    };
    TgmFile out;
    if (a.transform == "radon") {
        out = to_tgm(radon_forward(f, directions(), UniformGrid::symmetric(R, a.offsets)));
    } else if (a.transform == "m2") {
        out = to_tgm(m2_forward(f, covectors(directions(), a.scales), a.offsets));
    } else if (a.transform == "circle" || a.transform == "hyperbola") {
        if (dim != 2) throw InvalidArgument("curved families act on planar densities");
        MapName m = a.transform == "circle" ? MapName::conformal_inversion : MapName::hyperbolic;
        out = to_tgm(curved_forward(f, builtin_map(m), covectors(DirectionSet::half_circle(a.angles), a.scales), a.offsets));
    } else if (a.transform == "sphere") {
        SphereOptions so;
        so.points = a.points;
        out = to_tgm(sphere_mean_forward(f, f.geometry, so));
    } else if (a.transform == "codim") {
        out = to_tgm(codim_forward(f, a.angles, UniformGrid::covering(R, f.geometry.min_spacing())));
    } else {
        throw InvalidArgument("unknown transform '" + a.transform + "'");
    }
    save(out, a.out, g);
}

// ------------------------------------------------------------------- invert
struct InvertArgs {
    std::string in, out, method = "fbp", truth, metrics;
    std::size_t grid = 256;
    double extent = 0.0;  // 0: the source support radius
    std::string path = "filter-first";
    std::string window = "raised-cosine";
    double window_fraction = 0.2;
    double radius = 0.0;  // john: support radius (0: recorded one)
    std::string laplacian = "fd";
};

FilterWindow make_window(const InvertArgs& a) {
    FilterWindow w;
    if (a.window == "none") w.kind = WindowKind::none;
    else if (a.window == "raised-cosine") w.kind = WindowKind::raised_cosine;
    else throw InvalidArgument("unknown filter window '" + a.window + "'");
    w.fraction = a.window_fraction;
    return w;
}

void run_invert(const InvertArgs& a, const Globals& g) {
    check_paths(a.in, a.out);
    TgmFile file = read_tgm(a.in);
    std::optional<ScalarField> truth;
    if (!a.truth.empty()) truth = field_from_tgm(read_tgm(a.truth));
    auto target = [&](int dim, double support) {
        if (truth) return truth->geometry;
        double e = a.extent > 0 ? a.extent : support;
        if (!(e > 0)) throw InvalidArgument("output extent unknown: pass --extent or --truth");
        return Geometry::cube(dim, a.grid, -e, e);
    };
    json m;
    m["method"] = a.method;
    m["input"] = a.in;
    ScalarField rec;
    const auto t0 = std::chrono::steady_clock::now();
    if (a.method == "fbp") {
        Sinogram s = sinogram_from_tgm(file);
        FbpOptions o;
        o.window = make_window(a);
        if (a.path == "filter-first") o.path = FbpPath::filter_first;
        else if (a.path == "backproject-first") o.path = FbpPath::backproject_first;
        else throw InvalidArgument("unknown FBP path '" + a.path + "'");
        rec = fbp_invert(s, target(s.dim, s.source_support_radius), o);
        m["truncated"] = truncated(s);
    } else if (a.method == "m2") {
        M2Tomogram t = m2_from_tgm(file);
        M2InvertReport rep;
        rec = m2_invert(t, target(2, t.source_support_radius), {}, &rep);
        m["truncated"] = truncated(t);
        m["sparse_coverage"] = rep.sparse_coverage;
        m["directions"] = rep.directions;
    } else if (a.method == "curved") {
        CurvedTomograms t = curved_from_tgm(file);
        std::size_t masked = 0;
        rec = curved_invert(t, builtin_map(t.map), target(2, 0.0), {}, &masked);
        m["truncated"] = truncated(t.tomograms);
        m["masked_samples"] = masked;
        m["map"] = map_name(t.map);
    } else if (a.method == "john") {
        SphereMeanField s = sphere_means_from_tgm(file);
        JohnOptions o;
        if (a.laplacian == "fd") o.laplacian = LaplacianKind::finite_difference;
        else if (a.laplacian == "spectral") o.laplacian = LaplacianKind::spectral;
        else throw InvalidArgument("unknown Laplacian '" + a.laplacian + "'");
        JohnReport rep;
        double R = a.radius > 0 ? a.radius : s.source_support_radius;
        rec = john_invert(s, R, o, &rep);
        m["truncated"] = false;
        m["series_terms"] = rep.terms;
        m["tail_relative"] = rep.tail_relative;
        if (truth && !truth->geometry.same_as(rec.geometry))
            throw InvalidArgument("--truth must share the sphere-mean grid");
    } else if (a.method == "codim") {
        LineTomograms t = line_tomograms_from_tgm(file);
        rec = codim_invert(t, target(3, t.source_support_radius), make_window(a));
        const std::size_t n = t.offsets.count;
        bool edge = false;
        for (std::size_t fr = 0; fr < t.frames.size() && !edge; ++fr)
            for (std::size_t i = 0; i < n && !edge; ++i)
                edge = t.at(fr, i, 0) != 0.0 || t.at(fr, i, n - 1) != 0.0 || t.at(fr, 0, i) != 0.0 || t.at(fr, n - 1, i) != 0.0;
        m["truncated"] = edge;
    } else {
        throw InvalidArgument("unknown method '" + a.method + "'");
    }
    m["runtime_s"] = seconds_since(t0);
    if (truth) {
        m["truth"] = a.truth;
        m["rel_l2"] = relative_l2(rec, *truth);
    } else {
        m["rel_l2"] = nullptr;
    }
    save(to_tgm(rec), a.out, g);
    save_json(m, sidecar(a.out, a.metrics));
    std::cout << m.dump() << '\n';
}

// ------------------------------------------------------------------ convert
struct ConvertArgs {
    std::string in, out;
    std::vector<double> scales{1.0};
};

void run_convert(const ConvertArgs& a, const Globals& g) {
    check_paths(a.in, a.out);
    TgmFile file = read_tgm(a.in);
    if (file.kind == "sinogram") {
        Sinogram sg = sinogram_from_tgm(file);
        std::vector<double> per_row;
        for (std::size_t d = 0; d < sg.directions.size(); ++d) per_row.push_back(a.scales[d % a.scales.size()]);
        save(to_tgm(m2_from_radon(sg, per_row)), a.out, g);
    } else if (file.kind == "m2") {
        save(to_tgm(radon_from_m2(m2_from_tgm(file))), a.out, g);
    } else if (file.kind == "scan") {
        save(to_tgm(log_normalize(scan_from_tgm(file))), a.out, g);
    } else {
        throw InvalidArgument("convert maps sinogram, m2 or scan files, not '" + file.kind + "'");
    }
}

// ------------------------------------------------------------------ quantum
struct QuantumArgs {
    std::string in, out, truth, metrics;
    std::vector<int> levels{0};
    std::vector<double> weights;
    double xmax = 8.0, dx = 0.05, hbar = 1.0;
    double qmax = 6.0, pmax = 6.0, dq = 0.025;
    std::size_t angles = 64;
    bool clip = false;
};

Geometry phase_grid(const QuantumArgs& a) {
    const auto nq = static_cast<std::size_t>(std::llround(2.0 * a.qmax / a.dq)) + 1;
    const auto np = static_cast<std::size_t>(std::llround(2.0 * a.pmax / a.dq)) + 1;
    return Geometry::make(2, {nq, np, 1}, {-a.qmax, -a.pmax, 0.0}, {a.dq, a.dq, 1.0});
}

UniformGrid x_grid(const QuantumArgs& a) {
    const auto n = static_cast<std::size_t>(std::llround(2.0 * a.xmax / a.dx)) + 1;
    return {-a.xmax, a.dx, n};
}

void run_quantum_state(const QuantumArgs& a, const Globals& g) {
    UniformGrid x = x_grid(a);
    std::vector<DensityMatrix> states;
    for (int n : a.levels) states.push_back(pure_state(oscillator_state(n, x, a.hbar), x, a.hbar));
    std::vector<double> w = a.weights;
    if (w.empty()) w.assign(states.size(), 1.0 / static_cast<double>(states.size()));
    DensityMatrix rho = states.size() == 1 && w.size() == 1 ? states[0] : mixture(states, w);
    check_density(rho);
    save(to_tgm(rho), a.out, g);
}

void run_quantum_wigner(const QuantumArgs& a, const Globals& g) {
    check_paths(a.in, a.out);
    save(to_tgm(wigner(density_from_tgm(read_tgm(a.in)), phase_grid(a))), a.out, g);
}

void run_quantum_tomograms(const QuantumArgs& a, const Globals& g) {
    check_paths(a.in, a.out);
    Geometry ps = phase_grid(a);
    UniformGrid offsets = UniformGrid::covering(1.01 * std::hypot(a.qmax, a.pmax), a.dq * 2.0);
    save(to_tgm(quadrature_tomograms(density_from_tgm(read_tgm(a.in)), ps, a.angles, offsets)), a.out, g);
}

void run_quantum_reconstruct(const QuantumArgs& a, const Globals& g) {
    check_paths(a.in, a.out);
    QuadratureTomogramSet t = quadrature_from_tgm(read_tgm(a.in));
    ReconstructOptions o;
    o.clip_negative = a.clip;
    ReconstructReport rep;
    const auto t0 = std::chrono::steady_clock::now();
    DensityMatrix rho = reconstruct_density(t, x_grid(a), o, &rep);
    json m;
    m["method"] = "quadrature";
    m["runtime_s"] = seconds_since(t0);
    m["directions"] = rep.directions;
    m["trace_correction"] = rep.trace_correction;
    m["hermitian_correction"] = rep.hermitian_correction;
    m["min_eigenvalue"] = rep.min_eigenvalue;
    if (!a.truth.empty()) {
        m["truth"] = a.truth;
        m["fidelity"] = fidelity(density_from_tgm(read_tgm(a.truth)), rho);
    }
    save(to_tgm(rho), a.out, g);
    save_json(m, sidecar(a.out, a.metrics));
    std::cout << m.dump() << '\n';
}

// --------------------------------------------------------------------- scan
struct ScanArgs {
    std::string in, out;
    std::size_t angles = 180, offsets = 256;
    double I0 = 1.0, counts = 1e5;
    std::string noise = "none";
    std::uint64_t seed = 0;
};

void run_scan(const ScanArgs& a, const Globals& g) {
    check_paths(a.in, a.out);
    ScalarField mu = field_from_tgm(read_tgm(a.in));
    ScanConfig c;
    c.I0 = a.I0;
    c.directions = DirectionSet::half_circle(a.angles);
    c.offsets = UniformGrid::symmetric(effective_support_radius(mu), a.offsets);
    c.noise = parse_noise(a.noise);
    c.photon_count_scale = a.counts;
    c.seed = a.seed;
    save(to_tgm(scan(mu, c)), a.out, g);
}

// ------------------------------------------------------------------- verify
int run_verify(const std::string& suite, const std::vector<int>& only) {
    std::vector<int> ids = only.empty() ? suite_criteria(suite) : only;
    int failed = 0;
    for (int id : ids) {
        CriterionResult r = run_criterion(id);
        print_table(std::cout, {r});
        std::cout.flush();
        if (!r.passed()) ++failed;
    }
    std::cout << ids.size() - failed << "/" << ids.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}

int thread_setting(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("TOMOKIT_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
        throw InvalidArgument(std::string("TOMOKIT_THREADS must be a positive integer, got '") + env + "'");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tomokit: integral-geometry tomography toolkit"};
    app.require_subcommand(1);
    Globals glob;
    app.add_option("--threads", glob.threads, "Cap on worker threads (fallback: TOMOKIT_THREADS)")->check(CLI::NonNegativeNumber);
    app.add_option("--dump-csv", glob.dump_csv, "Also write the output payload as CSV");

    PhantomArgs pa;
    auto* ph = app.add_subcommand("phantom", "Write a test density");
    ph->add_option("--kind", pa.kind, "disks2d | gaussian | gaussian3d | ball3d")->capture_default_str();
    ph->add_option("--grid", pa.grid, "Points per axis")->capture_default_str()->check(CLI::PositiveNumber);
    ph->add_option("--extent", pa.extent, "Half width of the box")->capture_default_str()->check(CLI::PositiveNumber);
    ph->add_option("--sigma", pa.sigma, "Gaussian width")->capture_default_str();
    ph->add_option("--cutoff", pa.cutoff, "Gaussian support radius in units of sigma")->check(CLI::PositiveNumber)->capture_default_str();
    ph->add_option("--center", pa.center, "Centre coordinates")->delimiter(',');
    ph->add_option("--radius", pa.radius, "Ball radius")->capture_default_str();
    ph->add_option("--smoothness", pa.smoothness, "Ball profile exponent")->capture_default_str();
    ph->add_option("--supersample", pa.supersample, "Sub-samples per axis for indicator shapes")->capture_default_str();
    ph->add_flag("--normalize", pa.normalize, "Scale to unit mass");
    ph->add_option("--out", pa.out, "Output field")->required();

    ForwardArgs fa;
    auto* fw = app.add_subcommand("forward", "Apply a forward transform to a field");
    fw->add_option("--in", fa.in, "Input field")->required()->check(CLI::ExistingFile);
    fw->add_option("--out", fa.out, "Output tomograms")->required();
    fw->add_option("--transform", fa.transform)
        ->capture_default_str()
        ->check(CLI::IsMember({"radon", "m2", "circle", "hyperbola", "sphere", "codim"}));
    fw->add_option("--angles", fa.angles, "Directions (orientations for codim)")->capture_default_str()->check(CLI::PositiveNumber);
    fw->add_option("--offsets", fa.offsets, "Offsets per row")->capture_default_str()->check(CLI::PositiveNumber);
    fw->add_option("--scales", fa.scales, "Covector magnitudes, cycled over rows")->delimiter(',')->capture_default_str();
    fw->add_option("--points", fa.points, "Points on the unit sphere")->capture_default_str();

    InvertArgs ia;
    auto* iv = app.add_subcommand("invert", "Reconstruct a field from tomograms");
    iv->add_option("--in", ia.in, "Input tomograms")->required()->check(CLI::ExistingFile);
    iv->add_option("--out", ia.out, "Output field")->required();
    iv->add_option("--method", ia.method)->capture_default_str()->check(CLI::IsMember({"fbp", "m2", "john", "curved", "codim"}));
    iv->add_option("--truth", ia.truth, "Ground-truth field for the rel-L2 metric")->check(CLI::ExistingFile);
    iv->add_option("--metrics", ia.metrics, "Metrics sidecar path (default: <out>.json)");
    iv->add_option("--grid", ia.grid, "Output points per axis")->capture_default_str();
    iv->add_option("--extent", ia.extent, "Output half width (default: source support)");
    iv->add_option("--path", ia.path)->capture_default_str()->check(CLI::IsMember({"filter-first", "backproject-first"}));
    iv->add_option("--window", ia.window)->capture_default_str()->check(CLI::IsMember({"raised-cosine", "none"}));
    iv->add_option("--window-fraction", ia.window_fraction)->capture_default_str();
    iv->add_option("--radius", ia.radius, "Support radius for the series inversion");
    iv->add_option("--laplacian", ia.laplacian)->capture_default_str()->check(CLI::IsMember({"fd", "spectral"}));

    ConvertArgs ca;
    auto* cv = app.add_subcommand("convert", "sinogram <-> m2, scan -> sinogram");
    cv->add_option("--in", ca.in)->required()->check(CLI::ExistingFile);
    cv->add_option("--out", ca.out)->required();
    cv->add_option("--scales", ca.scales, "Covector magnitudes for sinogram -> m2")->delimiter(',');

    QuantumArgs qa;
    auto* qu = app.add_subcommand("quantum", "Quantum states, Wigner functions and quadrature tomography");
    qu->require_subcommand(1);
    auto grid_opts = [&](CLI::App* c) {
        c->add_option("--hbar", qa.hbar)->capture_default_str()->check(CLI::PositiveNumber);
        c->add_option("--xmax", qa.xmax, "Half width of the x grid")->capture_default_str();
        c->add_option("--dx", qa.dx, "x spacing")->capture_default_str();
    };
    auto phase_opts = [&](CLI::App* c) {
        c->add_option("--qmax", qa.qmax)->capture_default_str();
        c->add_option("--pmax", qa.pmax)->capture_default_str();
        c->add_option("--dq", qa.dq, "Phase-space spacing")->capture_default_str();
    };
    auto* qs = qu->add_subcommand("state", "Oscillator eigenstates and their mixtures");
    grid_opts(qs);
    qs->add_option("--levels", qa.levels, "Oscillator levels")->delimiter(',');
    qs->add_option("--weights", qa.weights, "Mixture weights (sum 1)")->delimiter(',');
    qs->add_option("--out", qa.out)->required();
    auto* qw = qu->add_subcommand("wigner", "Wigner function of a density matrix");
    phase_opts(qw);
    qw->add_option("--in", qa.in)->required()->check(CLI::ExistingFile);
    qw->add_option("--out", qa.out)->required();
    auto* qt = qu->add_subcommand("tomograms", "Quadrature tomograms of a density matrix");
    phase_opts(qt);
    qt->add_option("--angles", qa.angles)->capture_default_str();
    qt->add_option("--in", qa.in)->required()->check(CLI::ExistingFile);
    qt->add_option("--out", qa.out)->required();
    auto* qr = qu->add_subcommand("reconstruct", "Density matrix from quadrature tomograms");
    grid_opts(qr);
    qr->add_option("--in", qa.in)->required()->check(CLI::ExistingFile);
    qr->add_option("--out", qa.out)->required();
    qr->add_option("--truth", qa.truth, "Reference density matrix for the fidelity metric")->check(CLI::ExistingFile);
    qr->add_option("--metrics", qa.metrics);
    qr->add_flag("--clip-negative", qa.clip, "Project onto positive operators");

    ScanArgs sa;
    auto* sc = app.add_subcommand("scan", "Simulate a parallel-beam acquisition");
    sc->add_option("--in", sa.in, "Attenuation field")->required()->check(CLI::ExistingFile);
    sc->add_option("--out", sa.out)->required();
    sc->add_option("--angles", sa.angles)->capture_default_str();
    sc->add_option("--offsets", sa.offsets)->capture_default_str();
    sc->add_option("--I0", sa.I0)->capture_default_str();
    sc->add_option("--noise", sa.noise)->capture_default_str()->check(CLI::IsMember({"none", "poisson"}));
    sc->add_option("--counts", sa.counts, "Expected counts per unit intensity")->capture_default_str();
    sc->add_option("--seed", sa.seed)->capture_default_str();

    std::string suite = "all";
    std::vector<int> only;
    auto* vf = app.add_subcommand("verify", "Run the acceptance criteria");
    vf->add_option("--suite", suite)->capture_default_str()->check(CLI::IsMember(suite_names()));
    vf->add_option("--criterion", only, "Criterion numbers (overrides --suite)")->delimiter(',')->check(CLI::Range(1, criterion_count));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        set_threads(thread_setting(glob.threads));
        if (*ph) run_phantom(pa, glob);
        else if (*fw) run_forward(fa, glob);
        else if (*iv) run_invert(ia, glob);
        else if (*cv) run_convert(ca, glob);
        else if (*qs) run_quantum_state(qa, glob);
        else if (*qw) run_quantum_wigner(qa, glob);
        else if (*qt) run_quantum_tomograms(qa, glob);
        else if (*qr) run_quantum_reconstruct(qa, glob);
        else if (*sc) run_scan(sa, glob);
        else if (*vf) return run_verify(suite, only);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << '\n';
        return 3;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violated (" << e.invariant() << "): " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
