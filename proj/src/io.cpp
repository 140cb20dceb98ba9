#include "tomokit/io.hpp"

#include <sstream>

namespace tomokit {

namespace {

using nlohmann::json;

void expect_kind(const TgmFile& f, const char* kind) {
    if (f.kind != kind) throw FormatError("expected a '" + std::string(kind) + "' container, found '" + f.kind + "'");
}

// json access that reports FormatError instead of library exceptions
template <class T>
T get(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("TGM extra lacks '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string("TGM extra field '") + key + "' has the wrong type");
    }
}

json grid_json(const UniformGrid& g) { return {{"start", g.start}, {"step", g.step}, {"count", g.count}}; }

UniformGrid grid_from(const json& j) {
    UniformGrid g{get<double>(j, "start"), get<double>(j, "step"), get<std::size_t>(j, "count")};
    try {
        g.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("bad grid in TGM extra: ") + e.what());
    }
    return g;
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

std::vector<Vec3> vecs_from(const json& j, const char* key) {
    auto raw = get<std::vector<std::vector<double>>>(j, key);
    std::vector<Vec3> out;
    for (const auto& r : raw) {
        if (r.size() != 3) throw FormatError(std::string("entries of '") + key + "' must have 3 components");
        out.push_back({r[0], r[1], r[2]});
    }
    return out;
}

json vecs_json(const std::vector<Vec3>& vs) {
    json a = json::array();
    for (const Vec3& v : vs) a.push_back(vec_json(v));
    return a;
}

json geometry_json(const Geometry& g) {
    return {{"dim", g.dim},
            {"shape", std::vector<std::size_t>(g.shape.begin(), g.shape.end())},
            {"origin", vec_json(g.origin)},
            {"spacing", vec_json(g.spacing)}};
}

Geometry geometry_from(const json& j) {
    auto shape = get<std::vector<std::size_t>>(j, "shape");
    auto origin = get<std::vector<double>>(j, "origin");
    auto spacing = get<std::vector<double>>(j, "spacing");
    if (shape.size() != 3 || origin.size() != 3 || spacing.size() != 3) throw FormatError("geometry entries need 3 axes");
    try {
        return Geometry::make(get<int>(j, "dim"), {shape[0], shape[1], shape[2]}, {origin[0], origin[1], origin[2]},
                              {spacing[0], spacing[1], spacing[2]});
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("bad geometry: ") + e.what());
    }
}

TgmFile field_file(const ScalarField& f, const char* kind) {
    const Geometry& g = f.geometry;
    TgmFile t;
    t.kind = kind;
    t.dim = g.dim;
    for (int a = 0; a < g.dim; ++a) {
        t.shape.push_back(g.shape[a]);
        t.origin.push_back(g.origin[a]);
        t.spacing.push_back(g.spacing[a]);
    }
    t.extra["support_radius"] = f.support_radius;
    t.payload = f.values;
    return t;
}

ScalarField field_of(const TgmFile& t) {
    if (t.dtype != DType::f64) throw FormatError("fields are stored as f64");
    if (t.dim < 1 || t.dim > 3 || t.shape.size() != static_cast<std::size_t>(t.dim) || t.origin.size() != t.shape.size() ||
        t.spacing.size() != t.shape.size())
        throw FormatError("field header rank is inconsistent with dim");
    std::array<std::size_t, 3> shape{1, 1, 1};
    Vec3 origin{0, 0, 0}, spacing{1, 1, 1};
    for (int a = 0; a < t.dim; ++a) {
        shape[a] = t.shape[a];
        origin[a] = t.origin[a];
        spacing[a] = t.spacing[a];
    }
    Geometry g;
    try {
        g = Geometry::make(t.dim, shape, origin, spacing);
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("bad field geometry: ") + e.what());
    }
    ScalarField f(g, t.extra.contains("support_radius") ? get<double>(t.extra, "support_radius") : 0.0);
    f.values = t.payload;
    return f;
}

json directions_json(const DirectionSet& d) {
    return {{"dim", d.dim}, {"directions", vecs_json(d.directions)}, {"weights", d.weights}};
}

DirectionSet directions_from(const json& j) {
    DirectionSet d;
    d.dim = get<int>(j, "dim");
    d.directions = vecs_from(j, "directions");
    d.weights = get<std::vector<double>>(j, "weights");
    try {
        d.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("bad direction set: ") + e.what());
    }
    return d;
}

json m2_json(const M2Tomogram& t) {
    json offs = json::array();
    for (const UniformGrid& g : t.offsets) offs.push_back(grid_json(g));
    return {{"dim", t.dim},
            {"mus", vecs_json(t.mus)},
            {"offsets", offs},
            {"weights", t.weights},
            {"source_support_radius", t.source_support_radius}};
}

M2Tomogram m2_of(const json& j, const std::vector<double>& data) {
    M2Tomogram t;
    t.dim = get<int>(j, "dim");
    t.mus = vecs_from(j, "mus");
    for (const json& g : get<json>(j, "offsets")) t.offsets.push_back(grid_from(g));
    t.weights = get<std::vector<double>>(j, "weights");
    t.source_support_radius = get<double>(j, "source_support_radius");
    t.data = data;
    try {
        t.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("inconsistent M2 container: ") + e.what());
    }
    return t;
}

TgmFile m2_file(const M2Tomogram& t, const char* kind) {
    TgmFile f;
    f.kind = kind;
    f.dim = t.dim;
    f.shape = {t.data.size()};
    f.extra = m2_json(t);
    f.payload = t.data;
    return f;
}

}  // namespace

TgmFile to_tgm(const ScalarField& f) { return field_file(f, "field"); }

ScalarField field_from_tgm(const TgmFile& file) {
    expect_kind(file, "field");
    return field_of(file);
}

TgmFile to_tgm(const Sinogram& g) {
    g.validate();
    TgmFile f;
    f.kind = "sinogram";
    f.dim = g.dim;
    f.shape = {g.directions.size(), g.offsets.count};
    f.extra = {{"directions", directions_json(g.directions)},
               {"offsets", grid_json(g.offsets)},
               {"source_support_radius", g.source_support_radius}};
    f.payload = g.data;
    return f;
}

Sinogram sinogram_from_tgm(const TgmFile& file) {
    expect_kind(file, "sinogram");
    Sinogram g;
    g.dim = file.dim;
    g.directions = directions_from(get<json>(file.extra, "directions"));
    g.offsets = grid_from(get<json>(file.extra, "offsets"));
    g.source_support_radius = get<double>(file.extra, "source_support_radius");
    g.data = file.payload;
    if (file.shape.size() != 2 || file.shape[0] != g.directions.size() || file.shape[1] != g.offsets.count)
        throw FormatError("sinogram shape disagrees with its directions and offsets");
    return g;
}

TgmFile to_tgm(const M2Tomogram& t) {
    t.validate();
    return m2_file(t, "m2");
}

M2Tomogram m2_from_tgm(const TgmFile& file) {
    expect_kind(file, "m2");
    return m2_of(file.extra, file.payload);
}

TgmFile to_tgm(const CurvedTomograms& t) {
    TgmFile f = m2_file(t.tomograms, "curved-tomogram");
    f.extra["map"] = map_name(t.map);
    f.extra["x_geometry"] = geometry_json(t.x_geometry);
    f.extra["margin"] = t.margin;
    return f;
}

CurvedTomograms curved_from_tgm(const TgmFile& file) {
    expect_kind(file, "curved-tomogram");
    CurvedTomograms t;
    t.tomograms = m2_of(file.extra, file.payload);
    std::string name = get<std::string>(file.extra, "map");
    try {
        t.map = name == "custom" ? MapName::custom : parse_map_name(name);
    } catch (const InvalidArgument& e) {
        throw FormatError(e.what());
    }
    t.x_geometry = geometry_from(get<json>(file.extra, "x_geometry"));
    t.margin = get<double>(file.extra, "margin");
    return t;
}

TgmFile to_tgm(const SphereMeanField& g) {
    TgmFile f = field_file(g.field, "sphere-means");
    f.extra["source_support_radius"] = g.source_support_radius;
    return f;
}

SphereMeanField sphere_means_from_tgm(const TgmFile& file) {
    expect_kind(file, "sphere-means");
    SphereMeanField g;
    g.field = field_of(file);
    g.source_support_radius = get<double>(file.extra, "source_support_radius");
    return g;
}

TgmFile to_tgm(const LineTomograms& g) {
    g.validate();
    TgmFile f;
    f.kind = "line-tomograms";
    f.dim = 3;
    f.shape = {g.frames.size(), g.offsets.count, g.offsets.count};
    json frames = json::array();
    for (const LineFrame& fr : g.frames) frames.push_back({vec_json(fr.eta1), vec_json(fr.eta2)});
    f.extra = {{"frames", frames},
               {"weights", g.weights},
               {"offsets", grid_json(g.offsets)},
               {"source_support_radius", g.source_support_radius}};
    f.payload = g.data;
    return f;
}

LineTomograms line_tomograms_from_tgm(const TgmFile& file) {
    expect_kind(file, "line-tomograms");
    LineTomograms g;
    auto raw = get<std::vector<std::vector<std::vector<double>>>>(file.extra, "frames");
    for (const auto& fr : raw) {
        if (fr.size() != 2 || fr[0].size() != 3 || fr[1].size() != 3) throw FormatError("line frames are 2x3 matrices");
        g.frames.push_back({{fr[0][0], fr[0][1], fr[0][2]}, {fr[1][0], fr[1][1], fr[1][2]}});
    }
    g.weights = get<std::vector<double>>(file.extra, "weights");
    g.offsets = grid_from(get<json>(file.extra, "offsets"));
    g.source_support_radius = get<double>(file.extra, "source_support_radius");
    g.data = file.payload;
    try {
        g.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("inconsistent line tomograms: ") + e.what());
    }
    return g;
}

TgmFile to_tgm(const DensityMatrix& rho) {
    rho.validate();
    TgmFile f;
    f.kind = "density-matrix";
    f.dim = 1;
    f.dtype = DType::c128;
    f.shape = {rho.size(), rho.size()};
    f.origin = {rho.x.start, rho.x.start};
    f.spacing = {rho.x.step, rho.x.step};
    f.extra = {{"hbar", rho.hbar}};
    f.payload.reserve(2 * rho.values.size());
    for (const cplx& v : rho.values) {
        f.payload.push_back(v.real());
        f.payload.push_back(v.imag());
    }
    return f;
}

DensityMatrix density_from_tgm(const TgmFile& file) {
    expect_kind(file, "density-matrix");
    if (file.dtype != DType::c128) throw FormatError("density matrices are stored as c128");
    if (file.shape.size() != 2 || file.shape[0] != file.shape[1] || file.origin.size() != 2 || file.spacing.size() != 2)
        throw FormatError("density matrix must be square with one x grid");
    UniformGrid x{file.origin[0], file.spacing[0], file.shape[0]};
    try {
        x.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(e.what());
    }
    DensityMatrix rho(x, get<double>(file.extra, "hbar"));
    for (std::size_t i = 0; i < rho.values.size(); ++i) rho.values[i] = {file.payload[2 * i], file.payload[2 * i + 1]};
    return rho;
}

TgmFile to_tgm(const WignerField& w) {
    TgmFile f = field_file(w.field, "wigner");
    f.extra["hbar"] = w.hbar;
    return f;
}

WignerField wigner_from_tgm(const TgmFile& file) {
    expect_kind(file, "wigner");
    WignerField w;
    w.field = field_of(file);
    w.hbar = get<double>(file.extra, "hbar");
    return w;
}

TgmFile to_tgm(const QuadratureTomogramSet& t) {
    TgmFile f = m2_file(t.tomograms, "quadrature-tomograms");
    f.extra["hbar"] = t.hbar;
    json angles = json::array();
    for (const Vec3& mu : t.tomograms.mus) angles.push_back(std::atan2(mu[1], mu[0]));
    f.extra["angles"] = angles;
    f.extra["violations"] = t.violations;
    f.extra["min_value"] = t.min_value;
    return f;
}

QuadratureTomogramSet quadrature_from_tgm(const TgmFile& file) {
    expect_kind(file, "quadrature-tomograms");
    QuadratureTomogramSet t;
    t.tomograms = m2_of(file.extra, file.payload);
    t.hbar = get<double>(file.extra, "hbar");
    t.violations = file.extra.contains("violations") ? get<std::size_t>(file.extra, "violations") : 0;
    t.min_value = file.extra.contains("min_value") ? get<double>(file.extra, "min_value") : 0.0;
    return t;
}

TgmFile to_tgm(const IntensityTable& t) {
    t.validate();
    TgmFile f;
    f.kind = "scan";
    f.dim = 2;
    f.shape = {t.directions.size(), t.offsets.count};
    f.extra = {{"I0", t.I0},
               {"noise", noise_name(t.noise)},
               {"photon_count_scale", t.photon_count_scale},
               {"seed", t.seed},
               {"directions", directions_json(t.directions)},
               {"offsets", grid_json(t.offsets)},
               {"source_support_radius", t.source_support_radius}};
    f.payload = t.intensities;
    return f;
}

IntensityTable scan_from_tgm(const TgmFile& file) {
    expect_kind(file, "scan");
    IntensityTable t;
    t.I0 = get<double>(file.extra, "I0");
    try {
        t.noise = parse_noise(get<std::string>(file.extra, "noise"));
    } catch (const InvalidArgument& e) {
        throw FormatError(e.what());
    }
    t.photon_count_scale = get<double>(file.extra, "photon_count_scale");
    t.seed = get<std::uint64_t>(file.extra, "seed");
    t.directions = directions_from(get<json>(file.extra, "directions"));
    t.offsets = grid_from(get<json>(file.extra, "offsets"));
    t.source_support_radius = get<double>(file.extra, "source_support_radius");
    t.intensities = file.payload;
    if (t.intensities.size() != t.directions.size() * t.offsets.count)
        throw FormatError("scan payload disagrees with its geometry");
    return t;
}

std::string to_csv(const TgmFile& file) {
    std::ostringstream os;
    os.precision(17);
    if (file.dtype == DType::c128) {
        os << "i,j,re,im\n";
        const std::size_t cols = file.shape.size() > 1 ? file.shape.back() : 1;
        for (std::size_t n = 0; n < file.element_count(); ++n)
            os << n / cols << ',' << n % cols << ',' << file.payload[2 * n] << ',' << file.payload[2 * n + 1] << '\n';
        return os.str();
    }
    const bool spatial = file.origin.size() == file.shape.size() && file.spacing.size() == file.shape.size();
    if (spatial) {
        const char* names[] = {"x0", "x1", "x2"};
        for (std::size_t a = 0; a < file.shape.size() && a < 3; ++a) os << names[a] << ',';
        os << "value\n";
        for (std::size_t n = 0; n < file.payload.size(); ++n) {
            std::size_t rem = n;
            std::vector<double> coord(file.shape.size());
            for (std::size_t a = file.shape.size(); a-- > 0;) {
                coord[a] = file.origin[a] + static_cast<double>(rem % file.shape[a]) * file.spacing[a];
                rem /= file.shape[a];
            }
            for (double c : coord) os << c << ',';
            os << file.payload[n] << '\n';
        }
        return os.str();
    }
    os << "index,value\n";
    for (std::size_t n = 0; n < file.payload.size(); ++n) os << n << ',' << file.payload[n] << '\n';
    return os.str();
}

}  // namespace tomokit
