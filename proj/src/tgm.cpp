#include "tomokit/tgm.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace tomokit {

namespace {

using nlohmann::json;

std::uint64_t to_le(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
}

json parse_header(const std::string& line) {
    try {
        json h = json::parse(line);
        if (!h.is_object()) throw FormatError("TGM header is not a JSON object");
        return h;
    } catch (const json::exception& e) {
        throw FormatError(std::string("TGM header is not valid JSON: ") + e.what());
    }
}

template <class T>
T field_of(const json& h, const char* key) {
    if (!h.contains(key)) throw FormatError(std::string("TGM header lacks '") + key + "'");
    try {
        return h.at(key).get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string("TGM header field '") + key + "' has the wrong type");
    }
}

}  // namespace

std::size_t TgmFile::element_count() const {
    std::size_t n = 1;
    for (std::size_t s : shape) n *= s;
    return shape.empty() ? 0 : n;
}

void TgmFile::validate() const {
    if (kind.empty()) throw FormatError("TGM kind is empty");
    if (shape.empty()) throw FormatError("TGM shape is empty");
    if (!origin.empty() && origin.size() != shape.size()) throw FormatError("TGM origin rank differs from shape");
    if (!spacing.empty() && spacing.size() != shape.size()) throw FormatError("TGM spacing rank differs from shape");
    if (payload.size() != scalar_count()) {
        std::ostringstream os;
        os << "TGM payload holds " << payload.size() << " values, header implies " << scalar_count();
        throw FormatError(os.str());
    }
    if (!extra.is_object()) throw FormatError("TGM extra must be an object");
}

std::string encode_tgm(const TgmFile& file) {
    file.validate();
    json h;
    h["kind"] = file.kind;
    h["dim"] = file.dim;
    h["shape"] = file.shape;
    h["origin"] = file.origin;
    h["spacing"] = file.spacing;
    h["dtype"] = file.dtype == DType::c128 ? "c128" : "f64";
    h["extra"] = file.extra;
    std::string out = h.dump();
    out.push_back('\n');
    const std::size_t head = out.size();
    out.resize(head + 8 * file.payload.size());
    for (std::size_t i = 0; i < file.payload.size(); ++i) {
        std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(file.payload[i]));
        std::memcpy(out.data() + head + 8 * i, &bits, 8);
    }
    return out;
}

TgmFile decode_tgm(const std::string& bytes) {
    const std::size_t nl = bytes.find('\n');
    if (nl == std::string::npos) throw FormatError("TGM header is not terminated by a newline");
    json h = parse_header(bytes.substr(0, nl));
    TgmFile f;
    f.kind = field_of<std::string>(h, "kind");
    f.dim = field_of<int>(h, "dim");
    f.shape = field_of<std::vector<std::size_t>>(h, "shape");
    f.origin = field_of<std::vector<double>>(h, "origin");
    f.spacing = field_of<std::vector<double>>(h, "spacing");
    std::string dt = field_of<std::string>(h, "dtype");
    if (dt == "f64") f.dtype = DType::f64;
    else if (dt == "c128") f.dtype = DType::c128;
    else throw FormatError("TGM dtype '" + dt + "' is not f64 or c128");
    f.extra = h.contains("extra") ? h["extra"] : json::object();
    const std::size_t body = bytes.size() - nl - 1;
    if (body % 8 != 0) throw FormatError("TGM payload is not a whole number of 8-byte values");
    f.payload.resize(body / 8);
    for (std::size_t i = 0; i < f.payload.size(); ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, bytes.data() + nl + 1 + 8 * i, 8);
        f.payload[i] = std::bit_cast<double>(to_le(bits));
    }
    f.validate();
    return f;
}

void write_tgm(const std::string& path, const TgmFile& file) {
    std::string bytes = encode_tgm(file);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InvalidArgument("failed writing '" + path + "'");
}

TgmFile read_tgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return decode_tgm(ss.str());
}

std::string peek_kind(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw FormatError("'" + path + "' is empty");
    return field_of<std::string>(parse_header(line), "kind");
}

}  // namespace tomokit
