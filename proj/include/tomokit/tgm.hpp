#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "tomokit/errors.hpp"

namespace tomokit {

enum class DType { f64, c128 };

// Self-describing container: one JSON header line, then a little-endian
// row-major payload (complex values interleaved as re, im).
struct TgmFile {
    std::string kind;
    int dim = 0;
    std::vector<std::size_t> shape;
    std::vector<double> origin;
    std::vector<double> spacing;
    DType dtype = DType::f64;
    nlohmann::json extra = nlohmann::json::object();
    std::vector<double> payload;  // doubles; twice the element count for c128

    std::size_t element_count() const;
    std::size_t scalar_count() const { return dtype == DType::c128 ? 2 * element_count() : element_count(); }
    void validate() const;  // throws FormatError
};

std::string encode_tgm(const TgmFile& file);
TgmFile decode_tgm(const std::string& bytes);
void write_tgm(const std::string& path, const TgmFile& file);
TgmFile read_tgm(const std::string& path);

// Kind stored in a file without reading its payload.
std::string peek_kind(const std::string& path);

}  // namespace tomokit
