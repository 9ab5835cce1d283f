#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topoloss/geometry.hpp"
#include "topoloss/loss.hpp"
#include "topoloss/rips.hpp"

// File formats: binary (P5) and ASCII (P2) PGM images, `x,y` point-cloud CSV and
// `degree,birth,death` diagram CSV. Parse failures raise DataError carrying the
// source name and byte offset.
namespace topoloss::io {

struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    unsigned maxval = 255;
    std::vector<std::uint16_t> values;  // row-major
};

GrayImage parse_pgm(std::string_view bytes, std::string_view source = "<memory>");
GrayImage read_pgm(const std::filesystem::path& path);

/// Foreground where value >= 128 on the 8-bit scale (value * 255 >= 128 * maxval).
BinaryMask to_mask(const GrayImage& image);
/// value / maxval, so 8-bit maps scale by 1/255 and 16-bit maps by 1/65535.
ProbabilityMap to_probability_map(const GrayImage& image);

BinaryMask read_mask(const std::filesystem::path& path);
ProbabilityMap read_probability_map(const std::filesystem::path& path);

/// 8-bit P5 with 0 / 255.
std::string encode_mask_pgm(const BinaryMask& mask);
/// 8-bit P2 with 0 / 255.
std::string encode_mask_pgm_ascii(const BinaryMask& mask);
/// 16-bit P5, probabilities scaled by 65535 and rounded.
std::string encode_probability_pgm(const ProbabilityMap& map);

void write_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

/// Shortest text with 17 significant digits; `inf` for infinity.
std::string format_double(double value);

std::string encode_cloud_csv(const PointCloud& cloud);
PointCloud parse_cloud_csv(std::string_view text, std::string_view source = "<memory>");
PointCloud read_cloud_csv(const std::filesystem::path& path);

std::string encode_diagrams_csv(std::span<const PersistenceDiagram> diagrams);
/// One diagram per degree present, ascending by degree.
std::vector<PersistenceDiagram> parse_diagrams_csv(std::string_view text,
                                                   std::string_view source = "<memory>");
std::vector<PersistenceDiagram> read_diagrams_csv(const std::filesystem::path& path);

}  // namespace topoloss::io
