#include "topoloss/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "topoloss/error.hpp"

namespace topoloss::io {

namespace {

[[noreturn]] void fail(std::string_view source, std::size_t offset, const std::string& message) {
    throw DataError(std::string(source) + ": byte " + std::to_string(offset) + ": " + message,
                    static_cast<long long>(offset));
}

class PgmReader {
public:
    PgmReader(std::string_view bytes, std::string_view source) : bytes_(bytes), source_(source) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    unsigned long read_uint(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        unsigned long value = 0;
        const auto [ptr, ec] = std::from_chars(bytes_.data() + pos_, bytes_.data() + bytes_.size(), value);
        if (ec != std::errc{} || ptr == bytes_.data() + pos_) {
            fail(source_, start, std::string("expected ") + what);
        }
        pos_ = static_cast<std::size_t>(ptr - bytes_.data());
        return value;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }
    std::string_view bytes() const { return bytes_; }
    std::string_view source() const { return source_; }

private:
    std::string_view bytes_;
    std::string_view source_;
    std::size_t pos_ = 0;
};

std::string_view trim_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

double parse_number(std::string_view field, std::string_view source, std::size_t offset) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        fail(source, offset, "malformed number '" + std::string(field) + "'");
    }
    return value;
}

struct CsvLine {
    std::string_view text;
    std::size_t offset;
};

std::vector<CsvLine> split_lines(std::string_view text) {
    std::vector<CsvLine> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        lines.push_back({trim_cr(text.substr(start, end - start)), start});
        start = end + 1;
    }
    return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

GrayImage parse_pgm(std::string_view bytes, std::string_view source) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
        fail(source, 0, "not a PGM file (expected magic P2 or P5)");
    }
    const bool binary = bytes[1] == '5';
    PgmReader reader(bytes, source);
    reader.advance(2);

    GrayImage img;
    img.width = reader.read_uint("width");
    img.height = reader.read_uint("height");
    const std::size_t maxval_pos = reader.pos();
    const unsigned long maxval = reader.read_uint("maxval");
    if (img.width == 0 || img.height == 0) fail(source, maxval_pos, "image dimensions must be positive");
    if (maxval == 0 || maxval > 65535) fail(source, maxval_pos, "maxval must be in 1..65535");
    img.maxval = static_cast<unsigned>(maxval);
    const std::size_t count = img.width * img.height;
    img.values.resize(count);

    if (binary) {
        // Exactly one whitespace byte separates the header from the raster.
        if (reader.pos() >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[reader.pos()]))) {
            fail(source, reader.pos(), "missing whitespace after maxval");
        }
        reader.advance(1);
        const std::size_t bps = img.maxval > 255 ? 2 : 1;
        const std::size_t need = count * bps;
        if (bytes.size() - reader.pos() < need) {
            fail(source, bytes.size(), "truncated raster: expected " + std::to_string(need) + " bytes");
        }
        const auto* raster = reinterpret_cast<const unsigned char*>(bytes.data() + reader.pos());
        for (std::size_t i = 0; i < count; ++i) {
            const unsigned v = bps == 2 ? (unsigned{raster[2 * i]} << 8) | raster[2 * i + 1] : raster[i];
            if (v > img.maxval) fail(source, reader.pos() + i * bps, "sample exceeds maxval");
            img.values[i] = static_cast<std::uint16_t>(v);
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            reader.skip_space_and_comments();
            const std::size_t at = reader.pos();
            const unsigned long v = reader.read_uint("pixel value");
            if (v > img.maxval) fail(source, at, "sample exceeds maxval");
            img.values[i] = static_cast<std::uint16_t>(v);
        }
    }
    return img;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path.string() + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path.string() + ": cannot open file for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError(path.string() + ": write failed");
}

GrayImage read_pgm(const std::filesystem::path& path) {
    return parse_pgm(read_file(path), path.string());
}

BinaryMask to_mask(const GrayImage& image) {
    std::vector<std::uint8_t> data(image.values.size());
    std::transform(image.values.begin(), image.values.end(), data.begin(), [&](std::uint16_t v) {
        return static_cast<std::uint8_t>(std::uint64_t{v} * 255 >= std::uint64_t{128} * image.maxval);
    });
    return BinaryMask(image.width, image.height, std::move(data));
}

ProbabilityMap to_probability_map(const GrayImage& image) {
    std::vector<double> probs(image.values.size());
    std::transform(image.values.begin(), image.values.end(), probs.begin(), [&](std::uint16_t v) {
        return static_cast<double>(v) / static_cast<double>(image.maxval);
    });
    return ProbabilityMap(image.width, image.height, std::move(probs));
}

BinaryMask read_mask(const std::filesystem::path& path) { return to_mask(read_pgm(path)); }

ProbabilityMap read_probability_map(const std::filesystem::path& path) {
    return to_probability_map(read_pgm(path));
}

std::string encode_mask_pgm(const BinaryMask& mask) {
    std::string out = "P5\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) + "\n255\n";
    for (std::uint8_t v : mask.data()) out.push_back(static_cast<char>(v ? 255 : 0));
    return out;
}

std::string encode_mask_pgm_ascii(const BinaryMask& mask) {
    std::string out = "P2\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) + "\n255\n";
    for (std::size_t y = 0; y < mask.height(); ++y) {
        for (std::size_t x = 0; x < mask.width(); ++x) {
            if (x) out.push_back(' ');
            out += mask.at(x, y) ? "255" : "0";
        }
        out.push_back('\n');
    }
    return out;
}

std::string encode_probability_pgm(const ProbabilityMap& map) {
    std::string out = "P5\n" + std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n65535\n";
    for (double p : map.probs()) {
        const auto v = static_cast<unsigned>(std::lround(p * 65535.0));
        out.push_back(static_cast<char>(v >> 8));
        out.push_back(static_cast<char>(v & 0xff));
    }
    return out;
}

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

std::string encode_cloud_csv(const PointCloud& cloud) {
    std::string out = "x,y\n";
    for (const auto& p : cloud.points()) out += format_double(p.x) + "," + format_double(p.y) + "\n";
    return out;
}

PointCloud parse_cloud_csv(std::string_view text, std::string_view source) {
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0].text != "x,y") fail(source, 0, "expected header 'x,y'");
    std::vector<Point2> points;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line.text.empty()) continue;
        const auto fields = split_fields(line.text);
        if (fields.size() != 2) fail(source, line.offset, "expected 2 fields");
        const double x = parse_number(fields[0], source, line.offset);
        const double y = parse_number(fields[1], source, line.offset + fields[0].size() + 1);
        if (!std::isfinite(x) || !std::isfinite(y)) fail(source, line.offset, "coordinates must be finite");
        points.push_back({x, y});
    }
    return PointCloud(std::move(points));
}

PointCloud read_cloud_csv(const std::filesystem::path& path) {
    return parse_cloud_csv(read_file(path), path.string());
}

std::string encode_diagrams_csv(std::span<const PersistenceDiagram> diagrams) {
    std::string out = "degree,birth,death\n";
    for (const auto& d : diagrams) {
        for (const auto& p : d.pairs()) {
            out += std::to_string(d.degree()) + "," + format_double(p.birth) + "," +
                   format_double(p.death) + "\n";
        }
    }
    return out;
}

std::vector<PersistenceDiagram> parse_diagrams_csv(std::string_view text, std::string_view source) {
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0].text != "degree,birth,death") {
        fail(source, 0, "expected header 'degree,birth,death'");
    }
    std::map<int, std::vector<PersistencePair>> by_degree;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line.text.empty()) continue;
        const auto fields = split_fields(line.text);
        if (fields.size() != 3) fail(source, line.offset, "expected 3 fields");
        int degree = 0;
        const auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), degree);
        if (ec != std::errc{} || ptr != fields[0].data() + fields[0].size() || degree < 0) {
            fail(source, line.offset, "malformed degree '" + std::string(fields[0]) + "'");
        }
        const std::size_t birth_at = line.offset + fields[0].size() + 1;
        const std::size_t death_at = birth_at + fields[1].size() + 1;
        const double birth = parse_number(fields[1], source, birth_at);
        const double death = parse_number(fields[2], source, death_at);
        if (!(birth >= 0.0) || !std::isfinite(birth)) fail(source, birth_at, "birth must be finite and >= 0");
        if (!(death > birth)) fail(source, death_at, "death must exceed birth");
        by_degree[degree].push_back({birth, death});
    }
    std::vector<PersistenceDiagram> out;
    for (auto& [degree, pairs] : by_degree) out.emplace_back(degree, std::move(pairs));
    return out;
}

std::vector<PersistenceDiagram> read_diagrams_csv(const std::filesystem::path& path) {
    return parse_diagrams_csv(read_file(path), path.string());
}

}  // namespace topoloss::io
