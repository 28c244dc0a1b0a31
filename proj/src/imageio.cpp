#include "dualmark/imageio.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "dualmark/errors.hpp"

namespace dualmark::imageio {

GrayImage::GrayImage(std::size_t width, std::size_t height, std::uint8_t fill)
    : width_(width), height_(height) {
    if (width == 0 || height == 0) throw std::invalid_argument("GrayImage: dimensions must be positive");
    pixels_.assign(width * height, fill);
}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width == 0 || height == 0) throw std::invalid_argument("GrayImage: dimensions must be positive");
    if (pixels_.size() != width * height) {
        throw std::invalid_argument("GrayImage: pixel count " + std::to_string(pixels_.size()) +
                                    " does not match " + std::to_string(width) + "x" +
                                    std::to_string(height));
    }
}

linalg::Matrix to_matrix(const GrayImage& img) {
    std::vector<double> data(img.pixels().begin(), img.pixels().end());
    return linalg::Matrix(img.height(), img.width(), std::move(data));
}

std::uint8_t quantize(double value) noexcept {
    const double r = std::round(value);
    if (!(r > 0.0)) return 0;
    if (r >= 255.0) return 255;
    return static_cast<std::uint8_t>(r);
}

GrayImage from_matrix(const linalg::Matrix& m) {
    std::vector<std::uint8_t> px(m.size());
    auto src = m.data();
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = quantize(src[i]);
    return GrayImage(m.cols(), m.rows(), std::move(px));
}

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const noexcept { return pos_; }

    void expect_magic() {
        if (bytes_.size() < 2 || bytes_[0] != 'P' || bytes_[1] != '5') {
            throw FormatError("not a binary PGM: expected magic 'P5'", 0);
        }
        pos_ = 2;
    }

    // Skips whitespace and '#' comments, then reads a decimal token.
    unsigned long number(const char* field) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        unsigned long value = 0;
        while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 0xFFFFFFFFul) throw FormatError(std::string(field) + " too large", start);
            ++pos_;
        }
        if (pos_ == start) {
            throw FormatError(std::string("expected ") + field, pos_);
        }
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    void single_whitespace() {
        if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
            throw FormatError("expected whitespace after maxval", pos_);
        }
        ++pos_;
    }

private:
    static bool is_space(std::uint8_t c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

GrayImage parse_pgm(std::span<const std::uint8_t> bytes) {
    HeaderReader in(bytes);
    in.expect_magic();
    const std::size_t width_at = in.offset();
    const auto width = in.number("width");
    const auto height = in.number("height");
    if (width == 0 || height == 0) throw FormatError("zero image dimension", width_at);
    const std::size_t maxval_at = in.offset();
    const auto maxval = in.number("maxval");
    if (maxval != 255) {
        throw FormatError("unsupported maxval " + std::to_string(maxval) + " (only 255)", maxval_at);
    }
    in.single_whitespace();

    const std::size_t start = in.offset();
    const std::size_t count = static_cast<std::size_t>(width) * height;
    if (bytes.size() - start < count) {
        throw FormatError("truncated raster: need " + std::to_string(count) + " bytes, have " +
                              std::to_string(bytes.size() - start),
                          bytes.size());
    }
    std::vector<std::uint8_t> px(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                                 bytes.begin() + static_cast<std::ptrdiff_t>(start + count));
    return GrayImage(width, height, std::move(px));
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
    const std::string header =
        "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.pixels().begin(), img.pixels().end());
    return out;
}

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return parse_pgm(bytes);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.detail(), e.offset());
    }
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
    const auto bytes = encode_pgm(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace dualmark::imageio
