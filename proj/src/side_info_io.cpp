#include "dualmark/side_info_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dualmark/errors.hpp"

namespace dualmark::watermark {

using wavelet::kAllBands;

namespace {

constexpr const char* kMagic = "dualmark-sideinfo";
constexpr int kVersion = 1;

class Writer {
public:
    void line(const std::string& s) { out_ += s + "\n"; }

    void number_line(const char* key, double v) { line(std::string(key) + " " + num(v)); }

    void size_line(const char* key, ImageSize s) {
        line(std::string(key) + " " + std::to_string(s.width) + " " + std::to_string(s.height));
    }

    void pad_line(const char* key, Padding p) {
        line(std::string(key) + " " + std::to_string(p.right) + " " + std::to_string(p.bottom));
    }

    void wavelet_line(const char* key, WaveletConfig w) {
        line(std::string(key) + " " + std::string(wavelet::to_string(w.kind)) + " " + std::to_string(w.levels));
    }

    void vector(const std::string& name, const std::vector<double>& v) {
        line("vector " + name + " " + std::to_string(v.size()));
        std::string row;
        for (std::size_t i = 0; i < v.size(); ++i) row += (i ? " " : "") + num(v[i]);
        line(row);
    }

    void matrix(const std::string& name, const Matrix& m) {
        line("matrix " + name + " " + std::to_string(m.rows()) + " " + std::to_string(m.cols()));
        for (std::size_t r = 0; r < m.rows(); ++r) {
            std::string row;
            for (std::size_t c = 0; c < m.cols(); ++c) row += (c ? " " : "") + num(m(r, c));
            line(row);
        }
    }

    std::string take() { return std::move(out_); }

private:
    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    std::string out_;
};

class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    std::string word() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) throw FormatError("side information: unexpected end of input", pos_);
        return text_.substr(start, pos_ - start);
    }

    void expect(const std::string& keyword) {
        const std::size_t at = next_offset();
        const std::string w = word();
        if (w != keyword) throw FormatError("side information: expected '" + keyword + "', found '" + w + "'", at);
    }

    std::size_t count() {
        const std::size_t at = next_offset();
        const std::string w = word();
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc{} || ptr != w.data() + w.size()) {
            throw FormatError("side information: expected a non-negative integer, found '" + w + "'", at);
        }
        return v;
    }

    int integer() {
        const std::size_t at = next_offset();
        const std::size_t v = count();
        if (v > 64) throw FormatError("side information: integer out of range", at);
        return static_cast<int>(v);
    }

    double number() {
        const std::size_t at = next_offset();
        const std::string w = word();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc{} || ptr != w.data() + w.size() || !std::isfinite(v)) {
            throw FormatError("side information: expected a finite number, found '" + w + "'", at);
        }
        return v;
    }

    double keyed_number(const char* key) {
        expect(key);
        return number();
    }

    ImageSize keyed_size(const char* key) {
        expect(key);
        const std::size_t at = next_offset();
        ImageSize s{count(), count()};
        if (s.width == 0 || s.height == 0) throw FormatError("side information: zero image size", at);
        return s;
    }

    Padding keyed_pad(const char* key) {
        expect(key);
        Padding p;
        p.right = count();
        p.bottom = count();
        return p;
    }

    WaveletConfig keyed_wavelet(const char* key) {
        expect(key);
        const std::size_t at = next_offset();
        const std::string kind = word();
        try {
            return WaveletConfig{wavelet::parse_wavelet_kind(kind), integer()};
        } catch (const std::invalid_argument& e) {
            throw FormatError(std::string("side information: ") + e.what(), at);
        }
    }

    std::vector<double> vector(const std::string& name) {
        expect("vector");
        expect(name);
        const std::size_t at = next_offset();
        const std::size_t n = count();
        if (n == 0 || n > kMaxExtent) throw FormatError("side information: bad length for " + name, at);
        std::vector<double> v(n);
        for (double& x : v) x = number();
        return v;
    }

    Matrix matrix(const std::string& name) {
        expect("matrix");
        expect(name);
        const std::size_t at = next_offset();
        const std::size_t rows = count();
        const std::size_t cols = count();
        if (rows == 0 || cols == 0 || rows > kMaxExtent || cols > kMaxExtent) {
            throw FormatError("side information: bad dimensions for " + name, at);
        }
        std::vector<double> data(rows * cols);
        for (double& x : data) x = number();
        return Matrix(rows, cols, std::move(data));
    }

    void expect_end() {
        expect("end");
        skip_space();
        if (pos_ != text_.size()) throw FormatError("side information: trailing data after 'end'", pos_);
    }

private:
    static constexpr std::size_t kMaxExtent = 1u << 14;

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::size_t next_offset() {
        skip_space();
        return pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

std::string band_name(const char* prefix, std::size_t b) {
    return std::string(prefix) + "_" + std::string(wavelet::to_string(kAllBands[b]));
}

}  // namespace

std::string format_side_info(const SideInfo& info) {
    Writer w;
    w.line(std::string(kMagic) + " " + std::to_string(kVersion));
    w.number_line("alpha", info.params.alpha);
    w.number_line("beta", info.params.beta);
    w.wavelet_line("primary_wavelet", info.params.primary_wavelet);
    w.wavelet_line("host_wavelet", info.params.host_wavelet);

    const PrimaryStageInfo& ps = info.primary_stage;
    w.size_line("primary_size", ps.primary_size);
    w.pad_line("primary_pad", ps.primary_pad);
    w.size_line("secondary_size", ps.secondary_size);

    const HostStageInfo& hs = info.host_stage;
    w.size_line("host_size", hs.host_size);
    w.pad_line("host_pad", hs.host_pad);
    w.size_line("payload_size", hs.payload_size);
    w.pad_line("payload_pad", hs.payload_pad);

    w.matrix("secondary_u", ps.secondary_u);
    w.vector("secondary_s", ps.secondary_s);
    w.matrix("secondary_v", ps.secondary_v);
    for (std::size_t b = 0; b < ps.primary_s.size(); ++b) w.vector(band_name("primary_s", b), ps.primary_s[b]);
    for (std::size_t b = 0; b < hs.payload_u.size(); ++b) {
        w.matrix(band_name("payload_u", b), hs.payload_u[b]);
        w.matrix(band_name("payload_v", b), hs.payload_v[b]);
    }
    for (std::size_t b = 0; b < hs.host_s.size(); ++b) w.vector(band_name("host_s", b), hs.host_s[b]);
    w.line("end");
    return w.take();
}

SideInfo parse_side_info(const std::string& text) {
    Reader in(text);
    in.expect(kMagic);
    {
        const int version = in.integer();
        if (version != kVersion) {
            throw FormatError("side information: unsupported version " + std::to_string(version), 0);
        }
    }
    SideInfo info;
    info.params.alpha = in.keyed_number("alpha");
    info.params.beta = in.keyed_number("beta");
    info.params.primary_wavelet = in.keyed_wavelet("primary_wavelet");
    info.params.host_wavelet = in.keyed_wavelet("host_wavelet");

    PrimaryStageInfo& ps = info.primary_stage;
    ps.primary_size = in.keyed_size("primary_size");
    ps.primary_pad = in.keyed_pad("primary_pad");
    ps.secondary_size = in.keyed_size("secondary_size");

    HostStageInfo& hs = info.host_stage;
    hs.host_size = in.keyed_size("host_size");
    hs.host_pad = in.keyed_pad("host_pad");
    hs.payload_size = in.keyed_size("payload_size");
    hs.payload_pad = in.keyed_pad("payload_pad");

    ps.secondary_u = in.matrix("secondary_u");
    ps.secondary_s = in.vector("secondary_s");
    ps.secondary_v = in.matrix("secondary_v");
    for (std::size_t b = 0; b < kAllBands.size(); ++b) ps.primary_s.push_back(in.vector(band_name("primary_s", b)));
    for (std::size_t b = 0; b < kAllBands.size(); ++b) {
        hs.payload_u.push_back(in.matrix(band_name("payload_u", b)));
        hs.payload_v.push_back(in.matrix(band_name("payload_v", b)));
    }
    for (std::size_t b = 0; b < kAllBands.size(); ++b) hs.host_s.push_back(in.vector(band_name("host_s", b)));
    in.expect_end();

    validate(info);
    return info;
}

SideInfo read_side_info(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open side information file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_side_info(buf.str());
}

void write_side_info(const SideInfo& info, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << format_side_info(info);
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace dualmark::watermark
