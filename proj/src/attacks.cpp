#include "dualmark/attacks.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dualmark::attacks {

using imageio::GrayImage;

namespace {

[[noreturn]] void bad_spec(std::string_view text, const std::string& why) {
    throw std::invalid_argument("invalid attack spec '" + std::string(text) + "': " + why);
}

template <typename T>
T parse_number(std::string_view field, std::string_view whole) {
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        bad_spec(whole, "cannot parse '" + std::string(field) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

void check_window(int k, std::string_view text) {
    if (k < 3 || k % 2 == 0) bad_spec(text, "window must be odd and >= 3");
}

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::size_t clamp_index(long i, std::size_t n) {
    if (i < 0) return 0;
    if (static_cast<std::size_t>(i) >= n) return n - 1;
    return static_cast<std::size_t>(i);
}

double sample_bilinear(const GrayImage& img, double sx, double sy) {
    const double fx = std::floor(sx);
    const double fy = std::floor(sy);
    const double ax = sx - fx;
    const double ay = sy - fy;
    const std::size_t x0 = clamp_index(static_cast<long>(fx), img.width());
    const std::size_t y0 = clamp_index(static_cast<long>(fy), img.height());
    const std::size_t x1 = clamp_index(static_cast<long>(fx) + 1, img.width());
    const std::size_t y1 = clamp_index(static_cast<long>(fy) + 1, img.height());
    const double top = (1.0 - ax) * img.at(x0, y0) + ax * img.at(x1, y0);
    const double bottom = (1.0 - ax) * img.at(x0, y1) + ax * img.at(x1, y1);
    return (1.0 - ay) * top + ay * bottom;
}

template <typename Reduce>
GrayImage window_filter(const GrayImage& img, int k, Reduce reduce) {
    const long half = k / 2;
    GrayImage out(img.width(), img.height());
    std::vector<std::uint8_t> window(static_cast<std::size_t>(k * k));
    for (std::size_t y = 0; y < img.height(); ++y) {
        for (std::size_t x = 0; x < img.width(); ++x) {
            std::size_t n = 0;
            for (long dy = -half; dy <= half; ++dy) {
                const auto yy = clamp_index(static_cast<long>(y) + dy, img.height());
                for (long dx = -half; dx <= half; ++dx) {
                    window[n++] = img.at(clamp_index(static_cast<long>(x) + dx, img.width()), yy);
                }
            }
            out.at(x, y) = reduce(window);
        }
    }
    return out;
}

}  // namespace

AttackSpec parse_attack(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    const std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    const bool has_args = colon != std::string_view::npos;

    if (name == "none") {
        if (has_args) bad_spec(text, "takes no arguments");
        return NoAttack{};
    }
    if (!has_args) bad_spec(text, "missing arguments");
    if (name == "median" || name == "average") {
        const int k = parse_number<int>(args, text);
        check_window(k, text);
        if (name == "median") return MedianFilter{k};
        return AverageFilter{k};
    }
    if (name == "gauss") {
        const auto parts = split(args, ':');
        if (parts.size() != 2) bad_spec(text, "expected gauss:SIGMA:SEED");
        const double sigma = parse_number<double>(parts[0], text);
        if (!(sigma >= 0.0) || !std::isfinite(sigma)) bad_spec(text, "sigma must be finite and >= 0");
        return GaussianNoise{sigma, parse_number<std::uint64_t>(parts[1], text)};
    }
    if (name == "resize") {
        const auto parts = split(args, 'x');
        if (parts.size() != 2) bad_spec(text, "expected resize:WxH");
        const auto w = parse_number<std::size_t>(parts[0], text);
        const auto h = parse_number<std::size_t>(parts[1], text);
        if (w == 0 || h == 0) bad_spec(text, "size must be positive");
        return Resize{w, h};
    }
    if (name == "rotate") {
        const double deg = parse_number<double>(args, text);
        if (!std::isfinite(deg)) bad_spec(text, "angle must be finite");
        return Rotate{deg};
    }
    if (name == "crop") {
        const auto parts = split(args, ',');
        if (parts.size() != 4) bad_spec(text, "expected crop:X,Y,W,H");
        Crop c{parse_number<std::size_t>(parts[0], text), parse_number<std::size_t>(parts[1], text),
               parse_number<std::size_t>(parts[2], text), parse_number<std::size_t>(parts[3], text)};
        if (c.width == 0 || c.height == 0) bad_spec(text, "crop size must be positive");
        return c;
    }
    bad_spec(text, "unknown attack '" + std::string(name) + "'");
}

std::string format_attack(const AttackSpec& spec) {
    struct Formatter {
        std::string operator()(const NoAttack&) const { return "none"; }
        std::string operator()(const MedianFilter& a) const { return "median:" + std::to_string(a.k); }
        std::string operator()(const AverageFilter& a) const { return "average:" + std::to_string(a.k); }
        std::string operator()(const GaussianNoise& a) const {
            return "gauss:" + format_double(a.sigma) + ":" + std::to_string(a.seed);
        }
        std::string operator()(const Resize& a) const {
            return "resize:" + std::to_string(a.width) + "x" + std::to_string(a.height);
        }
        std::string operator()(const Rotate& a) const { return "rotate:" + format_double(a.degrees); }
        std::string operator()(const Crop& a) const {
            return "crop:" + std::to_string(a.x) + "," + std::to_string(a.y) + "," +
                   std::to_string(a.width) + "," + std::to_string(a.height);
        }
    };
    return std::visit(Formatter{}, spec);
}

GrayImage median_filter(const GrayImage& img, int k) {
    if (k < 3 || k % 2 == 0) throw std::invalid_argument("median_filter: window must be odd and >= 3");
    return window_filter(img, k, [](std::vector<std::uint8_t>& w) {
        auto mid = w.begin() + static_cast<std::ptrdiff_t>(w.size() / 2);
        std::nth_element(w.begin(), mid, w.end());
        return *mid;
    });
}

GrayImage average_filter(const GrayImage& img, int k) {
    if (k < 3 || k % 2 == 0) throw std::invalid_argument("average_filter: window must be odd and >= 3");
    return window_filter(img, k, [](std::vector<std::uint8_t>& w) {
        double sum = 0.0;
        for (auto v : w) sum += v;
        return imageio::quantize(sum / static_cast<double>(w.size()));
    });
}

NormalStream::NormalStream(std::uint64_t seed) : engine_(seed) {}

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

GrayImage gaussian_noise(const GrayImage& img, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("gaussian_noise: bad sigma");
    if (sigma == 0.0) return img;
    NormalStream normal(seed);
    GrayImage out = img;
    for (auto& px : out.pixels()) px = imageio::quantize(px + sigma * normal.next());
    return out;
}

GrayImage resize_bilinear(const GrayImage& img, std::size_t width, std::size_t height) {
    if (width == 0 || height == 0) throw std::invalid_argument("resize_bilinear: size must be positive");
    GrayImage out(width, height);
    const double sx = static_cast<double>(img.width()) / static_cast<double>(width);
    const double sy = static_cast<double>(img.height()) / static_cast<double>(height);
    for (std::size_t y = 0; y < height; ++y) {
        const double src_y = std::clamp((static_cast<double>(y) + 0.5) * sy - 0.5, 0.0,
                                        static_cast<double>(img.height() - 1));
        for (std::size_t x = 0; x < width; ++x) {
            const double src_x = std::clamp((static_cast<double>(x) + 0.5) * sx - 0.5, 0.0,
                                            static_cast<double>(img.width() - 1));
            out.at(x, y) = imageio::quantize(sample_bilinear(img, src_x, src_y));
        }
    }
    return out;
}

GrayImage rotate(const GrayImage& img, double degrees) {
    const double turn = std::fmod(degrees, 360.0);
    if (turn == 0.0) return img;
    const double theta = turn * std::numbers::pi / 180.0;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double cx = (static_cast<double>(img.width()) - 1.0) / 2.0;
    const double cy = (static_cast<double>(img.height()) - 1.0) / 2.0;
    const double max_x = static_cast<double>(img.width() - 1);
    const double max_y = static_cast<double>(img.height() - 1);
    constexpr double eps = 1e-9;

    GrayImage out(img.width(), img.height());
    for (std::size_t y = 0; y < img.height(); ++y) {
        for (std::size_t x = 0; x < img.width(); ++x) {
            const double dx = static_cast<double>(x) - cx;
            const double dy = static_cast<double>(y) - cy;
            const double src_x = cx + dx * c - dy * s;
            const double src_y = cy + dx * s + dy * c;
            if (src_x < -eps || src_y < -eps || src_x > max_x + eps || src_y > max_y + eps) continue;
            out.at(x, y) = imageio::quantize(sample_bilinear(img, std::clamp(src_x, 0.0, max_x),
                                                             std::clamp(src_y, 0.0, max_y)));
        }
    }
    return out;
}

GrayImage crop(const GrayImage& img, const Crop& rect) {
    if (rect.width == 0 || rect.height == 0 || rect.x + rect.width > img.width() ||
        rect.y + rect.height > img.height()) {
        throw std::invalid_argument("crop: rectangle " + format_attack(rect) + " exceeds " +
                                    std::to_string(img.width()) + "x" + std::to_string(img.height()));
    }
    GrayImage out(img.width(), img.height());
    for (std::size_t y = rect.y; y < rect.y + rect.height; ++y)
        for (std::size_t x = rect.x; x < rect.x + rect.width; ++x) out.at(x, y) = img.at(x, y);
    return out;
}

GrayImage apply(const GrayImage& img, const AttackSpec& spec) {
    struct Applier {
        const GrayImage& img;
        GrayImage operator()(const NoAttack&) const { return img; }
        GrayImage operator()(const MedianFilter& a) const { return median_filter(img, a.k); }
        GrayImage operator()(const AverageFilter& a) const { return average_filter(img, a.k); }
        GrayImage operator()(const GaussianNoise& a) const { return gaussian_noise(img, a.sigma, a.seed); }
        GrayImage operator()(const Resize& a) const {
            return resize_bilinear(resize_bilinear(img, a.width, a.height), img.width(), img.height());
        }
        GrayImage operator()(const Rotate& a) const { return rotate(img, a.degrees); }
        GrayImage operator()(const Crop& a) const { return crop(img, a); }
    };
    return std::visit(Applier{img}, spec);
}

}  // namespace dualmark::attacks
