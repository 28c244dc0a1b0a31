#include "dualmark/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dualmark/errors.hpp"

namespace dualmark::metrics {

namespace {

void require_same_dims(const imageio::GrayImage& a, const imageio::GrayImage& b, const char* what) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw std::invalid_argument(std::string(what) + ": image dimensions differ (" +
                                    std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                    " vs " + std::to_string(b.width()) + "x" +
                                    std::to_string(b.height()) + ")");
    }
}

}  // namespace

double psnr(const imageio::GrayImage& a, const imageio::GrayImage& b) {
    require_same_dims(a, b, "psnr");
    auto pa = a.pixels();
    auto pb = b.pixels();
    double sse = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double d = static_cast<double>(pa[i]) - static_cast<double>(pb[i]);
        sse += d * d;
    }
    if (sse == 0.0) return std::numeric_limits<double>::infinity();
    const double mse = sse / static_cast<double>(pa.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ncc(const imageio::GrayImage& a, const imageio::GrayImage& b) {
    require_same_dims(a, b, "ncc");
    auto pa = a.pixels();
    auto pb = b.pixels();
    const double n = static_cast<double>(pa.size());
    double mean_a = 0.0;
    double mean_b = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        mean_a += pa[i];
        mean_b += pb[i];
    }
    mean_a /= n;
    mean_b /= n;
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double da = pa[i] - mean_a;
        const double db = pb[i] - mean_b;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) {
        throw UndefinedCorrelationError("ncc: correlation undefined for a constant image");
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace dualmark::metrics
