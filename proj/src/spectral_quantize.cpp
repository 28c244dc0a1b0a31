#include "dualmark/spectral_quantize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dualmark::spectral {

using linalg::Matrix;
using wavelet::Band;
using wavelet::kAllBands;

namespace {

struct Residual {
    std::array<std::vector<double>, 4> values;
    std::vector<linalg::SvdFactors> factors;
    double norm2 = 0.0;
    double max_abs = 0.0;
};

Residual measure(const imageio::GrayImage& img, const SpectrumTarget& target) {
    const auto pyramid = wavelet::dwt2_multi(imageio::to_matrix(img), target.kind, target.levels);
    Residual r;
    for (std::size_t b = 0; b < kAllBands.size(); ++b) {
        r.factors.push_back(linalg::svd(pyramid.deepest()[kAllBands[b]]));
        const auto& want = target.singular_values[b];
        const auto& have = r.factors[b].s;
        if (want.size() != have.size()) {
            throw std::invalid_argument("quantize_preserving_spectrum: band " +
                                        std::string(wavelet::to_string(kAllBands[b])) + " expects " +
                                        std::to_string(have.size()) + " singular values, target has " +
                                        std::to_string(want.size()));
        }
        r.values[b].resize(want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            const double d = want[i] - have[i];
            r.values[b][i] = d;
            r.norm2 += d * d;
            r.max_abs = std::max(r.max_abs, std::abs(d));
        }
    }
    return r;
}

bool vertical_high(Band b) { return b == Band::LH || b == Band::HH; }
bool horizontal_high(Band b) { return b == Band::HL || b == Band::HH; }

}  // namespace

double spectrum_residual(const imageio::GrayImage& img, const SpectrumTarget& target) {
    return measure(img, target).max_abs;
}

imageio::GrayImage quantize_preserving_spectrum(const Matrix& image, const SpectrumTarget& target,
                                                const QuantizeOptions& options) {
    const std::size_t rows = image.rows();
    const std::size_t cols = image.cols();
    const std::size_t npx = rows * cols;

    std::vector<std::uint8_t> lo(npx);
    std::vector<std::uint8_t> hi(npx);
    imageio::GrayImage current = imageio::from_matrix(image);
    {
        auto src = image.data();
        for (std::size_t i = 0; i < npx; ++i) {
            lo[i] = imageio::quantize(std::floor(src[i]));
            hi[i] = imageio::quantize(std::ceil(src[i]));
        }
    }

    // Coefficient k of the deepest band is row k of (vertical op) * X * (horizontal op)^T.
    const Matrix v_low = wavelet::axis_operator(rows, target.kind, target.levels, false);
    const Matrix v_high = wavelet::axis_operator(rows, target.kind, target.levels, true);
    const Matrix h_low = wavelet::axis_operator(cols, target.kind, target.levels, false);
    const Matrix h_high = wavelet::axis_operator(cols, target.kind, target.levels, true);

    Residual res = measure(current, target);
    imageio::GrayImage best = current;
    double best_norm2 = res.norm2;

    std::size_t total = 0;
    for (const auto& v : res.values) total += v.size();
    std::vector<double> g(total);
    std::vector<double> r(total);

    for (int outer = 0; outer < options.max_relinearizations; ++outer) {
        // Gradient of singular value i of band b w.r.t. pixel (y, x) is
        // row_w[b](y, i) * col_w[b](x, i).
        std::vector<Matrix> row_w;
        std::vector<Matrix> col_w;
        std::size_t off = 0;
        for (std::size_t b = 0; b < kAllBands.size(); ++b) {
            const Band band = kAllBands[b];
            row_w.push_back(linalg::multiply(linalg::transpose(vertical_high(band) ? v_high : v_low),
                                             res.factors[b].u));
            col_w.push_back(linalg::multiply(linalg::transpose(horizontal_high(band) ? h_high : h_low),
                                             res.factors[b].v));
            std::copy(res.values[b].begin(), res.values[b].end(), r.begin() + static_cast<std::ptrdiff_t>(off));
            off += res.values[b].size();
        }

        auto px = current.pixels();
        for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
            std::size_t flips = 0;
            for (std::size_t y = 0; y < rows; ++y) {
                for (std::size_t x = 0; x < cols; ++x) {
                    const std::size_t p = y * cols + x;
                    if (lo[p] == hi[p]) continue;
                    const std::uint8_t alt = px[p] == lo[p] ? hi[p] : lo[p];
                    const double d = static_cast<double>(alt) - static_cast<double>(px[p]);

                    double dot = 0.0;
                    double gn = 0.0;
                    std::size_t k = 0;
                    for (std::size_t b = 0; b < kAllBands.size(); ++b) {
                        const auto rw = row_w[b].row(y);
                        const auto cw = col_w[b].row(x);
                        for (std::size_t i = 0; i < rw.size(); ++i, ++k) {
                            const double gi = rw[i] * cw[i];
                            g[k] = gi;
                            dot += gi * r[k];
                            gn += gi * gi;
                        }
                    }
                    // Moving the pixel by d moves the residual by -d * g.
                    if (d * d * gn < 2.0 * d * dot) {
                        for (std::size_t i = 0; i < total; ++i) r[i] -= d * g[i];
                        px[p] = alt;
                        ++flips;
                    }
                }
            }
            if (flips == 0) break;
        }

        res = measure(current, target);
        if (res.norm2 < best_norm2) {
            best_norm2 = res.norm2;
            best = current;
        } else {
            break;
        }
    }
    return best;
}

}  // namespace dualmark::spectral
