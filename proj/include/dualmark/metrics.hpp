#pragma once

#include "dualmark/imageio.hpp"

namespace dualmark::metrics {

/// Peak signal-to-noise ratio in dB for 8-bit images. Identical images give
/// +infinity.
double psnr(const imageio::GrayImage& a, const imageio::GrayImage& b);

/// Pearson correlation of the mean-centered pixel vectors.
/// Throws UndefinedCorrelationError if either image is constant.
double ncc(const imageio::GrayImage& a, const imageio::GrayImage& b);

}  // namespace dualmark::metrics
