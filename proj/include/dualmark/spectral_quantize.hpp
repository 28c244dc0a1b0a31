#pragma once

#include <array>
#include <vector>

#include "dualmark/imageio.hpp"
#include "dualmark/linalg.hpp"
#include "dualmark/wavelet.hpp"

namespace dualmark::spectral {

/// Singular values that the deepest subbands of a quantized image should
/// carry, indexed in wavelet::kAllBands order.
struct SpectrumTarget {
    wavelet::WaveletKind kind;
    int levels;
    std::array<std::vector<double>, 4> singular_values;
};

struct QuantizeOptions {
    int max_relinearizations = 3;
    int max_sweeps = 3;
};

/// Rounds a real-valued image to 8 bits while keeping the deepest-level
/// subband singular values close to `target`.
///
/// Every output pixel is either the floor or the ceiling of its input (after
/// clamping to [0, 255]). Starting from round-half-away-from-zero, pixels are
/// switched to their other rounding whenever that shrinks the linearized
/// singular-value residual; the linearization is refreshed from the current
/// image up to `max_relinearizations` times and the best image is returned.
/// Deterministic: pixels are visited in row-major order.
imageio::GrayImage quantize_preserving_spectrum(const linalg::Matrix& image,
                                                const SpectrumTarget& target,
                                                const QuantizeOptions& options = {});

/// Max |target - actual| over all bands for an 8-bit image.
double spectrum_residual(const imageio::GrayImage& img, const SpectrumTarget& target);

}  // namespace dualmark::spectral
