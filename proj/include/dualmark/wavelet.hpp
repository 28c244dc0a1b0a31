#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dualmark/linalg.hpp"

namespace dualmark::wavelet {

using linalg::Matrix;

enum class WaveletKind { Haar, Daubechies4 };

std::string_view to_string(WaveletKind kind);
/// Accepts "haar" and "daubechies4" (alias "db4"); throws std::invalid_argument otherwise.
WaveletKind parse_wavelet_kind(std::string_view name);

/// Orthonormal analysis lowpass taps. The highpass is g[n] = (-1)^n h[L-1-n].
std::span<const double> lowpass_filter(WaveletKind kind);
std::vector<double> highpass_filter(WaveletKind kind);

/// Subband orientation named as (horizontal filter, vertical filter):
/// HL is highpass across columns and lowpass down rows.
enum class Band { LL, LH, HL, HH };
inline constexpr std::array<Band, 4> kAllBands{Band::LL, Band::LH, Band::HL, Band::HH};
std::string_view to_string(Band band);

struct SubbandSet {
    Matrix ll;
    Matrix lh;
    Matrix hl;
    Matrix hh;
    WaveletKind kind;

    Matrix& operator[](Band b);
    const Matrix& operator[](Band b) const;
};

/// levels.front() is the first decomposition; levels.back() is the deepest.
/// Only the deepest ll is used on reconstruction.
struct WaveletPyramid {
    std::vector<SubbandSet> levels;

    const SubbandSet& deepest() const { return levels.back(); }
    SubbandSet& deepest() { return levels.back(); }
};

/// Separable one-level 2-D DWT with periodic extension: rows first, then columns.
SubbandSet dwt2(const Matrix& input, WaveletKind kind);
Matrix idwt2(const SubbandSet& bands);

WaveletPyramid dwt2_multi(const Matrix& input, WaveletKind kind, int levels);
Matrix idwt2_multi(const WaveletPyramid& pyramid);

/// True when an extent of `n` survives `levels` halvings with every stage
/// even and at least as long as the filter.
bool supports_levels(std::size_t n, WaveletKind kind, int levels);

/// The linear map from a length-`n` signal to the `levels`-deep coefficients
/// of the given band along one axis (lowpass for every shallower level).
/// Row k of the result holds the weights of coefficient k.
Matrix axis_operator(std::size_t n, WaveletKind kind, int levels, bool highpass);

/// The 1-D analysis step used by dwt2 (exposed for the operator builder and tests).
void analyze(std::span<const double> signal, WaveletKind kind, std::span<double> low,
             std::span<double> high);

}  // namespace dualmark::wavelet
