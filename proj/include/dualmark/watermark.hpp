#pragma once

#include <cstddef>
#include <vector>

#include "dualmark/chaos_cipher.hpp"
#include "dualmark/imageio.hpp"
#include "dualmark/linalg.hpp"
#include "dualmark/wavelet.hpp"

namespace dualmark::watermark {

using imageio::GrayImage;
using linalg::Matrix;

struct WaveletConfig {
    wavelet::WaveletKind kind;
    int levels;

    friend bool operator==(const WaveletConfig&, const WaveletConfig&) = default;
};

struct EmbedParams {
    double alpha = 0.1;   ///< strength of the secondary inside the primary
    double beta = 0.05;   ///< strength of the encrypted primary inside the host
    WaveletConfig primary_wavelet{wavelet::WaveletKind::Haar, 1};
    WaveletConfig host_wavelet{wavelet::WaveletKind::Daubechies4, 2};

    friend bool operator==(const EmbedParams&, const EmbedParams&) = default;
};

/// Throws std::invalid_argument unless alpha and beta are finite and positive
/// and both wavelet configs have at least one level.
void validate(const EmbedParams& params);

struct ImageSize {
    std::size_t width = 0;
    std::size_t height = 0;

    friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

/// Edge-replicated columns/rows appended before transforming.
struct Padding {
    std::size_t right = 0;
    std::size_t bottom = 0;

    friend bool operator==(const Padding&, const Padding&) = default;
};

/// What extract_secondary needs: the secondary's SVD factors and the
/// primary's per-band reference singular values (kAllBands order).
struct PrimaryStageInfo {
    ImageSize primary_size;
    Padding primary_pad;
    ImageSize secondary_size;
    Matrix secondary_u{1, 1};
    std::vector<double> secondary_s;
    Matrix secondary_v{1, 1};
    std::vector<std::vector<double>> primary_s;
};

/// What extract_primary needs: the payload's per-Haar-band SVD factors and
/// the host's deepest-level reference singular values (kAllBands order).
struct HostStageInfo {
    ImageSize host_size;
    Padding host_pad;
    ImageSize payload_size;
    Padding payload_pad;
    std::vector<Matrix> payload_u;
    std::vector<Matrix> payload_v;
    std::vector<std::vector<double>> host_s;
};

struct SideInfo {
    EmbedParams params;
    PrimaryStageInfo primary_stage;
    HostStageInfo host_stage;
};

/// Throws std::invalid_argument if stored factors are not orthonormal
/// (within 1e-6) or dimensions disagree with each other.
void validate(const SideInfo& info);

struct SecondaryEmbedding {
    GrayImage watermarked;
    PrimaryStageInfo info;
    wavelet::SubbandSet modified;  ///< deepest bands before the inverse transform
};

struct HostEmbedding {
    GrayImage watermarked;
    HostStageInfo info;
    wavelet::SubbandSet modified;
};

/// For every deepest band θ of the primary: S*_θ = alpha * S_secondary + S_θ,
/// rebuilt with the band's own singular vectors, then inverse transformed.
SecondaryEmbedding embed_secondary(const GrayImage& primary, const GrayImage& secondary,
                                   double alpha,
                                   WaveletConfig wavelet = {wavelet::WaveletKind::Haar, 1});

/// Splits the payload into its one-level Haar bands and adds beta times each
/// band's singular values to the matching deepest band of the host.
HostEmbedding embed_host(const GrayImage& host, const GrayImage& payload, double beta,
                         WaveletConfig wavelet = {wavelet::WaveletKind::Daubechies4, 2});

/// Recovers the (still encrypted) payload: per band (S_marked - S_host) / beta,
/// clamped at zero, rebuilt with the stored payload factors.
GrayImage extract_primary(const GrayImage& watermarked_host, const GrayImage& host,
                          const SideInfo& info);

/// Per band (S_recovered - S_primary) / alpha, rebuilt with the stored
/// secondary factors; the four band estimates are averaged.
GrayImage extract_secondary(const GrayImage& recovered_primary, const GrayImage& original_primary,
                            const SideInfo& info);

/// The primary exactly as it was embedded (original primary carrying the
/// secondary), rebuilt from the original and the side information.
GrayImage embedded_primary(const GrayImage& original_primary, const SideInfo& info);

struct SealedResult {
    GrayImage watermarked_host;
    SideInfo side_info;
    GrayImage watermarked_primary;
};

/// embed_secondary -> xor_cipher -> embed_host.
SealedResult seal(const GrayImage& host, const GrayImage& primary, const GrayImage& secondary,
                  const chaos::ChaosKey& key, const EmbedParams& params);

struct Recovered {
    GrayImage primary;
    GrayImage secondary;
};

/// extract_primary -> xor_cipher (decrypt) -> extract_secondary.
Recovered unseal(const GrayImage& watermarked_host, const GrayImage& host,
                 const GrayImage& original_primary, const chaos::ChaosKey& key,
                 const SideInfo& info);

/// Replicates the last column/row until both extents are multiples of `multiple`.
Matrix pad_replicate(const Matrix& m, Padding pad);
Padding padding_for(ImageSize size, std::size_t multiple);
Matrix crop_to(const Matrix& m, ImageSize size);

}  // namespace dualmark::watermark
