#include "dualmark/watermark.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dualmark/spectral_quantize.hpp"

namespace dualmark::watermark {

using wavelet::Band;
using wavelet::kAllBands;

namespace {

constexpr double kOrthonormalTolerance = 1e-6;
constexpr double kReferenceTolerance = 1e-6;

std::string dims(std::size_t w, std::size_t h) { return std::to_string(w) + "x" + std::to_string(h); }
std::string dims(ImageSize s) { return dims(s.width, s.height); }

ImageSize size_of(const GrayImage& img) { return {img.width(), img.height()}; }

ImageSize padded(ImageSize s, Padding p) { return {s.width + p.right, s.height + p.bottom}; }

std::size_t pow2(int levels) { return std::size_t{1} << levels; }

void check_config(const WaveletConfig& cfg, const char* which) {
    if (cfg.levels < 1) {
        throw std::invalid_argument(std::string(which) + " wavelet levels must be >= 1");
    }
}

GrayImage crop_image(const GrayImage& img, ImageSize size) {
    if (img.width() == size.width && img.height() == size.height) return img;
    GrayImage out(size.width, size.height);
    for (std::size_t y = 0; y < size.height; ++y)
        for (std::size_t x = 0; x < size.width; ++x) out.at(x, y) = img.at(x, y);
    return out;
}

struct CarrierEmbedding {
    GrayImage quantized;
    wavelet::SubbandSet modified;
    std::vector<std::vector<double>> reference;
};

// Adds `additive[b]` to the leading singular values of each deepest band of
// `carrier` and returns the spectrum-preserving 8-bit reconstruction.
CarrierEmbedding embed_into(const Matrix& carrier, WaveletConfig cfg,
                            const std::vector<std::vector<double>>& additive) {
    auto pyramid = wavelet::dwt2_multi(carrier, cfg.kind, cfg.levels);
    spectral::SpectrumTarget target{cfg.kind, cfg.levels, {}};
    std::vector<std::vector<double>> reference;
    for (std::size_t b = 0; b < kAllBands.size(); ++b) {
        Matrix& band = pyramid.deepest()[kAllBands[b]];
        linalg::SvdFactors f = linalg::svd(band);
        reference.push_back(f.s);
        if (additive[b].size() > f.s.size()) {
            throw std::invalid_argument("payload has more singular values than the carrier band");
        }
        for (std::size_t i = 0; i < additive[b].size(); ++i) f.s[i] += additive[b][i];
        band = linalg::reconstruct(f);
        target.singular_values[b] = f.s;
    }
    const Matrix image = wavelet::idwt2_multi(pyramid);
    return {spectral::quantize_preserving_spectrum(image, target), pyramid.deepest(),
            std::move(reference)};
}

// (S_received - S_reference) / strength per band, truncated to `count` and
// clamped at zero. The reference image is checked against `stored`.
std::vector<std::vector<double>> extract_from(const Matrix& received, const Matrix& reference,
                                              WaveletConfig cfg, double strength, std::size_t count,
                                              const std::vector<std::vector<double>>& stored,
                                              const char* reference_name) {
    const auto pr = wavelet::dwt2_multi(received, cfg.kind, cfg.levels);
    const auto po = wavelet::dwt2_multi(reference, cfg.kind, cfg.levels);
    std::vector<std::vector<double>> out;
    for (std::size_t b = 0; b < kAllBands.size(); ++b) {
        const auto sr = linalg::singular_values(pr.deepest()[kAllBands[b]]);
        const auto so = linalg::singular_values(po.deepest()[kAllBands[b]]);
        const auto& want = stored[b];
        if (want.size() != so.size()) {
            throw std::invalid_argument(std::string(reference_name) +
                                        " band sizes do not match side information");
        }
        const double tol = kReferenceTolerance * std::max(1.0, want.front());
        for (std::size_t i = 0; i < so.size(); ++i) {
            if (std::abs(so[i] - want[i]) > tol) {
                throw std::invalid_argument(std::string(reference_name) +
                                            " does not match side information (band " +
                                            std::string(wavelet::to_string(kAllBands[b])) + ")");
            }
        }
        std::vector<double> est(count);
        for (std::size_t i = 0; i < count; ++i) est[i] = std::max(0.0, (sr[i] - so[i]) / strength);
        out.push_back(std::move(est));
    }
    return out;
}

Matrix rebuild(const Matrix& u, const std::vector<double>& s, const Matrix& v) {
    return linalg::reconstruct(linalg::SvdFactors{u, s, v});
}

void require_size(const GrayImage& img, ImageSize expected, const char* what) {
    if (size_of(img) != expected) {
        throw std::invalid_argument(std::string(what) + " is " + dims(size_of(img)) +
                                    " but side information expects " + dims(expected));
    }
}

void check_orthonormal(const Matrix& m, const std::string& name) {
    if (linalg::orthogonality_defect(m) > kOrthonormalTolerance) {
        throw std::invalid_argument("side information: " + name + " is not orthonormal");
    }
}

}  // namespace

void validate(const EmbedParams& params) {
    if (!(params.alpha > 0.0) || !std::isfinite(params.alpha)) {
        throw std::invalid_argument("alpha must be finite and positive");
    }
    if (!(params.beta > 0.0) || !std::isfinite(params.beta)) {
        throw std::invalid_argument("beta must be finite and positive");
    }
    check_config(params.primary_wavelet, "primary");
    check_config(params.host_wavelet, "host");
}

Padding padding_for(ImageSize size, std::size_t multiple) {
    return {(multiple - size.width % multiple) % multiple, (multiple - size.height % multiple) % multiple};
}

Matrix pad_replicate(const Matrix& m, Padding pad) {
    if (pad.right == 0 && pad.bottom == 0) return m;
    Matrix out(m.rows() + pad.bottom, m.cols() + pad.right);
    for (std::size_t r = 0; r < out.rows(); ++r) {
        const std::size_t sr = std::min(r, m.rows() - 1);
        for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) = m(sr, std::min(c, m.cols() - 1));
    }
    return out;
}

Matrix crop_to(const Matrix& m, ImageSize size) {
    if (m.cols() == size.width && m.rows() == size.height) return m;
    if (size.width > m.cols() || size.height > m.rows()) {
        throw std::invalid_argument("crop_to: target larger than source");
    }
    Matrix out(size.height, size.width);
    for (std::size_t r = 0; r < size.height; ++r)
        for (std::size_t c = 0; c < size.width; ++c) out(r, c) = m(r, c);
    return out;
}

SecondaryEmbedding embed_secondary(const GrayImage& primary, const GrayImage& secondary, double alpha,
                                   WaveletConfig cfg) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite and positive");
    check_config(cfg, "primary");

    PrimaryStageInfo info;
    info.primary_size = size_of(primary);
    info.primary_pad = padding_for(info.primary_size, pow2(cfg.levels));
    info.secondary_size = size_of(secondary);

    const ImageSize full = padded(info.primary_size, info.primary_pad);
    const ImageSize band{full.width >> cfg.levels, full.height >> cfg.levels};
    if (secondary.width() > band.width || secondary.height() > band.height) {
        const char* axis = secondary.width() > band.width ? "width" : "height";
        throw std::invalid_argument("secondary watermark " + dims(info.secondary_size) + " exceeds the " +
                                    dims(band) + " primary subbands (" + axis + ")");
    }

    linalg::SvdFactors sec = linalg::svd(imageio::to_matrix(secondary));
    std::vector<double> add(sec.s.size());
    for (std::size_t i = 0; i < add.size(); ++i) add[i] = alpha * sec.s[i];

    CarrierEmbedding e = embed_into(pad_replicate(imageio::to_matrix(primary), info.primary_pad), cfg,
                                    std::vector<std::vector<double>>(4, add));
    info.secondary_u = std::move(sec.u);
    info.secondary_s = std::move(sec.s);
    info.secondary_v = std::move(sec.v);
    info.primary_s = std::move(e.reference);
    return {crop_image(e.quantized, info.primary_size), std::move(info), std::move(e.modified)};
}

HostEmbedding embed_host(const GrayImage& host, const GrayImage& payload, double beta, WaveletConfig cfg) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be finite and positive");
    check_config(cfg, "host");

    HostStageInfo info;
    info.host_size = size_of(host);
    info.host_pad = padding_for(info.host_size, pow2(cfg.levels));
    info.payload_size = size_of(payload);
    info.payload_pad = padding_for(info.payload_size, 2);

    const ImageSize full = padded(info.host_size, info.host_pad);
    const ImageSize band{full.width >> cfg.levels, full.height >> cfg.levels};
    const ImageSize payload_full = padded(info.payload_size, info.payload_pad);
    const ImageSize payload_band{payload_full.width / 2, payload_full.height / 2};
    if (payload_band.width > band.width || payload_band.height > band.height) {
        const char* axis = payload_band.width > band.width ? "width" : "height";
        throw std::invalid_argument("payload " + dims(info.payload_size) + " needs " + dims(payload_band) +
                                    " Haar subbands but the host's deepest subbands are " +
                                    dims(band) + " (" + axis + ")");
    }

    const auto payload_bands = wavelet::dwt2(
        pad_replicate(imageio::to_matrix(payload), info.payload_pad), wavelet::WaveletKind::Haar);
    std::vector<std::vector<double>> add;
    for (Band b : kAllBands) {
        linalg::SvdFactors f = linalg::svd(payload_bands[b]);
        std::vector<double> scaled(f.s.size());
        for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = beta * f.s[i];
        add.push_back(std::move(scaled));
        info.payload_u.push_back(std::move(f.u));
        info.payload_v.push_back(std::move(f.v));
    }

    CarrierEmbedding e = embed_into(pad_replicate(imageio::to_matrix(host), info.host_pad), cfg, add);
    info.host_s = std::move(e.reference);
    return {crop_image(e.quantized, info.host_size), std::move(info), std::move(e.modified)};
}

GrayImage extract_primary(const GrayImage& watermarked_host, const GrayImage& host, const SideInfo& info) {
    const HostStageInfo& hs = info.host_stage;
    require_size(watermarked_host, hs.host_size, "watermarked host");
    require_size(host, hs.host_size, "host");

    const auto est = extract_from(pad_replicate(imageio::to_matrix(watermarked_host), hs.host_pad),
                                  pad_replicate(imageio::to_matrix(host), hs.host_pad),
                                  info.params.host_wavelet, info.params.beta, hs.payload_u.front().cols(),
                                  hs.host_s, "host image");

    wavelet::SubbandSet bands{rebuild(hs.payload_u[0], est[0], hs.payload_v[0]),
                              rebuild(hs.payload_u[1], est[1], hs.payload_v[1]),
                              rebuild(hs.payload_u[2], est[2], hs.payload_v[2]),
                              rebuild(hs.payload_u[3], est[3], hs.payload_v[3]),
                              wavelet::WaveletKind::Haar};
    return imageio::from_matrix(crop_to(wavelet::idwt2(bands), hs.payload_size));
}

GrayImage extract_secondary(const GrayImage& recovered_primary, const GrayImage& original_primary,
                            const SideInfo& info) {
    const PrimaryStageInfo& ps = info.primary_stage;
    require_size(recovered_primary, ps.primary_size, "recovered primary");
    require_size(original_primary, ps.primary_size, "original primary");

    const auto est = extract_from(pad_replicate(imageio::to_matrix(recovered_primary), ps.primary_pad),
                                  pad_replicate(imageio::to_matrix(original_primary), ps.primary_pad),
                                  info.params.primary_wavelet, info.params.alpha, ps.secondary_s.size(),
                                  ps.primary_s, "original primary");

    Matrix sum(ps.secondary_u.rows(), ps.secondary_v.rows());
    for (const auto& s : est) sum = linalg::add(sum, rebuild(ps.secondary_u, s, ps.secondary_v));
    return imageio::from_matrix(linalg::scale(sum, 1.0 / static_cast<double>(est.size())));
}

GrayImage embedded_primary(const GrayImage& original_primary, const SideInfo& info) {
    const PrimaryStageInfo& ps = info.primary_stage;
    require_size(original_primary, ps.primary_size, "original primary");
    std::vector<double> add(ps.secondary_s.size());
    for (std::size_t i = 0; i < add.size(); ++i) add[i] = info.params.alpha * ps.secondary_s[i];
    CarrierEmbedding e = embed_into(pad_replicate(imageio::to_matrix(original_primary), ps.primary_pad),
                                    info.params.primary_wavelet, std::vector<std::vector<double>>(4, add));
    for (std::size_t b = 0; b < e.reference.size(); ++b) {
        const double tol = kReferenceTolerance * std::max(1.0, ps.primary_s[b].front());
        for (std::size_t i = 0; i < e.reference[b].size(); ++i) {
            if (std::abs(e.reference[b][i] - ps.primary_s[b][i]) > tol) {
                throw std::invalid_argument("original primary does not match side information");
            }
        }
    }
    return crop_image(e.quantized, ps.primary_size);
}

SealedResult seal(const GrayImage& host, const GrayImage& primary, const GrayImage& secondary,
                  const chaos::ChaosKey& key, const EmbedParams& params) {
    validate(params);
    chaos::validate(key);
    SecondaryEmbedding inner = embed_secondary(primary, secondary, params.alpha, params.primary_wavelet);
    const GrayImage encrypted = chaos::xor_cipher(inner.watermarked, key);
    HostEmbedding outer = embed_host(host, encrypted, params.beta, params.host_wavelet);
    return {std::move(outer.watermarked), SideInfo{params, std::move(inner.info), std::move(outer.info)},
            std::move(inner.watermarked)};
}

Recovered unseal(const GrayImage& watermarked_host, const GrayImage& host,
                 const GrayImage& original_primary, const chaos::ChaosKey& key, const SideInfo& info) {
    const GrayImage payload = extract_primary(watermarked_host, host, info);
    GrayImage primary = chaos::xor_cipher(payload, key);
    GrayImage secondary = extract_secondary(primary, original_primary, info);
    return {std::move(primary), std::move(secondary)};
}

void validate(const SideInfo& info) {
    validate(info.params);
    const PrimaryStageInfo& ps = info.primary_stage;
    const HostStageInfo& hs = info.host_stage;

    if (ps.primary_pad != padding_for(ps.primary_size, pow2(info.params.primary_wavelet.levels)) ||
        hs.host_pad != padding_for(hs.host_size, pow2(info.params.host_wavelet.levels)) ||
        hs.payload_pad != padding_for(hs.payload_size, 2)) {
        throw std::invalid_argument("side information: padding inconsistent with image sizes");
    }
    if (hs.payload_size != ps.primary_size) {
        throw std::invalid_argument("side information: payload size " + dims(hs.payload_size) +
                                    " differs from primary size " + dims(ps.primary_size));
    }

    const std::size_t rank = std::min(ps.secondary_size.width, ps.secondary_size.height);
    if (ps.secondary_u.rows() != ps.secondary_size.height || ps.secondary_v.rows() != ps.secondary_size.width ||
        ps.secondary_u.cols() != rank || ps.secondary_v.cols() != rank || ps.secondary_s.size() != rank) {
        throw std::invalid_argument("side information: secondary factors inconsistent with " +
                                    dims(ps.secondary_size));
    }
    check_orthonormal(ps.secondary_u, "secondary_u");
    check_orthonormal(ps.secondary_v, "secondary_v");

    const ImageSize pfull = padded(ps.primary_size, ps.primary_pad);
    const int pl = info.params.primary_wavelet.levels;
    const std::size_t prank = std::min(pfull.width >> pl, pfull.height >> pl);
    if (ps.primary_s.size() != 4 || prank < rank) {
        throw std::invalid_argument("side information: primary reference spectra malformed");
    }
    for (const auto& s : ps.primary_s) {
        if (s.size() != prank) throw std::invalid_argument("side information: primary spectrum length mismatch");
    }

    const ImageSize payload_full = padded(hs.payload_size, hs.payload_pad);
    const std::size_t bh = payload_full.height / 2;
    const std::size_t bw = payload_full.width / 2;
    const ImageSize hfull = padded(hs.host_size, hs.host_pad);
    const int hl = info.params.host_wavelet.levels;
    const std::size_t hrank = std::min(hfull.width >> hl, hfull.height >> hl);
    if (hs.payload_u.size() != 4 || hs.payload_v.size() != 4 || hs.host_s.size() != 4) {
        throw std::invalid_argument("side information: host stage needs four bands");
    }
    for (std::size_t b = 0; b < 4; ++b) {
        const std::string band(wavelet::to_string(kAllBands[b]));
        if (hs.payload_u[b].rows() != bh || hs.payload_v[b].rows() != bw ||
            hs.payload_u[b].cols() != std::min(bh, bw) || hs.payload_v[b].cols() != std::min(bh, bw)) {
            throw std::invalid_argument("side information: payload factors for band " + band +
                                        " inconsistent with " + dims(hs.payload_size));
        }
        if (hs.host_s[b].size() != hrank || hrank < std::min(bh, bw)) {
            throw std::invalid_argument("side information: host spectrum for band " + band + " malformed");
        }
        check_orthonormal(hs.payload_u[b], "payload_u_" + band);
        check_orthonormal(hs.payload_v[b], "payload_v_" + band);
    }
}

}  // namespace dualmark::watermark
