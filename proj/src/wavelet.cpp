#include "dualmark/wavelet.hpp"

#include <stdexcept>
#include <string>

namespace dualmark::wavelet {

namespace {

constexpr std::array<double, 2> kHaar{0.70710678118654752440, 0.70710678118654752440};
constexpr std::array<double, 4> kDaubechies4{
    0.48296291314453414337,
    0.83651630373780790558,
    0.22414386804201338103,
    -0.12940952255126038117,
};

void synthesize(std::span<const double> low, std::span<const double> high, WaveletKind kind,
                std::span<double> signal) {
    const auto h = lowpass_filter(kind);
    const auto g = highpass_filter(kind);
    const std::size_t n = signal.size();
    std::fill(signal.begin(), signal.end(), 0.0);
    for (std::size_t k = 0; k < low.size(); ++k) {
        for (std::size_t t = 0; t < h.size(); ++t) {
            signal[(2 * k + t) % n] += low[k] * h[t] + high[k] * g[t];
        }
    }
}

void check_extent(std::size_t n, WaveletKind kind, const char* axis) {
    if (n < lowpass_filter(kind).size()) {
        throw std::invalid_argument(std::string("dwt2: ") + axis + " extent " + std::to_string(n) +
                                    " is smaller than the " + std::string(to_string(kind)) +
                                    " filter support");
    }
    if (n % 2 != 0) {
        throw std::invalid_argument(std::string("dwt2: ") + axis + " extent " + std::to_string(n) +
                                    " is odd");
    }
}

}  // namespace

std::string_view to_string(WaveletKind kind) {
    switch (kind) {
        case WaveletKind::Haar: return "haar";
        case WaveletKind::Daubechies4: return "daubechies4";
    }
    return "unknown";
}

WaveletKind parse_wavelet_kind(std::string_view name) {
    if (name == "haar") return WaveletKind::Haar;
    if (name == "daubechies4" || name == "db4") return WaveletKind::Daubechies4;
    throw std::invalid_argument("unknown wavelet '" + std::string(name) + "'");
}

std::span<const double> lowpass_filter(WaveletKind kind) {
    if (kind == WaveletKind::Haar) return kHaar;
    return kDaubechies4;
}

std::vector<double> highpass_filter(WaveletKind kind) {
    const auto h = lowpass_filter(kind);
    const std::size_t len = h.size();
    std::vector<double> g(len);
    for (std::size_t n = 0; n < len; ++n) g[n] = (n % 2 == 0 ? 1.0 : -1.0) * h[len - 1 - n];
    return g;
}

std::string_view to_string(Band band) {
    switch (band) {
        case Band::LL: return "ll";
        case Band::LH: return "lh";
        case Band::HL: return "hl";
        case Band::HH: return "hh";
    }
    return "unknown";
}

Matrix& SubbandSet::operator[](Band b) {
    switch (b) {
        case Band::LL: return ll;
        case Band::LH: return lh;
        case Band::HL: return hl;
        case Band::HH: break;
    }
    return hh;
}

const Matrix& SubbandSet::operator[](Band b) const {
    return const_cast<SubbandSet&>(*this)[b];
}

void analyze(std::span<const double> signal, WaveletKind kind, std::span<double> low,
             std::span<double> high) {
    const auto h = lowpass_filter(kind);
    const auto g = highpass_filter(kind);
    const std::size_t n = signal.size();
    for (std::size_t k = 0; k < n / 2; ++k) {
        double lo = 0.0;
        double hi = 0.0;
        for (std::size_t t = 0; t < h.size(); ++t) {
            const double x = signal[(2 * k + t) % n];
            lo += h[t] * x;
            hi += g[t] * x;
        }
        low[k] = lo;
        high[k] = hi;
    }
}

SubbandSet dwt2(const Matrix& input, WaveletKind kind) {
    const std::size_t rows = input.rows();
    const std::size_t cols = input.cols();
    check_extent(rows, kind, "row");
    check_extent(cols, kind, "column");
    const std::size_t hr = rows / 2;
    const std::size_t hc = cols / 2;

    Matrix lo(rows, hc);
    Matrix hi(rows, hc);
    for (std::size_t r = 0; r < rows; ++r) analyze(input.row(r), kind, lo.row(r), hi.row(r));

    SubbandSet out{Matrix(hr, hc), Matrix(hr, hc), Matrix(hr, hc), Matrix(hr, hc), kind};
    std::vector<double> column(rows);
    std::vector<double> a(hr);
    std::vector<double> d(hr);
    auto split_columns = [&](const Matrix& src, Matrix& low_out, Matrix& high_out) {
        for (std::size_t c = 0; c < hc; ++c) {
            for (std::size_t r = 0; r < rows; ++r) column[r] = src(r, c);
            analyze(column, kind, a, d);
            for (std::size_t r = 0; r < hr; ++r) {
                low_out(r, c) = a[r];
                high_out(r, c) = d[r];
            }
        }
    };
    split_columns(lo, out.ll, out.lh);
    split_columns(hi, out.hl, out.hh);
    return out;
}

Matrix idwt2(const SubbandSet& bands) {
    const std::size_t hr = bands.ll.rows();
    const std::size_t hc = bands.ll.cols();
    for (Band b : kAllBands) {
        if (bands[b].rows() != hr || bands[b].cols() != hc) {
            throw std::invalid_argument("idwt2: subband " + std::string(to_string(b)) +
                                        " dimensions differ from ll");
        }
    }
    const std::size_t rows = hr * 2;
    const std::size_t cols = hc * 2;

    Matrix lo(rows, hc);
    Matrix hi(rows, hc);
    std::vector<double> column(rows);
    std::vector<double> a(hr);
    std::vector<double> d(hr);
    auto merge_columns = [&](const Matrix& low_in, const Matrix& high_in, Matrix& dst) {
        for (std::size_t c = 0; c < hc; ++c) {
            for (std::size_t r = 0; r < hr; ++r) {
                a[r] = low_in(r, c);
                d[r] = high_in(r, c);
            }
            synthesize(a, d, bands.kind, column);
            for (std::size_t r = 0; r < rows; ++r) dst(r, c) = column[r];
        }
    };
    merge_columns(bands.ll, bands.lh, lo);
    merge_columns(bands.hl, bands.hh, hi);

    Matrix out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) synthesize(lo.row(r), hi.row(r), bands.kind, out.row(r));
    return out;
}

bool supports_levels(std::size_t n, WaveletKind kind, int levels) {
    if (levels < 1) return false;
    for (int l = 0; l < levels; ++l) {
        if (n % 2 != 0 || n < lowpass_filter(kind).size()) return false;
        n /= 2;
    }
    return true;
}

WaveletPyramid dwt2_multi(const Matrix& input, WaveletKind kind, int levels) {
    if (levels < 1) throw std::invalid_argument("dwt2_multi: levels must be positive");
    if (!supports_levels(input.rows(), kind, levels) || !supports_levels(input.cols(), kind, levels)) {
        throw std::invalid_argument("dwt2_multi: " + std::to_string(input.rows()) + "x" +
                                    std::to_string(input.cols()) + " input does not support " +
                                    std::to_string(levels) + " " + std::string(to_string(kind)) +
                                    " levels");
    }
    WaveletPyramid p;
    p.levels.reserve(static_cast<std::size_t>(levels));
    p.levels.push_back(dwt2(input, kind));
    for (int l = 1; l < levels; ++l) p.levels.push_back(dwt2(p.levels.back().ll, kind));
    return p;
}

Matrix idwt2_multi(const WaveletPyramid& pyramid) {
    if (pyramid.levels.empty()) throw std::invalid_argument("idwt2_multi: empty pyramid");
    Matrix approx = idwt2(pyramid.levels.back());
    for (std::size_t l = pyramid.levels.size() - 1; l-- > 0;) {
        const SubbandSet& level = pyramid.levels[l];
        if (approx.rows() != level.lh.rows() || approx.cols() != level.lh.cols()) {
            throw std::invalid_argument("idwt2_multi: level " + std::to_string(l) +
                                        " detail dimensions inconsistent with deeper level");
        }
        approx = idwt2(SubbandSet{approx, level.lh, level.hl, level.hh, level.kind});
    }
    return approx;
}

Matrix axis_operator(std::size_t n, WaveletKind kind, int levels, bool highpass) {
    if (!supports_levels(n, kind, levels)) {
        throw std::invalid_argument("axis_operator: extent " + std::to_string(n) +
                                    " does not support " + std::to_string(levels) + " levels");
    }
    std::size_t out_len = n >> levels;
    Matrix op(out_len, n);
    std::vector<double> current(n);
    std::vector<double> low(n / 2);
    std::vector<double> high(n / 2);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(current.begin(), current.end(), 0.0);
        current[j] = 1.0;
        std::size_t len = n;
        for (int l = 0; l < levels; ++l) {
            analyze(std::span<const double>(current.data(), len), kind,
                    std::span<double>(low.data(), len / 2), std::span<double>(high.data(), len / 2));
            const bool last = (l + 1 == levels);
            const auto& keep = (last && highpass) ? high : low;
            std::copy_n(keep.begin(), len / 2, current.begin());
            len /= 2;
        }
        for (std::size_t k = 0; k < out_len; ++k) op(k, j) = current[k];
    }
    return op;
}

}  // namespace dualmark::wavelet
