#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dualmark/wavelet.hpp"
#include "oracles.hpp"

using namespace dualmark::wavelet;
using dualmark::linalg::Matrix;
using dualmark::linalg::frobenius_norm;
using dualmark::linalg::max_abs;
using dualmark::linalg::subtract;

namespace {

double energy(const Matrix& m) { return std::pow(frobenius_norm(m), 2); }

void expect_matrix_near(const Matrix& got, const Matrix& want, double tol) {
    ASSERT_EQ(got.rows(), want.rows());
    ASSERT_EQ(got.cols(), want.cols());
    EXPECT_LE(max_abs(subtract(got, want)), tol);
}

}  // namespace

TEST(Filters, OrthonormalTaps) {
    for (auto kind : {WaveletKind::Haar, WaveletKind::Daubechies4}) {
        const auto h = lowpass_filter(kind);
        const auto g = highpass_filter(kind);
        double hh = 0, gg = 0, hg = 0, sum = 0;
        for (std::size_t i = 0; i < h.size(); ++i) {
            hh += h[i] * h[i];
            gg += g[i] * g[i];
            hg += h[i] * g[i];
            sum += h[i];
        }
        EXPECT_NEAR(hh, 1.0, 1e-15);
        EXPECT_NEAR(gg, 1.0, 1e-15);
        EXPECT_NEAR(hg, 0.0, 1e-15);
        EXPECT_NEAR(sum, std::sqrt(2.0), 1e-15);
    }
}

TEST(Filters, MatchClosedForm) {
    const auto want = oracle::daubechies4_filters();
    const auto h = lowpass_filter(WaveletKind::Daubechies4);
    const auto g = highpass_filter(WaveletKind::Daubechies4);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(h[i], want.low[i], 4e-16);
        EXPECT_NEAR(g[i], want.high[i], 4e-16);
    }
}

TEST(WaveletNames, ParseAndPrint) {
    EXPECT_EQ(parse_wavelet_kind("haar"), WaveletKind::Haar);
    EXPECT_EQ(parse_wavelet_kind("db4"), WaveletKind::Daubechies4);
    EXPECT_EQ(parse_wavelet_kind(to_string(WaveletKind::Daubechies4)), WaveletKind::Daubechies4);
    EXPECT_THROW(parse_wavelet_kind("coif2"), std::invalid_argument);
}

TEST(Dwt2, ConstantHaarGivesTwiceTheValueInLL) {
    const double c = 37.5;
    Matrix x(4, 4);
    for (double& v : x.data()) v = c;
    const auto b = dwt2(x, WaveletKind::Haar);
    for (double v : b.ll.data()) EXPECT_NEAR(v, 2 * c, 1e-12);
    EXPECT_LE(max_abs(b.lh), 1e-12);
    EXPECT_LE(max_abs(b.hl), 1e-12);
    EXPECT_LE(max_abs(b.hh), 1e-12);
}

TEST(Dwt2, TwoByTwoHaarClosedForm) {
    const double a = 9, b = 4, c = 2, d = 7;
    const auto s = dwt2(Matrix(2, 2, {a, b, c, d}), WaveletKind::Haar);
    EXPECT_NEAR(s.ll(0, 0), (a + b + c + d) / 2, 1e-14);
    EXPECT_NEAR(s.hl(0, 0), (a - b + c - d) / 2, 1e-14);
    EXPECT_NEAR(s.lh(0, 0), (a + b - c - d) / 2, 1e-14);
    EXPECT_NEAR(s.hh(0, 0), (a - b - c + d) / 2, 1e-14);
}

TEST(Dwt2, Daubechies4MatchesDirectConvolution) {
    std::mt19937_64 rng(8);
    const Matrix x = oracle::random_matrix(rng, 8, 8, 0, 255);
    const auto got = dwt2(x, WaveletKind::Daubechies4);
    const auto want = oracle::direct_dwt2(x, oracle::daubechies4_filters());
    expect_matrix_near(got.ll, want.ll, 1e-10);
    expect_matrix_near(got.lh, want.lh, 1e-10);
    expect_matrix_near(got.hl, want.hl, 1e-10);
    expect_matrix_near(got.hh, want.hh, 1e-10);
}

TEST(Dwt2, HaarMatchesDirectConvolutionOnRectangle) {
    std::mt19937_64 rng(9);
    const Matrix x = oracle::random_matrix(rng, 6, 10);
    const auto got = dwt2(x, WaveletKind::Haar);
    const auto want = oracle::direct_dwt2(x, oracle::haar_filters());
    expect_matrix_near(got.ll, want.ll, 1e-12);
    expect_matrix_near(got.lh, want.lh, 1e-12);
    expect_matrix_near(got.hl, want.hl, 1e-12);
    expect_matrix_near(got.hh, want.hh, 1e-12);
    EXPECT_EQ(got.hh.rows(), 3u);
    EXPECT_EQ(got.hh.cols(), 5u);
}

TEST(Dwt2, ErrorsOnOddOrTooSmallExtent) {
    EXPECT_THROW(dwt2(Matrix(5, 4), WaveletKind::Haar), std::invalid_argument);
    EXPECT_THROW(dwt2(Matrix(4, 2), WaveletKind::Daubechies4), std::invalid_argument);
    EXPECT_THROW(dwt2(Matrix(1, 1), WaveletKind::Haar), std::invalid_argument);
}

TEST(Dwt2, Linearity) {
    std::mt19937_64 rng(10);
    const Matrix x = oracle::random_matrix(rng, 16, 16);
    const Matrix y = oracle::random_matrix(rng, 16, 16);
    const double a = 2.5, b = -0.75;
    const auto lhs = dwt2(dualmark::linalg::add(dualmark::linalg::scale(x, a), dualmark::linalg::scale(y, b)),
                          WaveletKind::Daubechies4);
    const auto dx = dwt2(x, WaveletKind::Daubechies4);
    const auto dy = dwt2(y, WaveletKind::Daubechies4);
    for (auto band : kAllBands) {
        const Matrix rhs = dualmark::linalg::add(dualmark::linalg::scale(dx[band], a),
                                                 dualmark::linalg::scale(dy[band], b));
        expect_matrix_near(lhs[band], rhs, 1e-9);
    }
}

TEST(Dwt2, EnergyPreserved) {
    std::mt19937_64 rng(14);
    for (auto kind : {WaveletKind::Haar, WaveletKind::Daubechies4}) {
        const Matrix x = oracle::random_matrix(rng, 32, 24, 0, 255);
        const auto b = dwt2(x, kind);
        const double total = energy(b.ll) + energy(b.lh) + energy(b.hl) + energy(b.hh);
        EXPECT_NEAR(total / energy(x), 1.0, 1e-12);
    }
}

TEST(Idwt2, HaarRoundTrip) {
    std::mt19937_64 rng(15);
    const Matrix x = oracle::random_matrix(rng, 16, 16, 0, 255);
    EXPECT_LE(max_abs(subtract(idwt2(dwt2(x, WaveletKind::Haar)), x)), 1e-10);
}

TEST(Idwt2, Daubechies4RoundTrip) {
    std::mt19937_64 rng(16);
    const Matrix x = oracle::random_matrix(rng, 16, 16, 0, 255);
    EXPECT_LE(max_abs(subtract(idwt2(dwt2(x, WaveletKind::Daubechies4)), x)), 1e-8);
}

TEST(Idwt2, ZeroBandsGiveZero) {
    SubbandSet z{Matrix(3, 4), Matrix(3, 4), Matrix(3, 4), Matrix(3, 4), WaveletKind::Daubechies4};
    EXPECT_EQ(idwt2(z), Matrix(6, 8));
}

TEST(Idwt2, MismatchedBandsThrow) {
    SubbandSet bad{Matrix(3, 4), Matrix(3, 4), Matrix(4, 4), Matrix(3, 4), WaveletKind::Haar};
    EXPECT_THROW(idwt2(bad), std::invalid_argument);
}

TEST(Dwt2Multi, PaperSizeTwoLevels) {
    const auto p = dwt2_multi(Matrix(256, 256), WaveletKind::Daubechies4, 2);
    ASSERT_EQ(p.levels.size(), 2u);
    EXPECT_EQ(p.levels[0].ll.rows(), 128u);
    for (auto band : kAllBands) {
        EXPECT_EQ(p.deepest()[band].rows(), 64u);
        EXPECT_EQ(p.deepest()[band].cols(), 64u);
    }
}

TEST(Dwt2Multi, RoundTripTwoLevels) {
    std::mt19937_64 rng(17);
    const Matrix x = oracle::random_matrix(rng, 32, 32, 0, 255);
    for (auto kind : {WaveletKind::Haar, WaveletKind::Daubechies4})
        EXPECT_LE(max_abs(subtract(idwt2_multi(dwt2_multi(x, kind, 2)), x)), 1e-8);
}

TEST(Dwt2Multi, SecondLevelIsDwtOfFirstLL) {
    std::mt19937_64 rng(18);
    const Matrix x = oracle::random_matrix(rng, 16, 32);
    const auto p = dwt2_multi(x, WaveletKind::Daubechies4, 2);
    const auto again = dwt2(p.levels[0].ll, WaveletKind::Daubechies4);
    for (auto band : kAllBands) EXPECT_EQ(p.levels[1][band], again[band]);
}

TEST(Dwt2Multi, TooManyLevelsThrows) {
    EXPECT_THROW(dwt2_multi(Matrix(16, 16), WaveletKind::Daubechies4, 4), std::invalid_argument);
    EXPECT_THROW(dwt2_multi(Matrix(12, 12), WaveletKind::Haar, 3), std::invalid_argument);
    EXPECT_THROW(dwt2_multi(Matrix(16, 16), WaveletKind::Haar, 0), std::invalid_argument);
    EXPECT_NO_THROW(dwt2_multi(Matrix(16, 16), WaveletKind::Daubechies4, 3));
}

TEST(Dwt2Multi, SupportsLevels) {
    EXPECT_TRUE(supports_levels(256, WaveletKind::Daubechies4, 2));
    EXPECT_TRUE(supports_levels(8, WaveletKind::Daubechies4, 2));
    EXPECT_FALSE(supports_levels(8, WaveletKind::Daubechies4, 3));
    EXPECT_FALSE(supports_levels(6, WaveletKind::Haar, 2));
}

TEST(Idwt2Multi, SingleLevelEqualsIdwt2) {
    std::mt19937_64 rng(19);
    const auto p = dwt2_multi(oracle::random_matrix(rng, 8, 8), WaveletKind::Haar, 1);
    EXPECT_EQ(idwt2_multi(p), idwt2(p.levels[0]));
}

TEST(Idwt2Multi, ZeroPyramidGivesZero) {
    const auto p = dwt2_multi(Matrix(32, 32), WaveletKind::Daubechies4, 2);
    EXPECT_EQ(idwt2_multi(p), Matrix(32, 32));
}

TEST(AxisOperator, ReproducesSeparableBands) {
    std::mt19937_64 rng(20);
    const Matrix x = oracle::random_matrix(rng, 32, 16);
    const auto p = dwt2_multi(x, WaveletKind::Daubechies4, 2);
    using dualmark::linalg::multiply;
    using dualmark::linalg::transpose;
    const Matrix rl = axis_operator(32, WaveletKind::Daubechies4, 2, false);
    const Matrix rh = axis_operator(32, WaveletKind::Daubechies4, 2, true);
    const Matrix cl = axis_operator(16, WaveletKind::Daubechies4, 2, false);
    const Matrix ch = axis_operator(16, WaveletKind::Daubechies4, 2, true);
    expect_matrix_near(multiply(multiply(rl, x), transpose(cl)), p.deepest().ll, 1e-10);
    expect_matrix_near(multiply(multiply(rl, x), transpose(ch)), p.deepest().hl, 1e-10);
    expect_matrix_near(multiply(multiply(rh, x), transpose(cl)), p.deepest().lh, 1e-10);
    expect_matrix_near(multiply(multiply(rh, x), transpose(ch)), p.deepest().hh, 1e-10);
}
