#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dualmark/attacks.hpp"
#include "oracles.hpp"

using namespace dualmark::attacks;
using dualmark::imageio::GrayImage;

TEST(ParseAttack, AcceptedForms) {
    EXPECT_TRUE(std::holds_alternative<NoAttack>(parse_attack("none")));
    EXPECT_EQ(std::get<MedianFilter>(parse_attack("median:3")).k, 3);
    EXPECT_EQ(std::get<AverageFilter>(parse_attack("average:5")).k, 5);
    const auto g = std::get<GaussianNoise>(parse_attack("gauss:10:42"));
    EXPECT_EQ(g.sigma, 10.0);
    EXPECT_EQ(g.seed, 42u);
    const auto r = std::get<Resize>(parse_attack("resize:512x384"));
    EXPECT_EQ(r.width, 512u);
    EXPECT_EQ(r.height, 384u);
    EXPECT_EQ(std::get<Rotate>(parse_attack("rotate:80")).degrees, 80.0);
    const auto c = std::get<Crop>(parse_attack("crop:1,2,30,40"));
    EXPECT_EQ(c.x, 1u);
    EXPECT_EQ(c.height, 40u);
}

TEST(ParseAttack, RejectsMalformed) {
    for (const char* bad : {"", "blur:3", "median", "median:4", "median:x", "gauss:10", "gauss:-1:3",
                            "resize:512", "resize:0x5", "rotate:", "crop:1,2,3", "none:1",
                            "median:3junk"}) {
        EXPECT_THROW(parse_attack(bad), std::invalid_argument) << bad;
    }
}

TEST(FormatAttack, RoundTrips) {
    for (const char* s : {"none", "median:3", "average:5", "gauss:10:42", "gauss:2.5:7",
                          "resize:512x512", "rotate:80", "rotate:-12.5", "crop:0,0,10,10"}) {
        EXPECT_EQ(format_attack(parse_attack(s)), s);
    }
}

TEST(MedianFilter, ConstantImageUnchanged) {
    const GrayImage img(9, 7, 42);
    EXPECT_EQ(median_filter(img, 3), img);
    EXPECT_EQ(median_filter(img, 5), img);
}

TEST(MedianFilter, CenterOfOneToNine) {
    const GrayImage img(3, 3, std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6, 7, 8, 9});
    EXPECT_EQ(median_filter(img, 3).at(1, 1), 5);
}

TEST(MedianFilter, RemovesIsolatedSpike) {
    GrayImage img(5, 5, 10);
    img.at(2, 2) = 250;
    EXPECT_EQ(median_filter(img, 3), GrayImage(5, 5, 10));
}

TEST(MedianFilter, RejectsEvenWindow) {
    EXPECT_THROW(median_filter(GrayImage(4, 4), 2), std::invalid_argument);
}

TEST(AverageFilter, MeanOfNeighbourhood) {
    const GrayImage img(3, 3, std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6, 7, 8, 9});
    EXPECT_EQ(average_filter(img, 3).at(1, 1), 5);
    // Edge replication: the corner window is {1,1,2,1,1,2,4,4,5}.
    EXPECT_EQ(average_filter(img, 3).at(0, 0), 2);
}

TEST(GaussianNoise, ZeroSigmaIsIdentity) {
    std::mt19937_64 rng(50);
    const auto img = oracle::random_image(rng, 16, 16);
    EXPECT_EQ(gaussian_noise(img, 0.0, 99), img);
}

TEST(GaussianNoise, ReproducibleForSeed) {
    const GrayImage img(32, 32, 128);
    EXPECT_EQ(gaussian_noise(img, 10, 42), gaussian_noise(img, 10, 42));
    EXPECT_NE(gaussian_noise(img, 10, 42), gaussian_noise(img, 10, 43));
}

TEST(GaussianNoise, EmpiricalMomentsOnMidGray) {
    const GrayImage img(128, 128, 128);
    const auto noisy = gaussian_noise(img, 10, 7);
    double sum = 0, sq = 0;
    for (auto p : noisy.pixels()) {
        sum += p - 128.0;
        sq += (p - 128.0) * (p - 128.0);
    }
    const double n = static_cast<double>(noisy.pixels().size());
    EXPECT_NEAR(sum / n, 0.0, 0.3);
    // Rounding adds variance 1/12.
    EXPECT_NEAR(std::sqrt(sq / n), std::sqrt(100.0 + 1.0 / 12.0), 0.3);
}

TEST(NormalStream, StandardMoments) {
    NormalStream s(1234);
    double sum = 0, sq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double v = s.next();
        sum += v;
        sq += v * v;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sq / n, 1.0, 0.01);
}

TEST(Resize, SameSizeIsIdentity) {
    std::mt19937_64 rng(51);
    const auto img = oracle::random_image(rng, 20, 12);
    EXPECT_EQ(resize_bilinear(img, 20, 12), img);
}

TEST(Resize, UpAndDownMatchesSeparableOracle) {
    std::mt19937_64 rng(52);
    const auto img = oracle::random_image(rng, 256, 256);
    const auto got = resize_bilinear(resize_bilinear(img, 512, 512), 256, 256);
    const auto up = oracle::round_to_image(oracle::separable_bilinear(img, 512, 512), 512, 512);
    const auto want = oracle::round_to_image(oracle::separable_bilinear(up, 256, 256), 256, 256);
    std::size_t exact = 0;
    int worst = 0;
    for (std::size_t i = 0; i < got.pixels().size(); ++i) {
        const int d = std::abs(int(got.pixels()[i]) - int(want.pixels()[i]));
        worst = std::max(worst, d);
        exact += d == 0;
    }
    EXPECT_LE(worst, 1);
    EXPECT_GE(static_cast<double>(exact) / static_cast<double>(got.pixels().size()), 0.999);
}

TEST(Resize, ApplyReturnsOriginalSize) {
    std::mt19937_64 rng(53);
    const auto img = oracle::random_image(rng, 30, 20);
    const auto out = dualmark::attacks::apply(img, Resize{45, 11});
    EXPECT_EQ(out.width(), 30u);
    EXPECT_EQ(out.height(), 20u);
}

TEST(Rotate, ZeroAndFullTurnAreIdentity) {
    std::mt19937_64 rng(54);
    const auto img = oracle::random_image(rng, 16, 16);
    EXPECT_EQ(rotate(img, 0.0), img);
    EXPECT_EQ(rotate(img, 360.0), img);
    EXPECT_EQ(rotate(img, -720.0), img);
}

TEST(Rotate, QuarterTurnIsCounterClockwise) {
    std::mt19937_64 rng(55);
    const auto img = oracle::random_image(rng, 8, 8);
    const auto out = rotate(img, 90.0);
    for (std::size_t y = 0; y < 8; ++y)
        for (std::size_t x = 0; x < 8; ++x) EXPECT_EQ(out.at(x, y), img.at(7 - y, x));
}

TEST(Rotate, HalfTurnReversesBothAxes) {
    std::mt19937_64 rng(56);
    const auto img = oracle::random_image(rng, 9, 5);
    const auto out = rotate(img, 180.0);
    for (std::size_t y = 0; y < 5; ++y)
        for (std::size_t x = 0; x < 9; ++x) EXPECT_EQ(out.at(x, y), img.at(8 - x, 4 - y));
}

TEST(Rotate, CornersAreZeroFilled) {
    const auto out = rotate(GrayImage(64, 64, 200), 45.0);
    EXPECT_EQ(out.at(0, 0), 0);
    EXPECT_EQ(out.at(63, 63), 0);
    EXPECT_EQ(out.at(32, 32), 200);
}

TEST(Crop, KeepsRectangleZerosRest) {
    const auto out = crop(GrayImage(10, 10, 9), Crop{2, 3, 4, 5});
    EXPECT_EQ(out.at(2, 3), 9);
    EXPECT_EQ(out.at(5, 7), 9);
    EXPECT_EQ(out.at(6, 7), 0);
    EXPECT_EQ(out.at(2, 8), 0);
    EXPECT_EQ(out.at(0, 0), 0);
}

TEST(Crop, OutOfBoundsThrows) {
    EXPECT_THROW(crop(GrayImage(10, 10), Crop{8, 0, 3, 1}), std::invalid_argument);
    EXPECT_THROW(crop(GrayImage(10, 10), Crop{0, 10, 1, 1}), std::invalid_argument);
}

TEST(Apply, AllVariantsPreserveSize) {
    std::mt19937_64 rng(57);
    const auto img = oracle::random_image(rng, 24, 16);
    for (const char* s : {"none", "median:3", "average:3", "gauss:10:42", "resize:48x32", "rotate:80",
                          "crop:1,1,5,5"}) {
        const auto out = dualmark::attacks::apply(img, parse_attack(s));
        EXPECT_EQ(out.width(), 24u) << s;
        EXPECT_EQ(out.height(), 16u) << s;
    }
    EXPECT_EQ(dualmark::attacks::apply(img, NoAttack{}), img);
}
