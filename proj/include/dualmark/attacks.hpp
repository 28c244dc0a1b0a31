#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>

#include "dualmark/imageio.hpp"

namespace dualmark::attacks {

struct NoAttack {};
struct MedianFilter { int k; };
struct AverageFilter { int k; };
struct GaussianNoise { double sigma; std::uint64_t seed; };
/// Bilinear resize to (width, height) and back to the original size.
struct Resize { std::size_t width; std::size_t height; };
/// Counter-clockwise (as displayed) about the image center, zero fill.
struct Rotate { double degrees; };
/// Keeps the rectangle, zeros everything else; canvas size unchanged.
struct Crop { std::size_t x; std::size_t y; std::size_t width; std::size_t height; };

using AttackSpec =
    std::variant<NoAttack, MedianFilter, AverageFilter, GaussianNoise, Resize, Rotate, Crop>;

/// Parses `none`, `median:K`, `average:K`, `gauss:SIGMA:SEED`, `resize:WxH`,
/// `rotate:DEG`, `crop:X,Y,W,H`. Throws std::invalid_argument on anything else.
AttackSpec parse_attack(std::string_view text);
std::string format_attack(const AttackSpec& spec);

/// Applies the attack; the output always has the input's dimensions.
imageio::GrayImage apply(const imageio::GrayImage& img, const AttackSpec& spec);

imageio::GrayImage median_filter(const imageio::GrayImage& img, int k);
imageio::GrayImage average_filter(const imageio::GrayImage& img, int k);
imageio::GrayImage gaussian_noise(const imageio::GrayImage& img, double sigma, std::uint64_t seed);
/// Half-pixel-center bilinear resampling with edge clamping.
imageio::GrayImage resize_bilinear(const imageio::GrayImage& img, std::size_t width,
                                   std::size_t height);
imageio::GrayImage rotate(const imageio::GrayImage& img, double degrees);
imageio::GrayImage crop(const imageio::GrayImage& img, const Crop& rect);

/// Standard normal pairs from a seeded mt19937_64 via Box-Muller:
/// u = (next() >> 11) * 2^-53, r = sqrt(-2 ln(1 - u1)), (r cos 2πu2, r sin 2πu2).
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed);
    double next();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace dualmark::attacks
