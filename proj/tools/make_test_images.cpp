// Writes the synthetic host / primary / secondary triple used by the tests.
//
//   make_test_images <output-dir>
//
// Each image is a smooth gradient pattern plus seeded Gaussian noise
// (sigma 2), so the files are reproducible bit for bit.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>

#include "dualmark/attacks.hpp"
#include "dualmark/imageio.hpp"

namespace {

using dualmark::imageio::GrayImage;

constexpr double kNoiseSigma = 2.0;

template <typename Pattern>
GrayImage render(std::size_t n, std::uint64_t seed, Pattern pattern) {
    GrayImage img(n, n);
    dualmark::attacks::NormalStream noise(seed);
    for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t x = 0; x < n; ++x) {
            const double u = static_cast<double>(x) / static_cast<double>(n);
            const double v = static_cast<double>(y) / static_cast<double>(n);
            img.at(x, y) = dualmark::imageio::quantize(pattern(u, v) + kNoiseSigma * noise.next());
        }
    }
    return img;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_test_images <output-dir>\n";
        return 2;
    }
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);
    constexpr double pi = std::numbers::pi;

    const auto host = render(256, 1, [](double u, double v) {
        return 120.0 + 80.0 * u - 40.0 * v + 30.0 * std::sin(6.0 * pi * u * v);
    });
    const auto primary = render(128, 2, [](double u, double v) {
        return 128.0 + 70.0 * std::cos(4.0 * pi * u) * std::sin(3.0 * pi * v) + 30.0 * (u - v);
    });
    const auto secondary = render(64, 3, [](double u, double v) {
        const double r2 = (u - 0.5) * (u - 0.5) + (v - 0.5) * (v - 0.5);
        return 60.0 + (r2 < 0.1 ? 150.0 : 0.0) + 40.0 * u;
    });

    dualmark::imageio::write_pgm(host, dir / "host.pgm");
    dualmark::imageio::write_pgm(primary, dir / "primary.pgm");
    dualmark::imageio::write_pgm(secondary, dir / "secondary.pgm");
    std::cout << "wrote " << (dir / "host.pgm") << ", " << (dir / "primary.pgm") << ", "
              << (dir / "secondary.pgm") << "\n";
    return 0;
}
