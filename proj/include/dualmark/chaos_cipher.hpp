#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dualmark/imageio.hpp"

namespace dualmark::chaos {

inline constexpr double kChaoticMin = 3.57;
inline constexpr double kChaoticMax = 4.0;
inline constexpr unsigned kDefaultWarmup = 100;

/// Secret key of the coupled logistic-map keystream generator.
struct ChaosKey {
    double b;         ///< control parameter of the first map, in [3.57, 4]
    double x0;        ///< initial state, in (0, 1)
    unsigned warmup;  ///< first-map iterations before the hash value is taken

    friend bool operator==(const ChaosKey&, const ChaosKey&) = default;
};

/// Throws std::invalid_argument when b is outside the chaotic band or x0 outside (0, 1).
void validate(const ChaosKey& key);

/// r * x * (1 - x). Requires x in [0, 1] and r in [0, 4].
double logistic_next(double x, double r);

struct SecondMap {
    double r;
    double x;
};

/// Iterates the first map warmup + 1 times from x0 to get the hash value h,
/// then r2 = 3.57 + 0.43 h and x2 = logistic_next(h, r2).
SecondMap derive_second_map(const ChaosKey& key);

/// First 16 fractional bits b1..b16 of x; returns (b1..b8) XOR (b9..b16).
/// Requires x in [0, 1).
std::uint8_t real_to_byte(double x);

/// Byte generator over the second logistic map. Each next() advances the map
/// once and emits real_to_byte of the new state.
class Keystream {
public:
    explicit Keystream(const ChaosKey& key);

    std::uint8_t next();

private:
    static constexpr int kMaxStall = 16;

    double r_;
    double x_;
    int stalled_ = 0;
};

/// Throws DegenerateKeyError if the orbit hits 0 or stalls on a fixed point
/// for more than 16 consecutive steps.
std::vector<std::uint8_t> keystream_bytes(const ChaosKey& key, std::size_t n);

/// XOR of each pixel (row-major) with the keystream. Applying it twice with
/// the same key restores the input.
imageio::GrayImage xor_cipher(const imageio::GrayImage& img, const ChaosKey& key);

/// Three lines: b=<decimal>, x0=<decimal>, warmup=<integer>.
std::string format_key(const ChaosKey& key);
ChaosKey parse_key(const std::string& text);
ChaosKey read_key(const std::filesystem::path& path);
void write_key(const ChaosKey& key, const std::filesystem::path& path);

}  // namespace dualmark::chaos
