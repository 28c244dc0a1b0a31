#include "dualmark/chaos_cipher.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "dualmark/errors.hpp"

namespace dualmark::chaos {

namespace {

std::string shortest(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::logic_error("to_chars failed");
    return std::string(buf.data(), end);
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

void validate(const ChaosKey& key) {
    if (!(key.b >= kChaoticMin && key.b <= kChaoticMax)) {
        throw std::invalid_argument("b must lie in [3.57, 4.0] (got " + shortest(key.b) + ")");
    }
    if (!(key.x0 > 0.0 && key.x0 < 1.0)) {
        throw std::invalid_argument("x0 must lie in (0, 1) (got " + shortest(key.x0) + ")");
    }
}

double logistic_next(double x, double r) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("logistic_next: x outside [0, 1]");
    if (!(r >= 0.0 && r <= 4.0)) throw std::invalid_argument("logistic_next: r outside [0, 4]");
    return r * x * (1.0 - x);
}

SecondMap derive_second_map(const ChaosKey& key) {
    validate(key);
    double h = key.x0;
    for (unsigned i = 0; i <= key.warmup; ++i) h = logistic_next(h, key.b);
    const double r2 = std::min(kChaoticMax, kChaoticMin + 0.43 * h);
    return SecondMap{r2, logistic_next(h, r2)};
}

std::uint8_t real_to_byte(double x) {
    if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("real_to_byte: x outside [0, 1)");
    // Scaling by a power of two is exact, so the floor is exactly b1..b16.
    const auto bits = static_cast<std::uint32_t>(std::floor(std::ldexp(x, 16)));
    return static_cast<std::uint8_t>((bits >> 8) ^ (bits & 0xFFu));
}

Keystream::Keystream(const ChaosKey& key) {
    const SecondMap m = derive_second_map(key);
    r_ = m.r;
    x_ = m.x;
}

std::uint8_t Keystream::next() {
    const double prev = x_;
    x_ = logistic_next(x_, r_);
    if (x_ == 0.0 || x_ >= 1.0) {
        throw DegenerateKeyError("keystream orbit collapsed to 0; choose a different key");
    }
    stalled_ = (x_ == prev) ? stalled_ + 1 : 0;
    if (stalled_ > kMaxStall) {
        throw DegenerateKeyError("keystream orbit stalled on a fixed point; choose a different key");
    }
    return real_to_byte(x_);
}

std::vector<std::uint8_t> keystream_bytes(const ChaosKey& key, std::size_t n) {
    std::vector<std::uint8_t> out;
    if (n == 0) {
        validate(key);
        return out;
    }
    Keystream ks(key);
    out.resize(n);
    for (auto& byte : out) byte = ks.next();
    return out;
}

imageio::GrayImage xor_cipher(const imageio::GrayImage& img, const ChaosKey& key) {
    imageio::GrayImage out = img;
    Keystream ks(key);
    for (auto& px : out.pixels()) px = static_cast<std::uint8_t>(px ^ ks.next());
    return out;
}

std::string format_key(const ChaosKey& key) {
    return "b=" + shortest(key.b) + "\nx0=" + shortest(key.x0) + "\nwarmup=" +
           std::to_string(key.warmup) + "\n";
}

ChaosKey parse_key(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool have_b = false;
    bool have_x0 = false;
    bool have_warmup = false;
    ChaosKey key{0.0, 0.0, kDefaultWarmup};
    std::size_t offset = 0;
    while (std::getline(in, line)) {
        const std::size_t line_offset = offset;
        offset += line.size() + 1;
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError("key file: expected name=value", line_offset);
        const std::string name = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const char* first = value.data();
        const char* last = value.data() + value.size();
        if (name == "b" || name == "x0") {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc{} || ptr != last) {
                throw FormatError("key file: bad decimal for " + name, line_offset);
            }
            (name == "b" ? key.b : key.x0) = v;
            (name == "b" ? have_b : have_x0) = true;
        } else if (name == "warmup") {
            unsigned v = 0;
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc{} || ptr != last) {
                throw FormatError("key file: bad integer for warmup", line_offset);
            }
            key.warmup = v;
            have_warmup = true;
        } else {
            throw FormatError("key file: unknown field '" + name + "'", line_offset);
        }
    }
    if (!have_b || !have_x0 || !have_warmup) {
        throw FormatError("key file: requires b, x0 and warmup", offset);
    }
    validate(key);
    return key;
}

ChaosKey read_key(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open key file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_key(buf.str());
}

void write_key(const ChaosKey& key, const std::filesystem::path& path) {
    validate(key);
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << format_key(key);
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace dualmark::chaos
