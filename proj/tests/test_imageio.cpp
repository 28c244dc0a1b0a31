#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <string>

#include "dualmark/errors.hpp"
#include "dualmark/imageio.hpp"
#include "oracles.hpp"

using namespace dualmark::imageio;
using dualmark::FormatError;
using dualmark::linalg::Matrix;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

std::size_t offset_of_failure(const std::string& s) {
    try {
        parse_pgm(bytes_of(s));
    } catch (const FormatError& e) {
        return e.offset();
    }
    ADD_FAILURE() << "no FormatError";
    return 0;
}

}  // namespace

TEST(GrayImage, ConstructionChecks) {
    EXPECT_THROW(GrayImage(0, 4), std::invalid_argument);
    EXPECT_THROW(GrayImage(2, 2, std::vector<std::uint8_t>(3)), std::invalid_argument);
    GrayImage img(3, 2, 9);
    EXPECT_EQ(img.pixels().size(), 6u);
    EXPECT_EQ(img.at(2, 1), 9);
}

TEST(ToMatrix, SinglePixel) {
    EXPECT_EQ(to_matrix(GrayImage(1, 1, std::vector<std::uint8_t>{7})), Matrix(1, 1, {7.0}));
}

TEST(ToMatrix, RowsAreImageRows) {
    const GrayImage img(2, 2, std::vector<std::uint8_t>{0, 255, 128, 64});
    EXPECT_EQ(to_matrix(img), Matrix(2, 2, {0, 255, 128, 64}));
    const GrayImage wide(3, 1, std::vector<std::uint8_t>{1, 2, 3});
    EXPECT_EQ(to_matrix(wide).rows(), 1u);
    EXPECT_EQ(to_matrix(wide).cols(), 3u);
}

TEST(Quantize, ClampAndRoundHalfAway) {
    EXPECT_EQ(quantize(255.7), 255);
    EXPECT_EQ(quantize(-3.2), 0);
    EXPECT_EQ(quantize(127.5), 128);
    EXPECT_EQ(quantize(126.5), 127);
    EXPECT_EQ(quantize(-0.4), 0);
    EXPECT_EQ(quantize(1e300), 255);
}

TEST(FromMatrix, InverseOfToMatrix) {
    std::mt19937_64 rng(30);
    const GrayImage img = oracle::random_image(rng, 19, 11);
    EXPECT_EQ(from_matrix(to_matrix(img)), img);
}

TEST(Pgm, HeaderOnOneLine) {
    std::string s = "P5 2 2 255 ";
    s += std::string{'\x01', '\x02', '\x03', '\x04'};
    const GrayImage img = parse_pgm(bytes_of(s));
    EXPECT_EQ(img.width(), 2u);
    EXPECT_EQ(img.height(), 2u);
    EXPECT_EQ(img.at(1, 1), 4);
}

TEST(Pgm, CommentsBetweenTokens) {
    std::string s = "P5\n# made by hand\n3 # width\n1\n255\n";
    s += std::string{'\x0a', '\x20', '\xff'};
    const GrayImage img = parse_pgm(bytes_of(s));
    EXPECT_EQ(img.width(), 3u);
    // The single whitespace byte after maxval is consumed; 0x0a is pixel data.
    EXPECT_EQ(img.at(0, 0), 0x0a);
    EXPECT_EQ(img.at(2, 0), 0xff);
}

TEST(Pgm, RejectsSixteenBit) {
    std::string s = "P5\n2 2\n65535\n" + std::string(8, '\0');
    EXPECT_THROW(parse_pgm(bytes_of(s)), FormatError);
}

TEST(Pgm, RejectsWrongMagic) {
    EXPECT_EQ(offset_of_failure("P2\n1 1\n255\n0"), 0u);
    EXPECT_EQ(offset_of_failure("P6\n1 1\n255\nabc"), 0u);
}

TEST(Pgm, TruncatedRasterReportsWhereDataEnds) {
    const std::string s = "P5\n4 4\n255\n" + std::string(10, 'x');
    EXPECT_EQ(offset_of_failure(s), 21u);
}

TEST(Pgm, MalformedHeaderFields) {
    EXPECT_THROW(parse_pgm(bytes_of("P5\nx 2\n255\n")), FormatError);
    EXPECT_THROW(parse_pgm(bytes_of("P5\n0 2\n255\n")), FormatError);
    EXPECT_THROW(parse_pgm(bytes_of("P5\n2 2\n255")), FormatError);
    EXPECT_THROW(parse_pgm(bytes_of("")), FormatError);
}

TEST(Pgm, EncodeHeader) {
    const auto bytes = encode_pgm(GrayImage(3, 2, 7));
    const std::string head(bytes.begin(), bytes.begin() + 11);
    EXPECT_EQ(head, "P5\n3 2\n255\n");
    EXPECT_EQ(bytes.size(), 11u + 6u);
}

TEST(Pgm, RoundTripRandomImages) {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::size_t> dim(1, 70);
    for (int i = 0; i < 25; ++i) {
        const GrayImage img = oracle::random_image(rng, dim(rng), dim(rng));
        EXPECT_EQ(parse_pgm(encode_pgm(img)), img);
    }
}

TEST(Pgm, FileRoundTripAndMissingFile) {
    std::mt19937_64 rng(32);
    const GrayImage img = oracle::random_image(rng, 12, 9);
    const auto path = std::filesystem::temp_directory_path() / "dualmark_io_roundtrip.pgm";
    write_pgm(img, path);
    EXPECT_EQ(read_pgm(path), img);
    std::filesystem::remove(path);
    EXPECT_THROW(read_pgm(path), std::runtime_error);
}
