#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "s2c/errors.hpp"
#include "s2c/io_depth.hpp"

using namespace s2c;

namespace {

std::filesystem::path temp_png(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_SUITE("io_depth") {

TEST_CASE("all-invalid image round trips to all-invalid") {
    const auto path = temp_png("s2c_invalid.png");
    const DepthImage image(6, 4);
    write_depth_png(image, path.string());
    const DepthImage loaded = read_depth_png(path.string());
    std::filesystem::remove(path);
    REQUIRE(loaded.width == 6);
    REQUIRE(loaded.height == 4);
    for (const double v : loaded.values) CHECK(v == 0.0);
    CHECK(valid_fraction(loaded) == 0.0);
}

TEST_CASE("depth of one meter stores the codec value 256") {
    const auto path = temp_png("s2c_one_meter.png");
    DepthImage image(1, 1);
    image.values[0] = 1.0;
    write_depth_png(image, path.string());
    const DepthImage loaded = read_depth_png(path.string());
    std::filesystem::remove(path);
    CHECK(loaded.values[0] == doctest::Approx(256.0 / 256.0));
    CHECK(loaded.values[0] * kDepthPngScale == 256.0);
}

TEST_CASE("random images round trip within the quantization bound") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> depth(0.01, 250.0);
    std::bernoulli_distribution drop(0.3);
    const auto path = temp_png("s2c_roundtrip.png");
    for (int trial = 0; trial < 5; ++trial) {
        DepthImage image(23, 17);
        for (double& v : image.values) v = drop(rng) ? 0.0 : depth(rng);
        write_depth_png(image, path.string());
        const DepthImage loaded = read_depth_png(path.string());
        REQUIRE(loaded.pixel_count() == image.pixel_count());
        for (std::size_t i = 0; i < image.pixel_count(); ++i) {
            const bool was_valid = image.values[i] > 0.0;
            CHECK((loaded.values[i] > 0.0) == was_valid);  // mask preserved exactly
            if (was_valid) {
                CHECK(std::abs(loaded.values[i] - image.values[i]) <= 1.0 / 512.0);
            }
        }
    }
    std::filesystem::remove(path);
}

TEST_CASE("depth beyond the 16-bit range raises") {
    DepthImage image(1, 1);
    image.values[0] = 65535.0 / 256.0 + 1.0;
    CHECK_THROWS_AS(write_depth_png(image, temp_png("s2c_overflow.png").string()), RangeError);
}

TEST_CASE("non-png and wrong-format files are rejected") {
    const auto text_path = temp_png("s2c_not_a_png.png");
    {
        std::ofstream out(text_path);
        out << "definitely not a png";
    }
    CHECK_THROWS_AS(read_depth_png(text_path.string()), FormatError);
    std::filesystem::remove(text_path);

    // An 8-bit RGB PNG exists but is not a depth container.
    const auto rgb_path = temp_png("s2c_rgb.png");
    DepthImage image(4, 4);
    for (double& v : image.values) v = 2.0;
    write_colormap_png(image, rgb_path.string());
    CHECK_THROWS_AS(read_depth_png(rgb_path.string()), FormatError);
    std::filesystem::remove(rgb_path);

    CHECK_THROWS_AS(read_depth_png("/nonexistent/depth.png"), IoError);
}

TEST_CASE("valid fraction counts valid pixels") {
    DepthImage image(2, 2);
    CHECK(valid_fraction(image) == 0.0);
    image.values[0] = 5.0;
    image.values[3] = 1.0;
    CHECK(valid_fraction(image) == doctest::Approx(0.5));
}

TEST_CASE("tiny positive depths keep their validity through the codec") {
    const auto path = temp_png("s2c_tiny.png");
    DepthImage image(1, 1);
    image.values[0] = 1e-4;  // quantizes to 0 but must stay valid
    write_depth_png(image, path.string());
    const DepthImage loaded = read_depth_png(path.string());
    std::filesystem::remove(path);
    CHECK(loaded.values[0] > 0.0);
}

}  // TEST_SUITE
