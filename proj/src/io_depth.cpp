#include "s2c/io_depth.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

#include "s2c/errors.hpp"

namespace s2c {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FileHandle = std::unique_ptr<std::FILE, FileCloser>;

void encode_png_gray16(const std::vector<std::uint16_t>& pixels, int width, int height,
                       const std::string& path) {
    FileHandle file(std::fopen(path.c_str(), "wb"));
    if (!file) throw IoError("cannot open " + path + " for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png writer allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png info allocation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png write failed for " + path);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 16,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_set_swap(png);  // host little-endian rows -> network order

    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        rows[y] = reinterpret_cast<png_bytep>(
            const_cast<std::uint16_t*>(pixels.data() + static_cast<std::size_t>(y) * width));
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void encode_png_rgb8(const std::vector<std::uint8_t>& pixels, int width, int height,
                     const std::string& path) {
    FileHandle file(std::fopen(path.c_str(), "wb"));
    if (!file) throw IoError("cannot open " + path + " for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png writer allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png info allocation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png write failed for " + path);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        rows[y] = const_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(y) * width * 3);
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_depth_png(const DepthImage& image, const std::string& path) {
    std::vector<std::uint16_t> pixels(image.pixel_count(), 0);
    for (std::size_t i = 0; i < image.pixel_count(); ++i) {
        const double depth = image.values[i];
        if (depth <= 0.0) continue;
        const double scaled = std::round(depth * kDepthPngScale);
        if (scaled > 65535.0) {
            throw RangeError("depth " + std::to_string(depth) + " m exceeds the 16-bit codec");
        }
        pixels[i] = static_cast<std::uint16_t>(std::max(scaled, 1.0));
    }
    encode_png_gray16(pixels, image.width, image.height, path);
}

DepthImage read_depth_png(const std::string& path) {
    FileHandle file(std::fopen(path.c_str(), "rb"));
    if (!file) throw IoError("cannot open " + path);

    png_byte header[8];
    if (std::fread(header, 1, 8, file.get()) != 8 || png_sig_cmp(header, 0, 8) != 0) {
        throw FormatError(path + " is not a PNG file");
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png reader allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png info allocation failed");
    }

    int width = 0, height = 0, bit_depth = 0, color_type = -1;
    std::vector<std::uint16_t> pixels;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("png decode failed for " + path);
    }
    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);
    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    bit_depth = png_get_bit_depth(png, info);
    color_type = png_get_color_type(png, info);
    if (bit_depth != 16 || color_type != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError(path + ": expected 16-bit single-channel PNG, got bit depth " +
                          std::to_string(bit_depth) + ", color type " +
                          std::to_string(color_type));
    }
    png_set_swap(png);
    pixels.resize(static_cast<std::size_t>(width) * height);
    rows.resize(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        rows[y] =
            reinterpret_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(y) * width);
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    DepthImage image(width, height);
    for (std::size_t i = 0; i < image.pixel_count(); ++i) {
        image.values[i] = pixels[i] == 0 ? DepthImage::kInvalid : pixels[i] / kDepthPngScale;
    }
    return image;
}

double valid_fraction(const DepthImage& image) {
    if (image.pixel_count() == 0) return 0.0;
    std::size_t valid = 0;
    for (const double v : image.values) valid += v > 0.0;
    return static_cast<double>(valid) / static_cast<double>(image.pixel_count());
}

void write_colormap_png(const DepthImage& image, const std::string& path, double max_depth) {
    if (max_depth <= 0.0) {
        for (const double v : image.values) max_depth = std::max(max_depth, v);
        if (max_depth <= 0.0) max_depth = 1.0;
    }
    std::vector<std::uint8_t> rgb(image.pixel_count() * 3, 0);
    for (std::size_t i = 0; i < image.pixel_count(); ++i) {
        const double depth = image.values[i];
        if (depth <= 0.0) continue;
        // Four-stop blue->cyan->yellow->red ramp, warm = near.
        const double t = 1.0 - std::clamp(depth / max_depth, 0.0, 1.0);
        double r = 0.0, g = 0.0, b = 0.0;
        if (t < 1.0 / 3) {
            b = 1.0 - 3.0 * t;
            g = 3.0 * t;
            b = std::max(b, 0.3);
        } else if (t < 2.0 / 3) {
            g = 1.0;
            r = 3.0 * t - 1.0;
        } else {
            r = 1.0;
            g = 3.0 - 3.0 * t;
        }
        rgb[i * 3 + 0] = static_cast<std::uint8_t>(std::lround(255.0 * r));
        rgb[i * 3 + 1] = static_cast<std::uint8_t>(std::lround(255.0 * g));
        rgb[i * 3 + 2] = static_cast<std::uint8_t>(std::lround(255.0 * b));
    }
    encode_png_rgb8(rgb, image.width, image.height, path);
}

}  // namespace s2c
