#pragma once

#include <string>

#include "s2c/depth_image.hpp"

namespace s2c {

/// Depth PNG codec: 16-bit single-channel, stored value = round(depth * 256),
/// 0 = invalid.
inline constexpr double kDepthPngScale = 256.0;

/// Writes the KITTI-convention depth PNG. Valid depths must stay below
/// 65535/256 m (RangeError otherwise); valid pixels quantizing to 0 are
/// stored as 1 so the validity mask survives the round trip.
void write_depth_png(const DepthImage& image, const std::string& path);

/// Reads a depth PNG written by the codec above. Throws FormatError unless
/// the file is a 16-bit single-channel PNG.
DepthImage read_depth_png(const std::string& path);

/// Fraction of pixels carrying a valid depth.
double valid_fraction(const DepthImage& image);

/// 8-bit RGB visualization (near = warm, far = cold, invalid = black).
/// max_depth <= 0 autoscales to the image maximum.
void write_colormap_png(const DepthImage& image, const std::string& path, double max_depth = 0.0);

}  // namespace s2c
