#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "s2c/geometry.hpp"

namespace s2c {

/// One range return. Coordinates are meters in the sensor frame; intensity
/// is the raw reflectance in [0, 1]. Stored as float32 to match the on-disk
/// record exactly.
struct Point {
    float x = 0.0f;
    float y = 0.0f;
    float z = 0.0f;
    float intensity = 0.0f;

    Vec3 position() const { return Vec3(x, y, z); }
};

struct PointCloud {
    std::vector<Point> points;

    bool empty() const { return points.empty(); }
    std::size_t size() const { return points.size(); }
};

/// Parses packed little-endian float32 (x, y, z, intensity) records.
/// Throws MalformedScanError unless the byte count is a multiple of 16.
/// Records containing non-finite values are dropped; *dropped (when given)
/// receives how many.
PointCloud read_velodyne_bin(std::span<const std::uint8_t> bytes, std::size_t* dropped = nullptr);

/// Inverse of read_velodyne_bin; byte-identical for clouds that came from a
/// well-formed scan.
std::vector<std::uint8_t> write_velodyne_bin(const PointCloud& cloud);

PointCloud load_velodyne_bin(const std::string& path, std::size_t* dropped = nullptr);
void save_velodyne_bin(const PointCloud& cloud, const std::string& path);

/// Assembles a CalibrationBundle from the KITTI calibration text files:
/// P_rect_0{camera_index} and R_rect_00 from the cam-to-cam file, R|T from
/// the velo-to-cam file. Throws ParseError on missing keys or wrong value
/// counts and InvalidCalibrationError when the parsed matrices violate the
/// bundle invariants.
CalibrationBundle parse_calibration(const std::string& cam_to_cam_text,
                                    const std::string& velo_to_cam_text,
                                    int camera_index);

/// Rectified image size S_rect_0{camera_index} when the cam-to-cam file
/// carries it: (width, height) in pixels.
std::optional<std::pair<int, int>> parse_rect_size(const std::string& cam_to_cam_text,
                                                   int camera_index);

/// Keeps exactly the points that project into [0,width) x [0,height) with
/// projective depth in (0, max_range].
PointCloud filter_to_frustum(const PointCloud& cloud, const CalibrationBundle& calib,
                             int width, int height, double max_range);

/// Rigidly maps the cloud into the rectified camera frame
/// (lift(r_rect) * t_range_cam applied to every point).
PointCloud to_camera_frame(const PointCloud& cloud, const CalibrationBundle& calib);

}  // namespace s2c
