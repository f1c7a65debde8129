#pragma once

#include <Eigen/Dense>
#include <optional>

#include "s2c/errors.hpp"

namespace s2c {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

/// Continuous image location plus the projective depth of the point that
/// produced it. depth is the third projected coordinate, in meters.
struct Pixel {
    double u = 0.0;
    double v = 0.0;
    double depth = 0.0;
};

/// Half-line in the rectified camera frame. direction is unit length.
struct Ray {
    Vec3 origin = Vec3::Zero();
    Vec3 direction = Vec3::UnitZ();
};

/// Rectified pinhole calibration: projection matrix, rectifying rotation and
/// the rigid transform taking range-sensor coordinates into the camera frame.
struct CalibrationBundle {
    Mat34 p_rect = Mat34::Zero();
    Mat3 r_rect = Mat3::Identity();
    Mat4 t_range_cam = Mat4::Identity();

    /// r_rect lifted to 4x4 and composed with t_range_cam; maps homogeneous
    /// range-sensor points into the rectified camera frame.
    Mat4 range_to_rect() const;

    /// Full 3x4 chain p_rect * lift(r_rect) * t_range_cam.
    Mat34 composite() const;

    static CalibrationBundle identity();
};

/// Checks the structural invariants (orthonormal r_rect, rigid bottom row,
/// nonzero focal entries). Throws InvalidCalibrationError.
void validate_calibration(const CalibrationBundle& calib);

/// Projects a homogeneous range-sensor point through the full calibration
/// chain. Returns nothing for points at or behind the camera plane
/// (third projected coordinate < 1e-9).
std::optional<Pixel> project_point(const Vec4& p, const CalibrationBundle& calib);

/// Projects a point already expressed in the rectified camera frame through
/// p_rect alone. Same behind-camera contract as project_point.
std::optional<Pixel> project_camera_point(const Vec3& x, const CalibrationBundle& calib);

/// Inverts the pinhole for one pixel: the returned ray, pushed forward by
/// project_camera_point, reproduces (u, v) for every positive ray parameter.
/// Throws InvalidCalibrationError if the intrinsic 3x3 block is singular.
Ray backproject_ray(double u, double v, const CalibrationBundle& calib);

/// Rescales the projection matrix for a resized image plane (sx = new_width /
/// old_width, sy likewise). Rays through scaled pixel coordinates are
/// unchanged.
CalibrationBundle scale_calibration(const CalibrationBundle& calib, double sx, double sy);

}  // namespace s2c
