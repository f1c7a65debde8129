#include "s2c/geometry.hpp"

#include <cmath>

namespace s2c {

namespace {
constexpr double kBehindCameraEps = 1e-9;
}

Mat4 CalibrationBundle::range_to_rect() const {
    Mat4 r4 = Mat4::Identity();
    r4.topLeftCorner<3, 3>() = r_rect;
    return r4 * t_range_cam;
}

Mat34 CalibrationBundle::composite() const {
    return p_rect * range_to_rect();
}

CalibrationBundle CalibrationBundle::identity() {
    CalibrationBundle calib;
    calib.p_rect.topLeftCorner<3, 3>() = Mat3::Identity();
    return calib;
}

void validate_calibration(const CalibrationBundle& calib) {
    const Mat3 gram = calib.r_rect.transpose() * calib.r_rect;
    if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-6) {
        throw InvalidCalibrationError("r_rect is not orthonormal");
    }
    const Eigen::RowVector4d bottom = calib.t_range_cam.row(3);
    if ((bottom - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() > 1e-9) {
        throw InvalidCalibrationError("t_range_cam bottom row is not (0,0,0,1)");
    }
    if (calib.p_rect(0, 0) == 0.0 || calib.p_rect(1, 1) == 0.0) {
        throw InvalidCalibrationError("p_rect has a zero focal entry");
    }
}

std::optional<Pixel> project_point(const Vec4& p, const CalibrationBundle& calib) {
    const Vec3 uvw = calib.composite() * p;
    if (uvw.z() < kBehindCameraEps) return std::nullopt;
    return Pixel{uvw.x() / uvw.z(), uvw.y() / uvw.z(), uvw.z()};
}

std::optional<Pixel> project_camera_point(const Vec3& x, const CalibrationBundle& calib) {
    const Vec3 uvw = calib.p_rect * x.homogeneous();
    if (uvw.z() < kBehindCameraEps) return std::nullopt;
    return Pixel{uvw.x() / uvw.z(), uvw.y() / uvw.z(), uvw.z()};
}

Ray backproject_ray(double u, double v, const CalibrationBundle& calib) {
    const Mat3 intrinsic = calib.p_rect.leftCols<3>();
    if (std::abs(intrinsic.determinant()) < 1e-12) {
        throw InvalidCalibrationError("intrinsic 3x3 block is singular");
    }
    const Mat3 inv = intrinsic.inverse();
    Ray ray;
    ray.origin = -inv * calib.p_rect.col(3);
    ray.direction = (inv * Vec3(u, v, 1.0)).normalized();
    return ray;
}

CalibrationBundle scale_calibration(const CalibrationBundle& calib, double sx, double sy) {
    CalibrationBundle scaled = calib;
    scaled.p_rect.row(0) *= sx;
    scaled.p_rect.row(1) *= sy;
    return scaled;
}

}  // namespace s2c
