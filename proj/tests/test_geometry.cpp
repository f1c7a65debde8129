#include <doctest.h>

#include <cmath>
#include <random>

#include "s2c/geometry.hpp"

using namespace s2c;

namespace {

/// Independent 3x4 * 4-vector multiply with plain loops.
void hand_project(const double m[3][4], const double p[4], double out[3]) {
    for (int row = 0; row < 3; ++row) {
        out[row] = 0.0;
        for (int col = 0; col < 4; ++col) out[row] += m[row][col] * p[col];
    }
}

CalibrationBundle kitti_like_calibration() {
    CalibrationBundle calib = CalibrationBundle::identity();
    calib.p_rect << 721.5, 0.0, 609.6, 44.9,
                    0.0, 721.5, 172.9, 0.2,
                    0.0, 0.0, 1.0, 0.003;
    return calib;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("optical axis point projects to the principal point") {
    const CalibrationBundle calib = CalibrationBundle::identity();
    const auto pixel = project_point(Vec4(0, 0, 5, 1), calib);
    REQUIRE(pixel.has_value());
    CHECK(pixel->u == doctest::Approx(0.0));
    CHECK(pixel->v == doctest::Approx(0.0));
    CHECK(pixel->depth == doctest::Approx(5.0));
}

TEST_CASE("point behind the camera is rejected") {
    const CalibrationBundle calib = CalibrationBundle::identity();
    CHECK_FALSE(project_point(Vec4(0, 0, -1, 1), calib).has_value());
    CHECK_FALSE(project_point(Vec4(0, 0, 0, 1), calib).has_value());
}

TEST_CASE("projection matches a hand matrix multiply") {
    CalibrationBundle calib = kitti_like_calibration();
    // Sensor x-forward mapped to camera z-forward.
    calib.t_range_cam << 0, -1, 0, 0,
                         0, 0, -1, 0,
                         1, 0, 0, 0,
                         0, 0, 0, 1;
    validate_calibration(calib);

    const Vec4 p(10.0, 0.0, 0.0, 1.0);
    const auto pixel = project_point(p, calib);
    REQUIRE(pixel.has_value());

    // Oracle: the rotation above takes p to (0, 0, 10, 1); push that through
    // p_rect with explicit loops.
    const double m[3][4] = {{721.5, 0.0, 609.6, 44.9},
                            {0.0, 721.5, 172.9, 0.2},
                            {0.0, 0.0, 1.0, 0.003}};
    const double cam_point[4] = {0.0, 0.0, 10.0, 1.0};
    double uvw[3];
    hand_project(m, cam_point, uvw);
    CHECK(pixel->u == doctest::Approx(uvw[0] / uvw[2]).epsilon(1e-12));
    CHECK(pixel->v == doctest::Approx(uvw[1] / uvw[2]).epsilon(1e-12));
    CHECK(pixel->depth == doctest::Approx(uvw[2]).epsilon(1e-12));
}

TEST_CASE("projection is invariant to positive homogeneous rescale") {
    const CalibrationBundle calib = kitti_like_calibration();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    std::uniform_real_distribution<double> depth(1.0, 60.0);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int i = 0; i < 50; ++i) {
        const Vec4 p(coord(rng), coord(rng), depth(rng), 1.0);
        Vec4 rescaled = p * scale(rng);
        rescaled /= rescaled.w();  // renormalized homogeneous-1 form
        const auto a = project_point(p, calib);
        const auto b = project_point(rescaled, calib);
        REQUIRE(a.has_value());
        REQUIRE(b.has_value());
        CHECK(a->u == doctest::Approx(b->u).epsilon(1e-12));
        CHECK(a->v == doctest::Approx(b->v).epsilon(1e-12));
    }
}

TEST_CASE("principal pixel backprojects to the optical axis") {
    const CalibrationBundle calib = CalibrationBundle::identity();
    const Ray ray = backproject_ray(0.0, 0.0, calib);
    CHECK(ray.origin.norm() == doctest::Approx(0.0));
    CHECK((ray.direction - Vec3(0, 0, 1)).norm() == doctest::Approx(0.0));
}

TEST_CASE("backprojected direction matches the pinhole inverse by hand") {
    CalibrationBundle calib = CalibrationBundle::identity();
    calib.p_rect << 721.5, 0.0, 609.6, 0.0,
                    0.0, 721.5, 172.9, 0.0,
                    0.0, 0.0, 1.0, 0.0;
    const double u = 800.0, v = 300.0;
    const Ray ray = backproject_ray(u, v, calib);
    const Vec3 expected = Vec3((u - 609.6) / 721.5, (v - 172.9) / 721.5, 1.0).normalized();
    CHECK((ray.direction - expected).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("project/backproject round trip over the image and depth range") {
    const CalibrationBundle calib = kitti_like_calibration();
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> du(0.0, 1242.0);
    std::uniform_real_distribution<double> dv(0.0, 375.0);
    std::uniform_real_distribution<double> dt(0.1, 100.0);
    for (int i = 0; i < 200; ++i) {
        const double u = du(rng), v = dv(rng), t = dt(rng);
        const Ray ray = backproject_ray(u, v, calib);
        const auto pixel = project_camera_point(ray.origin + t * ray.direction, calib);
        REQUIRE(pixel.has_value());
        CHECK(std::abs(pixel->u - u) < 1e-6);
        CHECK(std::abs(pixel->v - v) < 1e-6);
    }
}

TEST_CASE("fixed-parameter round trip") {
    const CalibrationBundle calib = kitti_like_calibration();
    const Ray ray = backproject_ray(100.25, 200.75, calib);
    const auto pixel = project_camera_point(ray.origin + 7.3 * ray.direction, calib);
    REQUIRE(pixel.has_value());
    CHECK(std::abs(pixel->u - 100.25) < 1e-6);
    CHECK(std::abs(pixel->v - 200.75) < 1e-6);
}

TEST_CASE("singular intrinsics raise invalid-calibration") {
    CalibrationBundle calib;
    calib.p_rect.setZero();
    CHECK_THROWS_AS(backproject_ray(0, 0, calib), InvalidCalibrationError);
}

TEST_CASE("validate_calibration rejects broken bundles") {
    CalibrationBundle calib = kitti_like_calibration();
    SUBCASE("valid passes") { CHECK_NOTHROW(validate_calibration(calib)); }
    SUBCASE("non-orthonormal rotation") {
        calib.r_rect(0, 0) = 2.0;
        CHECK_THROWS_AS(validate_calibration(calib), InvalidCalibrationError);
    }
    SUBCASE("bad rigid bottom row") {
        calib.t_range_cam(3, 0) = 0.5;
        CHECK_THROWS_AS(validate_calibration(calib), InvalidCalibrationError);
    }
    SUBCASE("zero focal") {
        calib.p_rect(0, 0) = 0.0;
        CHECK_THROWS_AS(validate_calibration(calib), InvalidCalibrationError);
    }
}

TEST_CASE("scaled calibration rescales pixel coordinates") {
    const CalibrationBundle calib = kitti_like_calibration();
    const CalibrationBundle half = scale_calibration(calib, 0.5, 0.5);
    const Vec3 x(1.0, 2.0, 20.0);
    const auto full_pixel = project_camera_point(x, calib);
    const auto half_pixel = project_camera_point(x, half);
    REQUIRE(full_pixel.has_value());
    REQUIRE(half_pixel.has_value());
    CHECK(half_pixel->u == doctest::Approx(full_pixel->u * 0.5).epsilon(1e-12));
    CHECK(half_pixel->v == doctest::Approx(full_pixel->v * 0.5).epsilon(1e-12));
    CHECK(half_pixel->depth == doctest::Approx(full_pixel->depth).epsilon(1e-12));
}

}  // TEST_SUITE
