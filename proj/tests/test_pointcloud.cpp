#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "s2c/pointcloud.hpp"

using namespace s2c;

namespace {

/// Independent float32 little-endian encoder: bit patterns pushed byte by
/// byte, never via the writer under test.
void push_le(std::uint32_t bits, std::vector<std::uint8_t>& out) {
    out.push_back(bits & 0xff);
    out.push_back((bits >> 8) & 0xff);
    out.push_back((bits >> 16) & 0xff);
    out.push_back((bits >> 24) & 0xff);
}

const std::string kIdentityCamText =
    "P_rect_02: 1 0 0 0 0 1 0 0 0 0 1 0\n"
    "R_rect_00: 1 0 0 0 1 0 0 0 1\n";
const std::string kIdentityVeloText =
    "R: 1 0 0 0 1 0 0 0 1\n"
    "T: 0 0 0\n";

std::string format_matrix(const double* values, int count) {
    std::ostringstream out;
    out.precision(17);
    for (int i = 0; i < count; ++i) out << (i ? " " : "") << values[i];
    return out.str();
}

}  // namespace

TEST_SUITE("pointcloud") {

TEST_CASE("empty byte stream parses to an empty cloud") {
    const PointCloud cloud = read_velodyne_bin({});
    CHECK(cloud.empty());
}

TEST_CASE("single record decodes the hand-encoded floats") {
    // 1.0f = 0x3f800000, 2.0f = 0x40000000, 3.0f = 0x40400000,
    // 0.5f = 0x3f000000.
    std::vector<std::uint8_t> bytes;
    push_le(0x3f800000u, bytes);
    push_le(0x40000000u, bytes);
    push_le(0x40400000u, bytes);
    push_le(0x3f000000u, bytes);
    const PointCloud cloud = read_velodyne_bin(bytes);
    REQUIRE(cloud.size() == 1);
    CHECK(cloud.points[0].x == 1.0f);
    CHECK(cloud.points[0].y == 2.0f);
    CHECK(cloud.points[0].z == 3.0f);
    CHECK(cloud.points[0].intensity == 0.5f);
}

TEST_CASE("truncated byte stream raises malformed-scan") {
    const std::vector<std::uint8_t> bytes(15, 0);
    CHECK_THROWS_AS(read_velodyne_bin(bytes), MalformedScanError);
}

TEST_CASE("non-finite records are dropped and counted") {
    std::vector<std::uint8_t> bytes;
    push_le(0x3f800000u, bytes);  // 1.0
    push_le(0x7fc00000u, bytes);  // quiet NaN
    push_le(0x3f800000u, bytes);
    push_le(0x00000000u, bytes);
    push_le(0x40000000u, bytes);  // clean record
    push_le(0x40000000u, bytes);
    push_le(0x40000000u, bytes);
    push_le(0x00000000u, bytes);
    std::size_t dropped = 0;
    const PointCloud cloud = read_velodyne_bin(bytes, &dropped);
    CHECK(cloud.size() == 1);
    CHECK(dropped == 1);
}

TEST_CASE("parse then serialize is byte-identical") {
    std::vector<std::uint8_t> bytes;
    const float values[] = {1.5f, -2.25f, 3.14159f, 0.1f, 100.0f, -0.0f, 7.25f, 0.9f};
    for (const float f : values) {
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        push_le(bits, bytes);
    }
    const PointCloud cloud = read_velodyne_bin(bytes);
    CHECK(write_velodyne_bin(cloud) == bytes);
}

TEST_CASE("identity calibration text parses to identity matrices") {
    const CalibrationBundle calib = parse_calibration(kIdentityCamText, kIdentityVeloText, 2);
    Mat34 identity34 = Mat34::Zero();
    identity34.topLeftCorner<3, 3>() = Mat3::Identity();
    CHECK((calib.p_rect - identity34).cwiseAbs().maxCoeff() == 0.0);
    CHECK(calib.r_rect.isIdentity(0.0));
    CHECK(calib.t_range_cam.isIdentity(0.0));
}

TEST_CASE("missing or short keys raise parse errors that name the key") {
    try {
        parse_calibration("R_rect_00: 1 0 0 0 1 0 0 0 1\n", kIdentityVeloText, 2);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("P_rect_02") != std::string::npos);
    }
    CHECK_THROWS_AS(
        parse_calibration("P_rect_02: 1 0 0\nR_rect_00: 1 0 0 0 1 0 0 0 1\n",
                          kIdentityVeloText, 2),
        ParseError);
    CHECK_THROWS_AS(parse_calibration(kIdentityCamText, "R: 1 0 0 0 1 0 0 0 1\n", 2), ParseError);
}

TEST_CASE("non-orthonormal rectifying rotation is rejected") {
    const std::string bad_cam =
        "P_rect_02: 1 0 0 0 0 1 0 0 0 0 1 0\n"
        "R_rect_00: 2 0 0 0 1 0 0 0 1\n";
    CHECK_THROWS_AS(parse_calibration(bad_cam, kIdentityVeloText, 2), InvalidCalibrationError);
}

TEST_CASE("camera index selects the right projection key") {
    const std::string cam =
        "P_rect_02: 1 0 0 0 0 1 0 0 0 0 1 0\n"
        "P_rect_03: 2 0 5 0 0 2 6 0 0 0 1 0\n"
        "R_rect_00: 1 0 0 0 1 0 0 0 1\n";
    const CalibrationBundle calib = parse_calibration(cam, kIdentityVeloText, 3);
    CHECK(calib.p_rect(0, 0) == 2.0);
    CHECK(calib.p_rect(0, 2) == 5.0);
}

TEST_CASE("composed chain matches a hand product on a KITTI-style snippet") {
    // Exact rotations rendered to full precision so the snippet satisfies
    // the orthonormality invariant while carrying KITTI-scale values.
    const Mat3 r_rect =
        Eigen::AngleAxisd(0.009, Vec3(0.3, -0.2, 1.0).normalized()).toRotationMatrix();
    const Mat3 r_velo =
        (Eigen::AngleAxisd(-M_PI / 2, Vec3::UnitY()) * Eigen::AngleAxisd(M_PI / 2, Vec3::UnitZ()))
            .toRotationMatrix();
    double r_rect_rows[9], r_velo_rows[9];
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            r_rect_rows[r * 3 + c] = r_rect(r, c);
            r_velo_rows[r * 3 + c] = r_velo(r, c);
        }
    }
    const std::string cam_text =
        "S_rect_02: 1242 375\n"
        "P_rect_02: 721.5377 0.0 609.5593 44.85728 0.0 721.5377 172.854 0.2163791 "
        "0.0 0.0 1.0 0.002745884\n"
        "R_rect_00: " + format_matrix(r_rect_rows, 9) + "\n";
    const std::string velo_text =
        "R: " + format_matrix(r_velo_rows, 9) + "\n"
        "T: -0.004069766 -0.07631618 -0.2717806\n";

    const CalibrationBundle calib = parse_calibration(cam_text, velo_text, 2);

    // Oracle: multiply p_rect * lift(r_rect) * t_range_cam with plain loops.
    double lift[4][4] = {};
    for (int i = 0; i < 4; ++i) lift[i][i] = 1.0;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) lift[r][c] = calib.r_rect(r, c);
    }
    double rt[4][4] = {};
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            for (int k = 0; k < 4; ++k) rt[r][c] += lift[r][k] * calib.t_range_cam(k, c);
        }
    }
    double chain[3][4] = {};
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 4; ++c) {
            for (int k = 0; k < 4; ++k) chain[r][c] += calib.p_rect(r, k) * rt[k][c];
        }
    }
    const Mat34 composed = calib.composite();
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 4; ++c) {
            CHECK(composed(r, c) == doctest::Approx(chain[r][c]).epsilon(1e-9));
        }
    }
}

TEST_CASE("parse_rect_size reads S_rect when present") {
    const std::string cam = "S_rect_02: 1242 375\n" + kIdentityCamText;
    const auto size = parse_rect_size(cam, 2);
    REQUIRE(size.has_value());
    CHECK(size->first == 1242);
    CHECK(size->second == 375);
    CHECK_FALSE(parse_rect_size(kIdentityCamText, 2).has_value());
}

TEST_CASE("frustum filter keeps exactly the projectable points") {
    const CalibrationBundle calib = parse_calibration(kIdentityCamText, kIdentityVeloText, 2);

    SUBCASE("empty cloud stays empty") {
        CHECK(filter_to_frustum(PointCloud{}, calib, 10, 10, 80.0).empty());
    }

    SUBCASE("point behind the camera is removed") {
        PointCloud cloud;
        cloud.points.push_back(Point{0.0f, 0.0f, -5.0f, 0.0f});
        CHECK(filter_to_frustum(cloud, calib, 10, 10, 80.0).empty());
    }

    SUBCASE("three-point cloud keeps the single in-frustum point") {
        PointCloud cloud;
        cloud.points.push_back(Point{2.0f, 3.0f, 1.0f, 0.0f});    // projects to (2, 3)
        cloud.points.push_back(Point{50.0f, 0.0f, 1.0f, 0.0f});   // u = 50, outside 10x10
        cloud.points.push_back(Point{0.0f, 0.0f, 100.0f, 0.0f});  // beyond max range
        const PointCloud kept = filter_to_frustum(cloud, calib, 10, 10, 80.0);
        REQUIRE(kept.size() == 1);
        CHECK(kept.points[0].x == 2.0f);
        // Oracle: project the survivor directly and re-check the bounds.
        const auto pixel = project_point(Vec4(2, 3, 1, 1), calib);
        REQUIRE(pixel.has_value());
        CHECK(pixel->u >= 0.0);
        CHECK(pixel->u < 10.0);
        CHECK(pixel->v >= 0.0);
        CHECK(pixel->v < 10.0);
        CHECK(pixel->depth <= 80.0);
    }
}

TEST_CASE("frustum filter is a subset operation and idempotent") {
    const CalibrationBundle calib = parse_calibration(kIdentityCamText, kIdentityVeloText, 2);
    PointCloud cloud;
    for (int i = 0; i < 100; ++i) {
        cloud.points.push_back(Point{static_cast<float>(i % 13 - 6),
                                     static_cast<float>(i % 7 - 3),
                                     static_cast<float>(i % 17 - 2), 0.5f});
    }
    const PointCloud once = filter_to_frustum(cloud, calib, 8, 8, 10.0);
    const PointCloud twice = filter_to_frustum(once, calib, 8, 8, 10.0);
    CHECK(once.size() <= cloud.size());
    REQUIRE(twice.size() == once.size());
    CHECK(write_velodyne_bin(twice) == write_velodyne_bin(once));
}

TEST_CASE("to_camera_frame applies the rigid chain") {
    CalibrationBundle calib = CalibrationBundle::identity();
    calib.t_range_cam << 0, -1, 0, 0,
                         0, 0, -1, 0,
                         1, 0, 0, 0.27,
                         0, 0, 0, 1;
    PointCloud cloud;
    cloud.points.push_back(Point{10.0f, 0.0f, 0.0f, 1.0f});
    const PointCloud mapped = to_camera_frame(cloud, calib);
    REQUIRE(mapped.size() == 1);
    CHECK(mapped.points[0].x == doctest::Approx(0.0));
    CHECK(mapped.points[0].y == doctest::Approx(0.0));
    CHECK(mapped.points[0].z == doctest::Approx(10.27));
    CHECK(mapped.points[0].intensity == 1.0f);
}

}  // TEST_SUITE
