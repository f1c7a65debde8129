#include "s2c/pointcloud.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace s2c {

namespace {

float read_f32_le(const std::uint8_t* p) {
    std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                         static_cast<std::uint32_t>(p[1]) << 8 |
                         static_cast<std::uint32_t>(p[2]) << 16 |
                         static_cast<std::uint32_t>(p[3]) << 24;
    return std::bit_cast<float>(bits);
}

void write_f32_le(float value, std::vector<std::uint8_t>& out) {
    const std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
    out.push_back(static_cast<std::uint8_t>(bits & 0xff));
    out.push_back(static_cast<std::uint8_t>((bits >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((bits >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((bits >> 24) & 0xff));
}

/// KITTI calibration files are line oriented `KEY: v1 v2 ...` records.
std::unordered_map<std::string, std::vector<double>> parse_key_values(const std::string& text) {
    std::unordered_map<std::string, std::vector<double>> table;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string key = line.substr(0, colon);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        if (key.empty()) continue;
        std::vector<double> values;
        const char* cursor = line.data() + colon + 1;
        const char* end = line.data() + line.size();
        while (cursor < end) {
            while (cursor < end && (*cursor == ' ' || *cursor == '\t' || *cursor == '\r')) ++cursor;
            if (cursor >= end) break;
            double value = 0.0;
            const auto [next, ec] = std::from_chars(cursor, end, value);
            if (ec != std::errc()) break;  // trailing non-numeric payload (dates etc.)
            values.push_back(value);
            cursor = next;
        }
        table[key] = std::move(values);
    }
    return table;
}

std::vector<double> require_values(
    const std::unordered_map<std::string, std::vector<double>>& table, const std::string& key,
    std::size_t count, const char* file_label) {
    const auto it = table.find(key);
    if (it == table.end()) {
        throw ParseError(std::string("missing key ") + key + " in " + file_label);
    }
    if (it->second.size() != count) {
        throw ParseError(std::string("key ") + key + " in " + file_label + " has " +
                         std::to_string(it->second.size()) + " values, expected " +
                         std::to_string(count));
    }
    return it->second;
}

}  // namespace

PointCloud read_velodyne_bin(std::span<const std::uint8_t> bytes, std::size_t* dropped) {
    if (bytes.size() % 16 != 0) {
        throw MalformedScanError("scan length " + std::to_string(bytes.size()) +
                                 " is not a multiple of the 16-byte record size");
    }
    PointCloud cloud;
    cloud.points.reserve(bytes.size() / 16);
    std::size_t bad = 0;
    for (std::size_t offset = 0; offset < bytes.size(); offset += 16) {
        Point point;
        point.x = read_f32_le(bytes.data() + offset);
        point.y = read_f32_le(bytes.data() + offset + 4);
        point.z = read_f32_le(bytes.data() + offset + 8);
        point.intensity = read_f32_le(bytes.data() + offset + 12);
        if (!std::isfinite(point.x) || !std::isfinite(point.y) || !std::isfinite(point.z) ||
            !std::isfinite(point.intensity)) {
            ++bad;
            continue;
        }
        cloud.points.push_back(point);
    }
    if (dropped) *dropped = bad;
    return cloud;
}

std::vector<std::uint8_t> write_velodyne_bin(const PointCloud& cloud) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(cloud.size() * 16);
    for (const Point& point : cloud.points) {
        write_f32_le(point.x, bytes);
        write_f32_le(point.y, bytes);
        write_f32_le(point.z, bytes);
        write_f32_le(point.intensity, bytes);
    }
    return bytes;
}

PointCloud load_velodyne_bin(const std::string& path, std::size_t* dropped) {
    std::ifstream input(path, std::ios::binary);
    if (!input) throw IoError("cannot open scan " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(input)),
                                    std::istreambuf_iterator<char>());
    return read_velodyne_bin(bytes, dropped);
}

void save_velodyne_bin(const PointCloud& cloud, const std::string& path) {
    const auto bytes = write_velodyne_bin(cloud);
    std::ofstream output(path, std::ios::binary | std::ios::trunc);
    if (!output) throw IoError("cannot open " + path + " for writing");
    output.write(reinterpret_cast<const char*>(bytes.data()),
                 static_cast<std::streamsize>(bytes.size()));
    if (!output) throw IoError("short write to " + path);
}

CalibrationBundle parse_calibration(const std::string& cam_to_cam_text,
                                    const std::string& velo_to_cam_text, int camera_index) {
    const auto cam_table = parse_key_values(cam_to_cam_text);
    const auto velo_table = parse_key_values(velo_to_cam_text);

    char p_key[16];
    std::snprintf(p_key, sizeof(p_key), "P_rect_%02d", camera_index);

    const auto p_values = require_values(cam_table, p_key, 12, "cam_to_cam");
    const auto r_values = require_values(cam_table, "R_rect_00", 9, "cam_to_cam");
    const auto rot_values = require_values(velo_table, "R", 9, "velo_to_cam");
    const auto t_values = require_values(velo_table, "T", 3, "velo_to_cam");

    CalibrationBundle calib;
    for (int row = 0; row < 3; ++row) {
        for (int col = 0; col < 4; ++col) calib.p_rect(row, col) = p_values[row * 4 + col];
        for (int col = 0; col < 3; ++col) calib.r_rect(row, col) = r_values[row * 3 + col];
    }
    calib.t_range_cam = Mat4::Identity();
    for (int row = 0; row < 3; ++row) {
        for (int col = 0; col < 3; ++col) calib.t_range_cam(row, col) = rot_values[row * 3 + col];
        calib.t_range_cam(row, 3) = t_values[row];
    }
    validate_calibration(calib);
    return calib;
}

std::optional<std::pair<int, int>> parse_rect_size(const std::string& cam_to_cam_text,
                                                   int camera_index) {
    const auto table = parse_key_values(cam_to_cam_text);
    char s_key[16];
    std::snprintf(s_key, sizeof(s_key), "S_rect_%02d", camera_index);
    const auto it = table.find(s_key);
    if (it == table.end() || it->second.size() != 2) return std::nullopt;
    return std::make_pair(static_cast<int>(std::lround(it->second[0])),
                          static_cast<int>(std::lround(it->second[1])));
}

PointCloud filter_to_frustum(const PointCloud& cloud, const CalibrationBundle& calib, int width,
                             int height, double max_range) {
    const Mat34 chain = calib.composite();
    PointCloud kept;
    kept.points.reserve(cloud.size());
    for (const Point& point : cloud.points) {
        const Vec3 uvw = chain * Vec4(point.x, point.y, point.z, 1.0);
        if (uvw.z() < 1e-9 || uvw.z() > max_range) continue;
        const double u = uvw.x() / uvw.z();
        const double v = uvw.y() / uvw.z();
        if (u < 0.0 || u >= width || v < 0.0 || v >= height) continue;
        kept.points.push_back(point);
    }
    return kept;
}

PointCloud to_camera_frame(const PointCloud& cloud, const CalibrationBundle& calib) {
    const Mat4 rigid = calib.range_to_rect();
    PointCloud mapped;
    mapped.points.reserve(cloud.size());
    for (const Point& point : cloud.points) {
        const Vec4 q = rigid * Vec4(point.x, point.y, point.z, 1.0);
        mapped.points.push_back(Point{static_cast<float>(q.x()), static_cast<float>(q.y()),
                                      static_cast<float>(q.z()), point.intensity});
    }
    return mapped;
}

}  // namespace s2c
