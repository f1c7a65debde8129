#include "s2c/synthetic.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "s2c/errors.hpp"

namespace s2c {

namespace {

std::optional<double> intersect_plane(const PlanePrimitive& plane, const Vec3& origin,
                                      const Vec3& direction) {
    const double denom = plane.normal.dot(direction);
    if (std::abs(denom) < 1e-12) return std::nullopt;
    const double t = plane.normal.dot(plane.center - origin) / denom;
    if (t <= 1e-9) return std::nullopt;
    const Vec3 hit = origin + t * direction - plane.center;
    if (std::abs(hit.dot(plane.axis_u())) > plane.half_u) return std::nullopt;
    if (std::abs(hit.dot(plane.axis_v())) > plane.half_v) return std::nullopt;
    return t;
}

std::optional<double> intersect_sphere(const SpherePrimitive& sphere, const Vec3& origin,
                                       const Vec3& direction) {
    const Vec3 oc = origin - sphere.center;
    const double b = oc.dot(direction);
    const double c = oc.squaredNorm() - sphere.radius * sphere.radius;
    const double disc = b * b - c;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    double t = -b - root;
    if (t <= 1e-9) t = -b + root;
    if (t <= 1e-9) return std::nullopt;
    return t;
}

std::vector<double> parse_numbers(const std::string& payload) {
    std::vector<double> values;
    const char* cursor = payload.data();
    const char* end = payload.data() + payload.size();
    while (cursor < end) {
        while (cursor < end && (*cursor == ' ' || *cursor == '\t' || *cursor == '\r')) ++cursor;
        if (cursor >= end) break;
        double value = 0.0;
        const auto [next, ec] = std::from_chars(cursor, end, value);
        if (ec != std::errc()) throw ParseError("scene: bad number in '" + payload + "'");
        values.push_back(value);
        cursor = next;
    }
    return values;
}

}  // namespace

Vec3 PlanePrimitive::axis_u() const {
    const Vec3 n = normal.normalized();
    const Vec3 pick = std::abs(n.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
    return n.cross(pick).normalized();
}

Vec3 PlanePrimitive::axis_v() const {
    return normal.normalized().cross(axis_u()).normalized();
}

std::optional<double> intersect_scene(const Scene& scene, const Vec3& origin,
                                      const Vec3& direction) {
    std::optional<double> best;
    const auto consider = [&best](std::optional<double> t) {
        if (t && (!best || *t < *best)) best = t;
    };
    for (const PlanePrimitive& plane : scene.planes) {
        consider(intersect_plane(plane, origin, direction));
    }
    for (const SpherePrimitive& sphere : scene.spheres) {
        consider(intersect_sphere(sphere, origin, direction));
    }
    return best;
}

PointCloud simulate_scan(const Scene& scene, const ScanPattern& pattern, std::uint64_t seed) {
    PointCloud cloud;
    if (scene.empty() || pattern.beams <= 0 || pattern.azimuth_steps <= 0) return cloud;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, pattern.noise_sigma);
    const double d_el = pattern.beams > 1
                            ? (pattern.elevation_max - pattern.elevation_min) / (pattern.beams - 1)
                            : 0.0;
    const double d_az =
        pattern.azimuth_steps > 1
            ? (pattern.azimuth_max - pattern.azimuth_min) / (pattern.azimuth_steps - 1)
            : 0.0;
    for (int row = 0; row < pattern.beams; ++row) {
        const double elevation = pattern.elevation_min + row * d_el;
        for (int col = 0; col < pattern.azimuth_steps; ++col) {
            const double azimuth = pattern.azimuth_min + col * d_az;
            const Vec3 direction(std::cos(elevation) * std::sin(azimuth), std::sin(elevation),
                                 std::cos(elevation) * std::cos(azimuth));
            const auto t = intersect_scene(scene, Vec3::Zero(), direction);
            if (!t) continue;
            double range = *t;
            if (pattern.noise_sigma > 0.0) range = std::max(0.1, range + noise(rng));
            const Vec3 hit = range * direction;
            cloud.points.push_back(Point{static_cast<float>(hit.x()), static_cast<float>(hit.y()),
                                         static_cast<float>(hit.z()), 1.0f});
        }
    }
    return cloud;
}

DepthImage analytic_depth(const Scene& scene, const CalibrationBundle& calib, int width,
                          int height) {
    DepthImage image(width, height);
    const Eigen::RowVector4d depth_row = calib.p_rect.row(2);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const Ray ray = backproject_ray(static_cast<double>(x), static_cast<double>(y), calib);
            const auto t = intersect_scene(scene, ray.origin, ray.direction);
            if (!t) continue;
            const Vec3 hit = ray.origin + *t * ray.direction;
            const double depth = depth_row * hit.homogeneous();
            if (depth > 0.0) image.at(x, y) = depth;
        }
    }
    return image;
}

Scene make_wall10() {
    Scene scene;
    scene.name = "wall10";
    scene.planes.push_back(PlanePrimitive{Vec3(0.0, 0.0, 10.0), -Vec3::UnitZ(), 14.0, 8.0});
    return scene;
}

Scene make_street_mock() {
    Scene scene;
    scene.name = "street-mock";
    // Ground 1.65 m below the sensor (y points down), long enough to catch
    // every grazing beam.
    scene.planes.push_back(
        PlanePrimitive{Vec3(0.0, 1.65, 45.0), -Vec3::UnitY(), 60.0, 50.0});
    // Two obstacle groups approximated by overlapping spheres resting on the
    // ground.
    scene.spheres.push_back(SpherePrimitive{Vec3(-3.0, 0.90, 12.0), 0.75});
    scene.spheres.push_back(SpherePrimitive{Vec3(-2.3, 0.90, 12.2), 0.75});
    scene.spheres.push_back(SpherePrimitive{Vec3(-3.7, 0.90, 11.8), 0.75});
    scene.spheres.push_back(SpherePrimitive{Vec3(4.0, 0.40, 20.0), 1.25});
    scene.spheres.push_back(SpherePrimitive{Vec3(5.1, 0.40, 20.3), 1.25});
    return scene;
}

Scene scene_by_name(const std::string& name) {
    if (name == "wall10") return make_wall10();
    if (name == "street-mock") return make_street_mock();
    throw ParseError("unknown scene '" + name + "'");
}

Scene parse_scene(const std::string& text) {
    Scene scene;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError("scene: missing ':' in '" + line + "'");
        std::string key = line.substr(0, colon);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        const std::string payload = line.substr(colon + 1);
        if (key == "name") {
            std::istringstream token(payload);
            token >> scene.name;
        } else if (key == "plane") {
            const auto v = parse_numbers(payload);
            if (v.size() != 8) throw ParseError("scene: plane needs 8 numbers");
            PlanePrimitive plane;
            plane.center = Vec3(v[0], v[1], v[2]);
            plane.normal = Vec3(v[3], v[4], v[5]).normalized();
            plane.half_u = v[6];
            plane.half_v = v[7];
            scene.planes.push_back(plane);
        } else if (key == "sphere") {
            const auto v = parse_numbers(payload);
            if (v.size() != 4) throw ParseError("scene: sphere needs 4 numbers");
            scene.spheres.push_back(SpherePrimitive{Vec3(v[0], v[1], v[2]), v[3]});
        } else {
            throw ParseError("scene: unknown key '" + key + "'");
        }
    }
    return scene;
}

std::string format_scene(const Scene& scene) {
    std::ostringstream out;
    out.precision(17);
    if (!scene.name.empty()) out << "name: " << scene.name << "\n";
    for (const PlanePrimitive& plane : scene.planes) {
        out << "plane: " << plane.center.x() << " " << plane.center.y() << " " << plane.center.z()
            << " " << plane.normal.x() << " " << plane.normal.y() << " " << plane.normal.z() << " "
            << plane.half_u << " " << plane.half_v << "\n";
    }
    for (const SpherePrimitive& sphere : scene.spheres) {
        out << "sphere: " << sphere.center.x() << " " << sphere.center.y() << " "
            << sphere.center.z() << " " << sphere.radius << "\n";
    }
    return out.str();
}

}  // namespace s2c
