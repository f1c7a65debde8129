#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "s2c/depth_image.hpp"
#include "s2c/geometry.hpp"
#include "s2c/pointcloud.hpp"

namespace s2c {

/// Bounded rectangle: center, unit normal and half extents along two
/// in-plane axes derived deterministically from the normal.
struct PlanePrimitive {
    Vec3 center = Vec3::Zero();
    Vec3 normal = -Vec3::UnitZ();
    double half_u = 1.0;
    double half_v = 1.0;

    Vec3 axis_u() const;
    Vec3 axis_v() const;
};

struct SpherePrimitive {
    Vec3 center = Vec3::Zero();
    double radius = 1.0;
};

struct Scene {
    std::string name;
    std::vector<PlanePrimitive> planes;
    std::vector<SpherePrimitive> spheres;

    bool empty() const { return planes.empty() && spheres.empty(); }
};

/// Distance along the ray to the nearest primitive hit, if any.
std::optional<double> intersect_scene(const Scene& scene, const Vec3& origin,
                                      const Vec3& direction);

/// Angular sampling pattern of a spinning multi-beam range sensor placed at
/// the frame origin. `beams` elevation rows by `azimuth_steps` columns over
/// the given angular windows (radians). Azimuth 0 looks along +z, positive
/// elevation tilts toward +y.
struct ScanPattern {
    int beams = 64;
    int azimuth_steps = 300;
    double azimuth_min = -0.5;
    double azimuth_max = 0.5;
    double elevation_min = 0.0;
    double elevation_max = 0.3;
    double noise_sigma = 0.0;  // Gaussian range noise, meters
};

/// Casts the pattern against the scene and returns the hits as a cloud.
/// Deterministic per seed; the seed only matters when noise_sigma > 0.
PointCloud simulate_scan(const Scene& scene, const ScanPattern& pattern, std::uint64_t seed);

/// Exact per-pixel depth by analytic ray intersection. Depends only on the
/// camera model, never on the modules it serves as an oracle for.
DepthImage analytic_depth(const Scene& scene, const CalibrationBundle& calib, int width,
                          int height);

/// Fronto-parallel wall 10 m ahead, large enough to cover the test camera
/// frustum.
Scene make_wall10();

/// Ground plane 1.65 m below the sensor plus two sphere groups standing in
/// for box-shaped obstacles.
Scene make_street_mock();

/// Lookup by the fixed name ("wall10" or "street-mock"). Throws ParseError
/// for unknown names.
Scene scene_by_name(const std::string& name);

/// Flat key-value scene description, one primitive per line:
///   name: <label>
///   plane: cx cy cz nx ny nz half_u half_v
///   sphere: cx cy cz radius
Scene parse_scene(const std::string& text);
std::string format_scene(const Scene& scene);

}  // namespace s2c
