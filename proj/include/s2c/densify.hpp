#pragma once

#include <cstddef>
#include <optional>

#include "s2c/config.hpp"
#include "s2c/depth_image.hpp"
#include "s2c/geometry.hpp"
#include "s2c/hilbert_map.hpp"
#include "s2c/pointcloud.hpp"

namespace s2c {

/// Ray-marching discretization for surface extraction from the occupancy
/// field.
struct MarchParams {
    double step = 0.1;
    double t_min = 1.0;
    double t_max = 80.0;
    double threshold = 0.6;
    int refine_iters = 8;

    void validate() const;  // throws Error
};

MarchParams march_params(const PipelineConfig& config);

/// First occupancy crossing along the ray: marches t_min..t_max in `step`
/// increments, then bisects refine_iters times inside the bracketing
/// interval. Returns the ray parameter of the crossing, or nothing when the
/// probability never reaches the threshold.
std::optional<double> ray_depth(const Ray& ray, const OccupancyModel& model,
                                const MarchParams& params);

struct DensifyStats {
    std::size_t input_points = 0;
    std::size_t frustum_points = 0;
    std::size_t cluster_count = 0;
    std::size_t sample_count = 0;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    double valid_fraction = 0.0;
    double train_seconds = 0.0;
    double render_seconds = 0.0;
};

struct DensifyResult {
    DepthImage image;
    DensifyStats stats;
};

/// End-to-end densification at the requested resolution: frustum filter,
/// camera-frame transform, clustering, sample generation, weight training
/// and per-pixel ray collision (parallel over pixels). The calibration must
/// already be scaled to (width, height). Pixels whose ray never collides
/// stay invalid. Throws EmptyInputError when nothing survives the frustum.
DensifyResult densify_depth_image(const PointCloud& cloud, const CalibrationBundle& calib,
                                  int width, int height, const MarchParams& march,
                                  const PipelineConfig& config);

/// Baseline: each in-frustum point writes its depth to the nearest pixel;
/// the smallest depth wins contested pixels.
DepthImage project_sparse(const PointCloud& cloud, const CalibrationBundle& calib, int width,
                          int height);

}  // namespace s2c
