#include "s2c/densify.hpp"

#include <chrono>
#include <cmath>

#include "s2c/errors.hpp"
#include "s2c/parallel.hpp"

namespace s2c {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void MarchParams::validate() const {
    if (!(step > 0.0)) throw Error("march: step must be > 0");
    if (!(t_min > 0.0 && t_min < t_max)) throw Error("march: need 0 < t_min < t_max");
    if (!(threshold > 0.0 && threshold < 1.0)) throw Error("march: threshold must be in (0, 1)");
    if (refine_iters < 0) throw Error("march: refine_iters must be >= 0");
}

MarchParams march_params(const PipelineConfig& config) {
    return {config.march_step, config.march_t_min, config.march_t_max, config.march_threshold,
            config.march_refine_iters};
}

std::optional<double> ray_depth(const Ray& ray, const OccupancyModel& model,
                                const MarchParams& params) {
    SparseFeature scratch;
    // occupancy >= threshold  <=>  w.phi >= logit(threshold)
    const double logit = std::log(params.threshold / (1.0 - params.threshold));
    const auto occupied = [&](double t) {
        const Vec3 x = ray.origin + t * ray.direction;
        model.sparse_features(x, scratch);
        double s = 0.0;
        for (const FeatureEntry& entry : scratch) s += model.weights()[entry.index] * entry.value;
        return s >= logit;
    };

    double previous = params.t_min;
    for (double t = params.t_min; t <= params.t_max; t += params.step) {
        if (occupied(t)) {
            double lo = previous, hi = t;
            for (int i = 0; i < params.refine_iters; ++i) {
                const double mid = 0.5 * (lo + hi);
                (occupied(mid) ? hi : lo) = mid;
            }
            return hi;
        }
        previous = t;
    }
    return std::nullopt;
}

DensifyResult densify_depth_image(const PointCloud& cloud, const CalibrationBundle& calib,
                                  int width, int height, const MarchParams& march,
                                  const PipelineConfig& config) {
    march.validate();
    config.validate();

    DensifyResult result;
    result.stats.input_points = cloud.size();

    const PointCloud in_frustum =
        filter_to_frustum(cloud, calib, width, height, config.max_range);
    result.stats.frustum_points = in_frustum.size();
    if (in_frustum.empty()) {
        throw EmptyInputError("densify: no points inside the camera frustum");
    }

    const auto train_start = std::chrono::steady_clock::now();
    const PointCloud camera_cloud = to_camera_frame(in_frustum, calib);
    const Vec3 sensor_origin =
        (calib.range_to_rect() * Vec4(0.0, 0.0, 0.0, 1.0)).head<3>();

    const InducingSet inducing =
        quick_means(camera_cloud, config.tau, config.d0, config.epsilon, config.seed);
    result.stats.cluster_count = inducing.size();

    const std::vector<LabeledSample> samples =
        generate_training_samples(camera_cloud, sensor_origin, config.sampling(), config.seed);
    result.stats.sample_count = samples.size();

    const TrainResult trained =
        train(samples, inducing, config.kernel_settings(), config.training());
    result.stats.initial_loss = trained.initial_loss;
    result.stats.final_loss = trained.final_loss();
    result.stats.train_seconds = seconds_since(train_start);

    const auto render_start = std::chrono::steady_clock::now();
    result.image = DepthImage(width, height);
    const Eigen::RowVector4d depth_row = calib.p_rect.row(2);
    const OccupancyModel& model = trained.model;
    parallel_for(0, static_cast<std::size_t>(width) * height, [&](std::size_t index) {
        const int x = static_cast<int>(index % static_cast<std::size_t>(width));
        const int y = static_cast<int>(index / static_cast<std::size_t>(width));
        const Ray ray = backproject_ray(static_cast<double>(x), static_cast<double>(y), calib);
        const auto t = ray_depth(ray, model, march);
        if (!t) return;
        const Vec3 hit = ray.origin + *t * ray.direction;
        const double depth = depth_row * hit.homogeneous();
        if (depth > 0.0 && depth <= config.max_range) result.image.values[index] = depth;
    });
    result.stats.render_seconds = seconds_since(render_start);

    std::size_t valid = 0;
    for (const double v : result.image.values) valid += v > 0.0;
    result.stats.valid_fraction =
        static_cast<double>(valid) / static_cast<double>(result.image.pixel_count());
    return result;
}

DepthImage project_sparse(const PointCloud& cloud, const CalibrationBundle& calib, int width,
                          int height) {
    DepthImage image(width, height);
    const Mat34 chain = calib.composite();
    for (const Point& point : cloud.points) {
        const Vec3 uvw = chain * Vec4(point.x, point.y, point.z, 1.0);
        if (uvw.z() < 1e-9) continue;
        const int u = static_cast<int>(std::lround(uvw.x() / uvw.z()));
        const int v = static_cast<int>(std::lround(uvw.y() / uvw.z()));
        if (u < 0 || u >= width || v < 0 || v >= height) continue;
        double& cell = image.at(u, v);
        if (cell <= 0.0 || uvw.z() < cell) cell = uvw.z();
    }
    return image;
}

}  // namespace s2c
