#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "s2c/clustering.hpp"
#include "s2c/geometry.hpp"
#include "s2c/pointcloud.hpp"
#include "s2c/spatial_hash.hpp"

namespace s2c {

/// Occupancy training sample: a 3D location and its class, +1 occupied /
/// -1 free.
struct LabeledSample {
    Vec3 x = Vec3::Zero();
    int label = 1;
};

/// Kernel evaluation settings shared by feature computation and querying.
/// Features are evaluated only against clusters within
/// cutoff_scale * cluster_radius(|x|, tau, d0) of the query; everything
/// further away is exactly zero. A non-finite cutoff_scale disables
/// sparsification and reproduces the dense feature vector.
struct KernelSettings {
    double tau = 0.3;
    double d0 = 20.0;
    double cutoff_scale = 3.0;
};

struct FeatureEntry {
    std::int32_t index = 0;
    double value = 0.0;
};

/// Sparse feature vector: the nonzero kernel evaluations of one query point.
using SparseFeature = std::vector<FeatureEntry>;

/// exp(-1/2 (x - mu)^T sigma_inverse (x - mu)); 1 exactly when x == mu.
double squared_exponential_kernel(const Vec3& x, const Vec3& mu, const Mat3& sigma_inverse);

struct TrainingConfig {
    double learning_rate = 0.1;
    int epochs = 10;
    int batch_size = 256;
    double l1_weight = 1e-4;
    double l2_weight = 1e-4;
    std::uint64_t seed = 0;

    void validate() const;  // throws Error on constraint violations
};

/// Continuous occupancy model: an inducing set, per-cluster precomputed
/// covariance inverses, kernel settings and a trained weight vector.
/// Queries are pure and safe to run concurrently.
class OccupancyModel {
public:
    OccupancyModel() = default;
    OccupancyModel(InducingSet inducing, KernelSettings settings);

    const InducingSet& inducing() const { return inducing_; }
    const KernelSettings& settings() const { return settings_; }
    const Eigen::VectorXd& weights() const { return w_; }
    void set_weights(Eigen::VectorXd w);
    const Mat3& sigma_inverse(std::size_t cluster) const { return sigma_inv_[cluster]; }
    std::size_t cluster_count() const { return inducing_.size(); }

    /// Feature sparsification radius at this query location.
    double cutoff_radius(const Vec3& x) const;

    /// Nonzero feature entries for x, ascending by cluster index. `out` is
    /// cleared and reused so hot loops do not reallocate.
    void sparse_features(const Vec3& x, SparseFeature& out) const;

    /// Dense feature vector honoring the cutoff (zeros beyond it).
    Eigen::VectorXd feature_vector(const Vec3& x) const;

    /// w . phi(x).
    double score(const Vec3& x) const;

    /// Probability that x is free: 1 / (1 + exp(w . phi(x))).
    double nonoccupancy_probability(const Vec3& x) const;

    /// Complement of nonoccupancy_probability; the two sum to 1 exactly.
    double occupancy_probability(const Vec3& x) const;

private:
    bool possibly_nonzero(const Vec3& x) const;

    InducingSet inducing_;
    KernelSettings settings_;
    Eigen::VectorXd w_;
    std::vector<Mat3> sigma_inv_;
    SpatialHashGrid center_grid_;

    // Coarse conservative reach mask: a query in an unmarked cell has no
    // cluster within its cutoff, so its feature vector is exactly empty.
    // Keeps ray marching cheap across free space.
    Vec3 mask_origin_ = Vec3::Zero();
    double mask_cell_ = 2.0;
    int mask_nx_ = 0, mask_ny_ = 0, mask_nz_ = 0;
    std::vector<std::uint8_t> mask_;
};

/// Regularized negative log-likelihood:
/// sum_i log(1 + exp(-y_i w.phi_i)) + l1 |w|_1 + l2 |w|_2^2.
double nll_loss(const Eigen::VectorXd& w, std::span<const LabeledSample> samples,
                std::span<const SparseFeature> features, double l1_weight, double l2_weight);

/// Analytic gradient of nll_loss. The l1 subgradient at w_i == 0 is taken
/// as 0.
Eigen::VectorXd nll_gradient(const Eigen::VectorXd& w, std::span<const LabeledSample> samples,
                             std::span<const SparseFeature> features, double l1_weight,
                             double l2_weight);

struct TrainResult {
    OccupancyModel model;
    double initial_loss = 0.0;
    std::vector<double> epoch_losses;

    double final_loss() const { return epoch_losses.empty() ? initial_loss : epoch_losses.back(); }
};

/// Mini-batch SGD on the regularized NLL from w = 0 with seeded per-epoch
/// shuffling. Sample features are computed once up front (the feature map
/// does not depend on w). Deterministic given (samples, inducing, config).
/// Throws DegenerateTrainingError unless both labels are present.
TrainResult train(std::span<const LabeledSample> samples, InducingSet inducing,
                  const KernelSettings& kernel_settings, const TrainingConfig& config);

struct SamplingConfig {
    double free_spacing = 0.5;
    double margin_origin = 1.0;
    double margin_endpoint = 0.5;
};

/// Labels a scan for occupancy training: every point contributes one +1
/// sample at its location, and -1 samples are laid along the sensor->point
/// beam every free_spacing meters, starting margin_origin from the sensor
/// and stopping margin_endpoint short of the return. The result is
/// seed-shuffled so prefix splits are unbiased.
std::vector<LabeledSample> generate_training_samples(const PointCloud& cloud,
                                                     const Vec3& sensor_origin,
                                                     const SamplingConfig& sampling,
                                                     std::uint64_t seed);

/// Binary model container (version-tagged); round trips bit-exactly.
void save_model(const OccupancyModel& model, const std::string& path);
OccupancyModel load_model(const std::string& path);

}  // namespace s2c
