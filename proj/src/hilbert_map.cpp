#include "s2c/hilbert_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "s2c/errors.hpp"
#include "s2c/parallel.hpp"
#include "s2c/random.hpp"

namespace s2c {

namespace {

double logistic(double t) {
    if (t >= 0.0) {
        return 1.0 / (1.0 + std::exp(-t));
    }
    const double e = std::exp(t);
    return e / (1.0 + e);
}

/// log(1 + exp(t)) without overflow.
double log1p_exp(double t) {
    if (t > 30.0) return t;
    return std::log1p(std::exp(t));
}

double sample_loss_sum(const Eigen::VectorXd& w, std::span<const LabeledSample> samples,
                       std::span<const SparseFeature> features) {
    double total = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double s = 0.0;
        for (const FeatureEntry& entry : features[i]) s += w[entry.index] * entry.value;
        total += log1p_exp(-static_cast<double>(samples[i].label) * s);
    }
    return total;
}

}  // namespace

double squared_exponential_kernel(const Vec3& x, const Vec3& mu, const Mat3& sigma_inverse) {
    const Vec3 d = x - mu;
    return std::exp(-0.5 * d.dot(sigma_inverse * d));
}

void TrainingConfig::validate() const {
    if (!(learning_rate > 0.0)) throw Error("training: learning_rate must be > 0");
    if (epochs < 1) throw Error("training: epochs must be >= 1");
    if (batch_size < 1) throw Error("training: batch_size must be >= 1");
    if (l1_weight < 0.0 || l2_weight < 0.0) throw Error("training: negative regularizer weight");
}

OccupancyModel::OccupancyModel(InducingSet inducing, KernelSettings settings)
    : inducing_(std::move(inducing)),
      settings_(settings),
      w_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(inducing_.size()))),
      center_grid_(std::max(2.0 * settings.tau, 1e-6)) {
    sigma_inv_.resize(inducing_.size());
    for (std::size_t c = 0; c < inducing_.size(); ++c) {
        sigma_inv_[c] = inducing_.clusters[c].sigma.inverse();
        center_grid_.insert(inducing_.clusters[c].mu);
    }
    if (inducing_.empty() || !std::isfinite(settings_.cutoff_scale)) return;

    // A query x reaches cluster mu when |x-mu| <= s*tau*(1+|x|/d0); bounding
    // |x| by |mu|+|x-mu| gives the widest reach around mu:
    //   r(mu) = s*tau*(1+|mu|/d0) / (1 - s*tau/d0),   requiring s*tau < d0.
    const double shrink = 1.0 - settings_.cutoff_scale * settings_.tau / settings_.d0;
    if (shrink <= 0.0) throw Error("kernel settings: cutoff_scale*tau must be below d0");
    const auto reach = [&](const Vec3& mu) {
        return settings_.cutoff_scale * cluster_radius(mu.norm(), settings_.tau, settings_.d0) /
               shrink;
    };

    Vec3 lo = inducing_.clusters[0].mu, hi = lo;
    double max_reach = 0.0;
    for (const Cluster& cluster : inducing_.clusters) {
        lo = lo.cwiseMin(cluster.mu);
        hi = hi.cwiseMax(cluster.mu);
        max_reach = std::max(max_reach, reach(cluster.mu));
    }
    lo.array() -= max_reach + mask_cell_;
    hi.array() += max_reach + mask_cell_;
    mask_origin_ = lo;
    mask_nx_ = static_cast<int>(std::ceil((hi.x() - lo.x()) / mask_cell_)) + 1;
    mask_ny_ = static_cast<int>(std::ceil((hi.y() - lo.y()) / mask_cell_)) + 1;
    mask_nz_ = static_cast<int>(std::ceil((hi.z() - lo.z()) / mask_cell_)) + 1;
    mask_.assign(static_cast<std::size_t>(mask_nx_) * mask_ny_ * mask_nz_, 0);

    const double half_diag = 0.5 * mask_cell_ * std::sqrt(3.0);
    for (const Cluster& cluster : inducing_.clusters) {
        const double r = reach(cluster.mu) + half_diag;
        const Vec3 rel = cluster.mu - mask_origin_;
        const int x0 = std::max(0, static_cast<int>((rel.x() - r) / mask_cell_));
        const int x1 = std::min(mask_nx_ - 1, static_cast<int>((rel.x() + r) / mask_cell_));
        const int y0 = std::max(0, static_cast<int>((rel.y() - r) / mask_cell_));
        const int y1 = std::min(mask_ny_ - 1, static_cast<int>((rel.y() + r) / mask_cell_));
        const int z0 = std::max(0, static_cast<int>((rel.z() - r) / mask_cell_));
        const int z1 = std::min(mask_nz_ - 1, static_cast<int>((rel.z() + r) / mask_cell_));
        for (int ix = x0; ix <= x1; ++ix) {
            for (int iy = y0; iy <= y1; ++iy) {
                for (int iz = z0; iz <= z1; ++iz) {
                    mask_[(static_cast<std::size_t>(ix) * mask_ny_ + iy) * mask_nz_ + iz] = 1;
                }
            }
        }
    }
}

bool OccupancyModel::possibly_nonzero(const Vec3& x) const {
    if (mask_.empty()) return true;
    const Vec3 rel = x - mask_origin_;
    const int ix = static_cast<int>(std::floor(rel.x() / mask_cell_));
    const int iy = static_cast<int>(std::floor(rel.y() / mask_cell_));
    const int iz = static_cast<int>(std::floor(rel.z() / mask_cell_));
    if (ix < 0 || iy < 0 || iz < 0 || ix >= mask_nx_ || iy >= mask_ny_ || iz >= mask_nz_) {
        return false;
    }
    return mask_[(static_cast<std::size_t>(ix) * mask_ny_ + iy) * mask_nz_ + iz] != 0;
}

void OccupancyModel::set_weights(Eigen::VectorXd w) {
    if (static_cast<std::size_t>(w.size()) != inducing_.size()) {
        throw Error("weight vector length does not match cluster count");
    }
    w_ = std::move(w);
}

double OccupancyModel::cutoff_radius(const Vec3& x) const {
    return settings_.cutoff_scale * cluster_radius(x.norm(), settings_.tau, settings_.d0);
}

void OccupancyModel::sparse_features(const Vec3& x, SparseFeature& out) const {
    out.clear();
    if (inducing_.empty()) return;
    if (!possibly_nonzero(x)) return;
    const double cutoff = cutoff_radius(x);
    if (!std::isfinite(cutoff)) {
        out.reserve(inducing_.size());
        for (std::size_t c = 0; c < inducing_.size(); ++c) {
            out.push_back({static_cast<std::int32_t>(c),
                           squared_exponential_kernel(x, inducing_.clusters[c].mu, sigma_inv_[c])});
        }
        return;
    }
    center_grid_.for_each_in_ball(x, cutoff, [&](std::int32_t c, double) {
        out.push_back(
            {c, squared_exponential_kernel(x, inducing_.clusters[c].mu, sigma_inv_[c])});
    });
    std::sort(out.begin(), out.end(),
              [](const FeatureEntry& a, const FeatureEntry& b) { return a.index < b.index; });
}

Eigen::VectorXd OccupancyModel::feature_vector(const Vec3& x) const {
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(inducing_.size()));
    SparseFeature entries;
    sparse_features(x, entries);
    for (const FeatureEntry& entry : entries) phi[entry.index] = entry.value;
    return phi;
}

double OccupancyModel::score(const Vec3& x) const {
    SparseFeature entries;
    sparse_features(x, entries);
    double s = 0.0;
    for (const FeatureEntry& entry : entries) s += w_[entry.index] * entry.value;
    return s;
}

double OccupancyModel::nonoccupancy_probability(const Vec3& x) const {
    return logistic(-score(x));
}

double OccupancyModel::occupancy_probability(const Vec3& x) const {
    return 1.0 - nonoccupancy_probability(x);
}

double nll_loss(const Eigen::VectorXd& w, std::span<const LabeledSample> samples,
                std::span<const SparseFeature> features, double l1_weight, double l2_weight) {
    return sample_loss_sum(w, samples, features) + l1_weight * w.lpNorm<1>() +
           l2_weight * w.squaredNorm();
}

Eigen::VectorXd nll_gradient(const Eigen::VectorXd& w, std::span<const LabeledSample> samples,
                             std::span<const SparseFeature> features, double l1_weight,
                             double l2_weight) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(w.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double s = 0.0;
        for (const FeatureEntry& entry : features[i]) s += w[entry.index] * entry.value;
        const double y = static_cast<double>(samples[i].label);
        const double coeff = -y * logistic(-y * s);
        for (const FeatureEntry& entry : features[i]) {
            grad[entry.index] += coeff * entry.value;
        }
    }
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        const double sign = w[k] > 0.0 ? 1.0 : (w[k] < 0.0 ? -1.0 : 0.0);
        grad[k] += l1_weight * sign + 2.0 * l2_weight * w[k];
    }
    return grad;
}

TrainResult train(std::span<const LabeledSample> samples, InducingSet inducing,
                  const KernelSettings& kernel_settings, const TrainingConfig& config) {
    config.validate();
    bool seen_pos = false, seen_neg = false;
    for (const LabeledSample& sample : samples) {
        if (sample.label == 1) seen_pos = true;
        else if (sample.label == -1) seen_neg = true;
        else throw Error("train: label must be -1 or +1");
    }
    if (!seen_pos || !seen_neg) {
        throw DegenerateTrainingError("train: need at least one sample of each class");
    }

    TrainResult result{OccupancyModel(std::move(inducing), kernel_settings), 0.0, {}};
    const std::size_t n = samples.size();

    // Phi does not depend on w; evaluate it once per sample.
    std::vector<SparseFeature> features(n);
    parallel_for(0, n, [&](std::size_t i) {
        result.model.sparse_features(samples[i].x, features[i]);
    });

    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(result.model.cluster_count()));
    result.initial_loss = nll_loss(w, samples, features, config.l1_weight, config.l2_weight);

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::mt19937_64 rng(config.seed);

    // Each batch takes a step against the summed per-sample gradients plus
    // the batch's share of the regularizer, i.e. plain SGD on the summed
    // objective. Mean-normalized steps would shrink per-cluster updates with
    // the batch size and stall sparse-feature training.
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(w.size());
    const double inv_n = 1.0 / static_cast<double>(n);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        seeded_shuffle(order, rng);
        for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t stop = std::min(n, start + static_cast<std::size_t>(config.batch_size));
            grad.setZero();
            for (std::size_t b = start; b < stop; ++b) {
                const std::size_t i = order[b];
                double s = 0.0;
                for (const FeatureEntry& entry : features[i]) s += w[entry.index] * entry.value;
                const double y = static_cast<double>(samples[i].label);
                const double coeff = -y * logistic(-y * s);
                for (const FeatureEntry& entry : features[i]) grad[entry.index] += coeff * entry.value;
            }
            const double reg_share = static_cast<double>(stop - start) * inv_n;
            for (Eigen::Index k = 0; k < w.size(); ++k) {
                const double sign = w[k] > 0.0 ? 1.0 : (w[k] < 0.0 ? -1.0 : 0.0);
                const double reg = config.l1_weight * sign + 2.0 * config.l2_weight * w[k];
                w[k] -= config.learning_rate * (grad[k] + reg * reg_share);
            }
        }
        result.epoch_losses.push_back(
            nll_loss(w, samples, features, config.l1_weight, config.l2_weight));
    }

    result.model.set_weights(std::move(w));
    return result;
}

std::vector<LabeledSample> generate_training_samples(const PointCloud& cloud,
                                                     const Vec3& sensor_origin,
                                                     const SamplingConfig& sampling,
                                                     std::uint64_t seed) {
    std::vector<LabeledSample> samples;
    samples.reserve(cloud.size() * 4);
    for (const Point& point : cloud.points) {
        const Vec3 endpoint = point.position();
        samples.push_back({endpoint, +1});
        const Vec3 beam = endpoint - sensor_origin;
        const double length = beam.norm();
        if (length <= 0.0) continue;
        const Vec3 direction = beam / length;
        const double stop = length - sampling.margin_endpoint;
        for (double t = sampling.margin_origin; t <= stop; t += sampling.free_spacing) {
            samples.push_back({sensor_origin + t * direction, -1});
        }
    }
    seeded_shuffle(samples, seed);
    return samples;
}

namespace {

constexpr char kModelMagic[4] = {'S', '2', 'C', 'M'};
constexpr std::uint32_t kModelVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    return value;
}

}  // namespace

void save_model(const OccupancyModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(kModelMagic, 4);
    write_pod(out, kModelVersion);
    write_pod(out, model.settings().tau);
    write_pod(out, model.settings().d0);
    write_pod(out, model.settings().cutoff_scale);
    write_pod(out, static_cast<std::uint64_t>(model.cluster_count()));
    for (const Cluster& cluster : model.inducing().clusters) {
        write_pod(out, cluster.mu.x());
        write_pod(out, cluster.mu.y());
        write_pod(out, cluster.mu.z());
        for (int row = 0; row < 3; ++row) {
            for (int col = 0; col < 3; ++col) write_pod(out, cluster.sigma(row, col));
        }
        write_pod(out, cluster.count);
    }
    for (Eigen::Index k = 0; k < model.weights().size(); ++k) write_pod(out, model.weights()[k]);
    if (!out) throw IoError("short write to " + path);
}

OccupancyModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kModelMagic, 4) != 0) {
        throw FormatError("not a model container: " + path);
    }
    const auto version = read_pod<std::uint32_t>(in);
    if (version != kModelVersion) {
        throw FormatError("unsupported model version " + std::to_string(version));
    }
    KernelSettings settings;
    settings.tau = read_pod<double>(in);
    settings.d0 = read_pod<double>(in);
    settings.cutoff_scale = read_pod<double>(in);
    const auto count = read_pod<std::uint64_t>(in);
    InducingSet inducing;
    inducing.clusters.resize(count);
    for (std::uint64_t c = 0; c < count; ++c) {
        Cluster& cluster = inducing.clusters[c];
        cluster.mu.x() = read_pod<double>(in);
        cluster.mu.y() = read_pod<double>(in);
        cluster.mu.z() = read_pod<double>(in);
        for (int row = 0; row < 3; ++row) {
            for (int col = 0; col < 3; ++col) cluster.sigma(row, col) = read_pod<double>(in);
        }
        cluster.count = read_pod<std::int64_t>(in);
    }
    Eigen::VectorXd w(static_cast<Eigen::Index>(count));
    for (Eigen::Index k = 0; k < w.size(); ++k) w[k] = read_pod<double>(in);
    if (!in) throw FormatError("truncated model container: " + path);
    OccupancyModel model(std::move(inducing), settings);
    model.set_weights(std::move(w));
    return model;
}

}  // namespace s2c
