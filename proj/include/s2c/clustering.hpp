#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "s2c/geometry.hpp"
#include "s2c/pointcloud.hpp"

namespace s2c {

/// One inducing cluster: sample mean, regularized sample covariance and the
/// number of member points.
struct Cluster {
    Vec3 mu = Vec3::Zero();
    Mat3 sigma = Mat3::Identity();
    std::int64_t count = 0;
};

struct InducingSet {
    std::vector<Cluster> clusters;

    std::size_t size() const { return clusters.size(); }
    bool empty() const { return clusters.empty(); }
};

/// Distance-adaptive cluster radius tau * (1 + d / d0). Strictly increasing
/// in d, so sparse far-field regions get proportionally larger clusters.
double cluster_radius(double d, double tau, double d0);

/// Sample mean and covariance (divisor max(count-1, 1)) with an epsilon*I
/// ridge. The result is exactly symmetric and positive definite with
/// eigenvalues >= epsilon.
std::pair<Vec3, Mat3> cluster_moments(std::span<const Vec3> points, double epsilon);

/// Single greedy pass over a seeded shuffle of the cloud: each point joins
/// the earliest-founded cluster whose founding center lies within
/// cluster_radius(|point|, tau, d0) of it, or founds a new cluster at
/// itself. Moments are computed per cluster afterwards. Throws
/// EmptyInputError for an empty cloud.
InducingSet quick_means(const PointCloud& cloud, double tau, double d0, double epsilon,
                        std::uint64_t seed);

}  // namespace s2c
