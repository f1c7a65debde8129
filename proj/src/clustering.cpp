#include "s2c/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "s2c/errors.hpp"
#include "s2c/random.hpp"
#include "s2c/spatial_hash.hpp"

namespace s2c {

double cluster_radius(double d, double tau, double d0) {
    return tau * (1.0 + d / d0);
}

std::pair<Vec3, Mat3> cluster_moments(std::span<const Vec3> points, double epsilon) {
    const auto n = static_cast<std::int64_t>(points.size());
    Vec3 mu = Vec3::Zero();
    for (const Vec3& p : points) mu += p;
    mu /= static_cast<double>(n);

    // Accumulate the upper triangle and mirror it so sigma is symmetric
    // to the last bit.
    double xx = 0, xy = 0, xz = 0, yy = 0, yz = 0, zz = 0;
    for (const Vec3& p : points) {
        const Vec3 d = p - mu;
        xx += d.x() * d.x();
        xy += d.x() * d.y();
        xz += d.x() * d.z();
        yy += d.y() * d.y();
        yz += d.y() * d.z();
        zz += d.z() * d.z();
    }
    const double divisor = static_cast<double>(std::max<std::int64_t>(n - 1, 1));
    Mat3 sigma;
    sigma << xx / divisor + epsilon, xy / divisor, xz / divisor,
             xy / divisor, yy / divisor + epsilon, yz / divisor,
             xz / divisor, yz / divisor, zz / divisor + epsilon;
    return {mu, sigma};
}

InducingSet quick_means(const PointCloud& cloud, double tau, double d0, double epsilon,
                        std::uint64_t seed) {
    if (cloud.empty()) throw EmptyInputError("quick_means: empty cloud");

    const std::size_t n = cloud.size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    seeded_shuffle(order, seed);

    // Founding centers never move during the pass, so the grid only grows.
    SpatialHashGrid centers(2.5 * tau);
    std::vector<std::int32_t> assignment(n, -1);
    for (const std::uint32_t point_index : order) {
        const Vec3 p = cloud.points[point_index].position();
        const double radius = cluster_radius(p.norm(), tau, d0);
        std::int32_t best = std::numeric_limits<std::int32_t>::max();
        centers.for_each_in_ball(p, radius, [&](std::int32_t cluster_index, double) {
            best = std::min(best, cluster_index);
        });
        if (best == std::numeric_limits<std::int32_t>::max()) {
            best = centers.insert(p);
        }
        assignment[point_index] = best;
    }

    // Bucket members per cluster (counting sort) and take moments.
    const std::size_t cluster_count = centers.size();
    std::vector<std::size_t> offsets(cluster_count + 1, 0);
    for (const std::int32_t c : assignment) ++offsets[static_cast<std::size_t>(c) + 1];
    for (std::size_t c = 1; c <= cluster_count; ++c) offsets[c] += offsets[c - 1];
    std::vector<Vec3> members(n);
    {
        std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
        for (std::size_t i = 0; i < n; ++i) {
            members[cursor[static_cast<std::size_t>(assignment[i])]++] =
                cloud.points[i].position();
        }
    }

    InducingSet inducing;
    inducing.clusters.resize(cluster_count);
    for (std::size_t c = 0; c < cluster_count; ++c) {
        const std::span<const Vec3> span(members.data() + offsets[c], offsets[c + 1] - offsets[c]);
        auto [mu, sigma] = cluster_moments(span, epsilon);
        inducing.clusters[c] = Cluster{mu, sigma, static_cast<std::int64_t>(span.size())};
    }
    return inducing;
}

}  // namespace s2c
