#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "s2c/geometry.hpp"

namespace s2c {

/// Uniform hash grid over 3D points supporting incremental insertion and
/// ball queries. Candidate enumeration visits every cell intersecting the
/// query ball, so correctness does not depend on the radius/cell ratio.
class SpatialHashGrid {
public:
    explicit SpatialHashGrid(double cell_size = 1.0)
        : cell_(cell_size), inv_cell_(1.0 / cell_size) {}

    std::size_t size() const { return points_.size(); }
    double cell_size() const { return cell_; }

    /// Adds a point; its index is the insertion order.
    std::int32_t insert(const Vec3& p) {
        const auto index = static_cast<std::int32_t>(points_.size());
        points_.push_back(p);
        cells_[cell_key(p)].push_back(index);
        return index;
    }

    /// Calls visit(index, squared_distance) for every stored point within
    /// `radius` of `center`.
    template <typename Visitor>
    void for_each_in_ball(const Vec3& center, double radius, Visitor&& visit) const {
        if (points_.empty() || radius <= 0.0) return;
        const double r2 = radius * radius;
        const int x0 = coord(center.x() - radius), x1 = coord(center.x() + radius);
        const int y0 = coord(center.y() - radius), y1 = coord(center.y() + radius);
        const int z0 = coord(center.z() - radius), z1 = coord(center.z() + radius);
        for (int ix = x0; ix <= x1; ++ix) {
            for (int iy = y0; iy <= y1; ++iy) {
                for (int iz = z0; iz <= z1; ++iz) {
                    const auto it = cells_.find(pack(ix, iy, iz));
                    if (it == cells_.end()) continue;
                    for (const std::int32_t index : it->second) {
                        const double d2 = (points_[index] - center).squaredNorm();
                        if (d2 <= r2) visit(index, d2);
                    }
                }
            }
        }
    }

    const Vec3& point(std::int32_t index) const { return points_[index]; }

private:
    int coord(double x) const { return static_cast<int>(std::floor(x * inv_cell_)); }

    std::int64_t cell_key(const Vec3& p) const {
        return pack(coord(p.x()), coord(p.y()), coord(p.z()));
    }

    // 21 bits per axis covers +/- 1e6 cells.
    static std::int64_t pack(int ix, int iy, int iz) {
        const auto mask = [](int c) {
            return static_cast<std::int64_t>(static_cast<std::uint32_t>(c) & 0x1fffff);
        };
        return mask(ix) | (mask(iy) << 21) | (mask(iz) << 42);
    }

    double cell_;
    double inv_cell_;
    std::unordered_map<std::int64_t, std::vector<std::int32_t>> cells_;
    std::vector<Vec3> points_;
};

}  // namespace s2c
