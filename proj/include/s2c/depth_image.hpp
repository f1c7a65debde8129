#pragma once

#include <cstddef>
#include <vector>

namespace s2c {

/// Row-major grid of metric depths. 0.0 marks a pixel with no information;
/// every valid value is strictly positive.
struct DepthImage {
    static constexpr double kInvalid = 0.0;

    int width = 0;
    int height = 0;
    std::vector<double> values;

    DepthImage() = default;
    DepthImage(int w, int h)
        : width(w), height(h), values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), kInvalid) {}

    std::size_t pixel_count() const { return values.size(); }

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    bool valid_at(int x, int y) const { return at(x, y) > 0.0; }

    bool same_shape(const DepthImage& other) const {
        return width == other.width && height == other.height;
    }
};

}  // namespace s2c
