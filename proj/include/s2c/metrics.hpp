#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "s2c/depth_image.hpp"

namespace s2c {

/// Depth evaluation record over one image or a pixel pool.
struct MetricsReport {
    double abs_rel = 0.0;
    double sq_rel = 0.0;
    double rmse = 0.0;
    double rmse_log = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double delta3 = 0.0;
    std::int64_t valid_count = 0;
    double cap = 0.0;
};

/// Evaluates the standard seven depth metrics. Pixels with ground truth in
/// (0, cap] participate; predictions are clamped to [0.001, cap] first.
/// Thresholds are 1.25, 1.25^2, 1.25^3 on max(y/y*, y*/y).
MetricsReport eval_metrics(const DepthImage& prediction, const DepthImage& ground_truth,
                           double cap);

/// Central evaluation crop: rows [0.40810811*h, 0.99189189*h), columns
/// [0.03594771*w, 0.96405229*w), indices floored. Applies once per image.
DepthImage central_crop(const DepthImage& image);

/// Corner-aligned bilinear interpolation. A target pixel is invalid when any
/// of its (up to) four source neighbors is invalid.
DepthImage bilinear_resize(const DepthImage& image, int new_width, int new_height);

/// Pixel-pooled aggregation: identical to evaluating the concatenation of
/// all images. Throws ProtocolError when reports mix caps.
MetricsReport aggregate_reports(std::span<const MetricsReport> reports);

/// Unweighted per-image mean of each metric (alternative protocol).
MetricsReport average_reports(std::span<const MetricsReport> reports);

/// One-line `key=value` record.
std::string format_report(const MetricsReport& report, const std::string& label);

}  // namespace s2c
