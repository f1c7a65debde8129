#include "s2c/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "s2c/errors.hpp"

namespace s2c {

namespace {
constexpr double kPredictionFloor = 0.001;  // keeps log metrics finite
constexpr double kCropTop = 0.40810811, kCropBottom = 0.99189189;
constexpr double kCropLeft = 0.03594771, kCropRight = 0.96405229;
}  // namespace

MetricsReport eval_metrics(const DepthImage& prediction, const DepthImage& ground_truth,
                           double cap) {
    if (!prediction.same_shape(ground_truth)) throw ShapeError("metrics: dimensions differ");
    if (!(cap > 0.0)) throw Error("metrics: cap must be positive");

    MetricsReport report;
    report.cap = cap;
    double abs_rel = 0.0, sq_rel = 0.0, sq = 0.0, sq_log = 0.0;
    std::int64_t d1 = 0, d2 = 0, d3 = 0, n = 0;
    const double thr1 = 1.25, thr2 = 1.25 * 1.25, thr3 = 1.25 * 1.25 * 1.25;
    for (std::size_t i = 0; i < ground_truth.pixel_count(); ++i) {
        const double gt = ground_truth.values[i];
        if (gt <= 0.0 || gt > cap) continue;
        const double pred = std::clamp(prediction.values[i], kPredictionFloor, cap);
        const double diff = pred - gt;
        abs_rel += std::abs(diff) / gt;
        sq_rel += diff * diff / gt;
        sq += diff * diff;
        const double log_diff = std::log(pred) - std::log(gt);
        sq_log += log_diff * log_diff;
        const double ratio = std::max(pred / gt, gt / pred);
        d1 += ratio < thr1;
        d2 += ratio < thr2;
        d3 += ratio < thr3;
        ++n;
    }
    if (n == 0) throw EmptyMaskError("metrics: no valid pixels under cap");
    const double inv_n = 1.0 / static_cast<double>(n);
    report.abs_rel = abs_rel * inv_n;
    report.sq_rel = sq_rel * inv_n;
    report.rmse = std::sqrt(sq * inv_n);
    report.rmse_log = std::sqrt(sq_log * inv_n);
    report.delta1 = static_cast<double>(d1) * inv_n;
    report.delta2 = static_cast<double>(d2) * inv_n;
    report.delta3 = static_cast<double>(d3) * inv_n;
    report.valid_count = n;
    return report;
}

DepthImage central_crop(const DepthImage& image) {
    const int row0 = static_cast<int>(kCropTop * image.height);
    const int row1 = static_cast<int>(kCropBottom * image.height);
    const int col0 = static_cast<int>(kCropLeft * image.width);
    const int col1 = static_cast<int>(kCropRight * image.width);
    DepthImage cropped(std::max(col1 - col0, 0), std::max(row1 - row0, 0));
    for (int y = 0; y < cropped.height; ++y) {
        for (int x = 0; x < cropped.width; ++x) {
            cropped.at(x, y) = image.at(col0 + x, row0 + y);
        }
    }
    return cropped;
}

DepthImage bilinear_resize(const DepthImage& image, int new_width, int new_height) {
    if (new_width <= 0 || new_height <= 0) throw ShapeError("resize: nonpositive target size");
    if (image.width <= 0 || image.height <= 0) throw ShapeError("resize: empty source");
    DepthImage resized(new_width, new_height);
    const double sx = new_width > 1 ? static_cast<double>(image.width - 1) / (new_width - 1) : 0.0;
    const double sy =
        new_height > 1 ? static_cast<double>(image.height - 1) / (new_height - 1) : 0.0;
    for (int y = 0; y < new_height; ++y) {
        const double fy = y * sy;
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, image.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < new_width; ++x) {
            const double fx = x * sx;
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, image.width - 1);
            const double wx = fx - x0;
            const double v00 = image.at(x0, y0), v10 = image.at(x1, y0);
            const double v01 = image.at(x0, y1), v11 = image.at(x1, y1);
            // Invalid neighbors poison the output, but only when they carry
            // interpolation weight; exact-integer positions keep identity
            // resizes exact.
            const double w00 = (1.0 - wx) * (1.0 - wy), w10 = wx * (1.0 - wy);
            const double w01 = (1.0 - wx) * wy, w11 = wx * wy;
            if ((w00 > 0.0 && v00 <= 0.0) || (w10 > 0.0 && v10 <= 0.0) ||
                (w01 > 0.0 && v01 <= 0.0) || (w11 > 0.0 && v11 <= 0.0)) {
                continue;
            }
            resized.at(x, y) = w00 * v00 + w10 * v10 + w01 * v01 + w11 * v11;
        }
    }
    return resized;
}

MetricsReport aggregate_reports(std::span<const MetricsReport> reports) {
    if (reports.empty()) throw EmptyInputError("aggregate: no reports");
    MetricsReport pooled;
    pooled.cap = reports.front().cap;
    double sq = 0.0, sq_log = 0.0;
    for (const MetricsReport& report : reports) {
        if (report.cap != pooled.cap) throw ProtocolError("aggregate: mixed caps");
        const double n = static_cast<double>(report.valid_count);
        pooled.abs_rel += report.abs_rel * n;
        pooled.sq_rel += report.sq_rel * n;
        sq += report.rmse * report.rmse * n;
        sq_log += report.rmse_log * report.rmse_log * n;
        pooled.delta1 += report.delta1 * n;
        pooled.delta2 += report.delta2 * n;
        pooled.delta3 += report.delta3 * n;
        pooled.valid_count += report.valid_count;
    }
    const double inv_total = 1.0 / static_cast<double>(pooled.valid_count);
    pooled.abs_rel *= inv_total;
    pooled.sq_rel *= inv_total;
    pooled.rmse = std::sqrt(sq * inv_total);
    pooled.rmse_log = std::sqrt(sq_log * inv_total);
    pooled.delta1 *= inv_total;
    pooled.delta2 *= inv_total;
    pooled.delta3 *= inv_total;
    return pooled;
}

MetricsReport average_reports(std::span<const MetricsReport> reports) {
    if (reports.empty()) throw EmptyInputError("average: no reports");
    MetricsReport mean;
    mean.cap = reports.front().cap;
    for (const MetricsReport& report : reports) {
        if (report.cap != mean.cap) throw ProtocolError("average: mixed caps");
        mean.abs_rel += report.abs_rel;
        mean.sq_rel += report.sq_rel;
        mean.rmse += report.rmse;
        mean.rmse_log += report.rmse_log;
        mean.delta1 += report.delta1;
        mean.delta2 += report.delta2;
        mean.delta3 += report.delta3;
        mean.valid_count += report.valid_count;
    }
    const double inv = 1.0 / static_cast<double>(reports.size());
    mean.abs_rel *= inv;
    mean.sq_rel *= inv;
    mean.rmse *= inv;
    mean.rmse_log *= inv;
    mean.delta1 *= inv;
    mean.delta2 *= inv;
    mean.delta3 *= inv;
    return mean;
}

std::string format_report(const MetricsReport& report, const std::string& label) {
    char line[320];
    std::snprintf(line, sizeof(line),
                  "%s cap=%.0f abs_rel=%.6f sq_rel=%.6f rmse=%.6f rmse_log=%.6f "
                  "delta1=%.6f delta2=%.6f delta3=%.6f valid=%lld",
                  label.c_str(), report.cap, report.abs_rel, report.sq_rel, report.rmse,
                  report.rmse_log, report.delta1, report.delta2, report.delta3,
                  static_cast<long long>(report.valid_count));
    return line;
}

}  // namespace s2c
