#include "s2c/losses.hpp"

#include <cmath>
#include <cstdlib>

#include "s2c/errors.hpp"

namespace s2c {

namespace {

void check_pair(const DepthImage& prediction, const DepthImage& ground_truth) {
    if (!prediction.same_shape(ground_truth)) {
        throw ShapeError("depth pair dimensions differ");
    }
}

std::size_t count_valid(const DepthImage& ground_truth) {
    std::size_t n = 0;
    for (const double v : ground_truth.values) n += v > 0.0;
    if (n == 0) throw EmptyMaskError("no valid ground-truth pixels");
    return n;
}

/// Log-residual map d = log y - log y*; NAN where the mask is off.
std::vector<double> log_residuals(const DepthImage& prediction, const DepthImage& ground_truth) {
    std::vector<double> d(prediction.pixel_count(), std::nan(""));
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (ground_truth.values[i] <= 0.0) continue;
        if (prediction.values[i] <= 0.0) {
            throw DomainError("nonpositive prediction at a valid pixel");
        }
        d[i] = std::log(prediction.values[i]) - std::log(ground_truth.values[i]);
    }
    return d;
}

}  // namespace

double loss_mse(const DepthImage& prediction, const DepthImage& ground_truth) {
    check_pair(prediction, ground_truth);
    const double n = static_cast<double>(count_valid(ground_truth));
    double total = 0.0;
    for (std::size_t i = 0; i < prediction.pixel_count(); ++i) {
        if (ground_truth.values[i] <= 0.0) continue;
        const double r = prediction.values[i] - ground_truth.values[i];
        total += r * r;
    }
    return total / n;
}

double loss_eigen(const DepthImage& prediction, const DepthImage& ground_truth, double lambda) {
    check_pair(prediction, ground_truth);
    const double n = static_cast<double>(count_valid(ground_truth));
    const auto d = log_residuals(prediction, ground_truth);

    double sum_sq = 0.0, sum = 0.0, grad_sq = 0.0;
    const int w = prediction.width, h = prediction.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double di = d[static_cast<std::size_t>(y) * w + x];
            if (std::isnan(di)) continue;
            sum_sq += di * di;
            sum += di;
            if (x + 1 < w) {
                const double right = d[static_cast<std::size_t>(y) * w + x + 1];
                if (!std::isnan(right)) {
                    const double g = right - di;
                    grad_sq += g * g;
                }
            }
            if (y + 1 < h) {
                const double below = d[static_cast<std::size_t>(y + 1) * w + x];
                if (!std::isnan(below)) {
                    const double g = below - di;
                    grad_sq += g * g;
                }
            }
        }
    }
    return sum_sq / n - lambda / (n * n) * sum * sum + grad_sq / n;
}

double loss_berhu(const DepthImage& prediction, const DepthImage& ground_truth) {
    check_pair(prediction, ground_truth);
    const double n = static_cast<double>(count_valid(ground_truth));

    double max_abs = 0.0;
    for (std::size_t i = 0; i < prediction.pixel_count(); ++i) {
        if (ground_truth.values[i] <= 0.0) continue;
        max_abs = std::max(max_abs, std::abs(prediction.values[i] - ground_truth.values[i]));
    }
    const double c = max_abs / 5.0;
    if (c == 0.0) return 0.0;

    double total = 0.0;
    for (std::size_t i = 0; i < prediction.pixel_count(); ++i) {
        if (ground_truth.values[i] <= 0.0) continue;
        const double x = prediction.values[i] - ground_truth.values[i];
        const double ax = std::abs(x);
        total += ax <= c ? ax : (x * x + c * c) / (2.0 * c);
    }
    return total / n;
}

GradientImage loss_gradient(LossKind kind, const DepthImage& prediction,
                            const DepthImage& ground_truth, double lambda) {
    check_pair(prediction, ground_truth);
    const double n = static_cast<double>(count_valid(ground_truth));
    GradientImage grad{prediction.width, prediction.height,
                       std::vector<double>(prediction.pixel_count(), 0.0)};

    switch (kind) {
        case LossKind::kMse: {
            for (std::size_t i = 0; i < prediction.pixel_count(); ++i) {
                if (ground_truth.values[i] <= 0.0) continue;
                grad.values[i] = 2.0 * (prediction.values[i] - ground_truth.values[i]) / n;
            }
            return grad;
        }
        case LossKind::kEigen: {
            const auto d = log_residuals(prediction, ground_truth);
            double sum = 0.0;
            for (const double di : d) {
                if (!std::isnan(di)) sum += di;
            }
            // dL/dd first, then chain through d = log y - log y*.
            std::vector<double> dd(d.size(), 0.0);
            const int w = prediction.width, h = prediction.height;
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    const std::size_t i = static_cast<std::size_t>(y) * w + x;
                    if (std::isnan(d[i])) continue;
                    dd[i] += 2.0 * d[i] / n - 2.0 * lambda / (n * n) * sum;
                    if (x + 1 < w && !std::isnan(d[i + 1])) {
                        const double g = d[i + 1] - d[i];
                        dd[i + 1] += 2.0 * g / n;
                        dd[i] -= 2.0 * g / n;
                    }
                    if (y + 1 < h && !std::isnan(d[i + w])) {
                        const double g = d[i + w] - d[i];
                        dd[i + w] += 2.0 * g / n;
                        dd[i] -= 2.0 * g / n;
                    }
                }
            }
            for (std::size_t i = 0; i < d.size(); ++i) {
                if (!std::isnan(d[i])) grad.values[i] = dd[i] / prediction.values[i];
            }
            return grad;
        }
        case LossKind::kBerhu: {
            double max_abs = 0.0;
            for (std::size_t i = 0; i < prediction.pixel_count(); ++i) {
                if (ground_truth.values[i] <= 0.0) continue;
                max_abs = std::max(max_abs, std::abs(prediction.values[i] - ground_truth.values[i]));
            }
            const double c = max_abs / 5.0;
            if (c == 0.0) return grad;
            for (std::size_t i = 0; i < prediction.pixel_count(); ++i) {
                if (ground_truth.values[i] <= 0.0) continue;
                const double x = prediction.values[i] - ground_truth.values[i];
                const double ax = std::abs(x);
                const double per_pixel =
                    ax <= c ? (x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0)) : x / c;
                grad.values[i] = per_pixel / n;
            }
            return grad;
        }
    }
    return grad;
}

}  // namespace s2c
