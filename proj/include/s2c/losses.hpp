#pragma once

#include <vector>

#include "s2c/depth_image.hpp"

namespace s2c {

/// Training losses over depth maps. Every loss is a mean over the pixels
/// where the ground truth is valid; predictions at those pixels are used
/// as stored. All three vanish when prediction equals ground truth on the
/// mask.
enum class LossKind { kMse, kEigen, kBerhu };

/// Gradient of a loss with respect to the prediction map. Entries at
/// masked-out pixels are zero. Values are signed, so this is not a
/// DepthImage.
struct GradientImage {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Mean squared difference over the valid mask.
double loss_mse(const DepthImage& prediction, const DepthImage& ground_truth);

/// Scale-invariant log-depth loss with forward-difference gradient matching:
/// (1/n) sum d_i^2 - (lambda/n^2) (sum d_i)^2
///   + (1/n) sum [(dx d_i)^2 + (dy d_i)^2],   d_i = log y_i - log y*_i.
/// Spatial differences only count where both pixels of the pair are valid.
/// Throws DomainError if a masked-in prediction is not positive.
double loss_eigen(const DepthImage& prediction, const DepthImage& ground_truth,
                  double lambda = 0.5);

/// Reversed Huber penalty with adaptive threshold c = max_i |y_i - y*_i| / 5:
/// |x| up to c, (x^2 + c^2) / (2c) beyond it; mean over the mask. Zero when
/// c == 0.
double loss_berhu(const DepthImage& prediction, const DepthImage& ground_truth);

/// Analytic gradient of the selected loss w.r.t. the prediction. BerHu's c
/// is held constant during differentiation; lambda only affects kEigen.
GradientImage loss_gradient(LossKind kind, const DepthImage& prediction,
                            const DepthImage& ground_truth, double lambda = 0.5);

}  // namespace s2c
