#pragma once

#include <cstdint>
#include <string>

#include "s2c/hilbert_map.hpp"

namespace s2c {

/// Every tunable of the densification pipeline with its default, parsed
/// from and printed to a flat `key = value` text document. Unknown keys are
/// rejected so stale configs fail loudly.
struct PipelineConfig {
    // Clustering.
    double tau = 0.3;      // base cluster radius, meters
    double d0 = 20.0;      // radius growth length scale, meters
    double epsilon = 1e-3; // covariance ridge, meters^2

    // Occupancy sample generation.
    double free_spacing = 0.5;
    double margin_origin = 1.0;
    double margin_endpoint = 0.5;

    // Weight training.
    double learning_rate = 0.1;
    int epochs = 10;
    int batch_size = 256;
    double l1_weight = 1e-4;
    double l2_weight = 1e-4;
    std::uint64_t seed = 42;

    // Kernel sparsification.
    double cutoff_scale = 3.0;

    // Ray marching.
    double march_step = 0.1;
    double march_t_min = 1.0;
    double march_t_max = 80.0;
    double march_threshold = 0.6;
    int march_refine_iters = 8;

    // Camera / output.
    int camera_index = 2;
    int out_width = 1242;
    int out_height = 375;
    double max_range = 80.0;

    SamplingConfig sampling() const { return {free_spacing, margin_origin, margin_endpoint}; }
    TrainingConfig training() const {
        return {learning_rate, epochs, batch_size, l1_weight, l2_weight, seed};
    }
    KernelSettings kernel_settings() const { return {tau, d0, cutoff_scale}; }

    /// Throws Error on any constraint violation.
    void validate() const;
};

/// Parses a config document, starting from defaults. Throws ParseError on
/// unknown keys or malformed values.
PipelineConfig parse_config(const std::string& text);

PipelineConfig load_config(const std::string& path);

/// Canonical `key = value` rendering of every field.
std::string format_config(const PipelineConfig& config);

}  // namespace s2c
