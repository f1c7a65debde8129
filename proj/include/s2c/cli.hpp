#pragma once

#include <optional>
#include <string>
#include <vector>

namespace s2c::cli {

/// Batch front ends for the four pipeline commands. Each returns a process
/// exit status (0 = every requested output written) and reports failures on
/// stderr with the pipeline stage that raised them.

struct DensifyArgs {
    std::string scan_path;
    std::string cam_to_cam_path;
    std::string velo_to_cam_path;
    std::string config_path;  // empty = defaults
    std::string out_path;
    std::optional<int> camera_index;            // overrides config
    std::optional<std::uint64_t> seed;          // overrides config
    std::optional<std::pair<int, int>> resolution;  // overrides config (w, h)
};

struct SparseProjectArgs {
    std::string scan_path;
    std::string cam_to_cam_path;
    std::string velo_to_cam_path;
    std::string config_path;
    std::string out_path;
    std::optional<int> camera_index;
    std::optional<std::pair<int, int>> resolution;
};

struct EvaluateArgs {
    std::string pred_dir;
    std::string gt_dir;
    double cap = 80.0;
    bool garg_crop = false;
    bool per_image_average = false;  // mean of per-image metrics instead of pixel pooling
};

struct StatsArgs {
    std::string depth_dir;
    std::optional<std::pair<int, int>> resolution;  // adds a downsampled column
    bool render = false;                            // colormap PNG next to each input
};

int run_densify(const DensifyArgs& args);
int run_sparse_project(const SparseProjectArgs& args);
int run_evaluate(const EvaluateArgs& args);
int run_stats(const StatsArgs& args);

}  // namespace s2c::cli
