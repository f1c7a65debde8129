#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "s2c/cli.hpp"
#include "s2c/config.hpp"

namespace {

std::optional<std::pair<int, int>> parse_resolution(const std::string& text) {
    if (text.empty()) return std::nullopt;
    int w = 0, h = 0;
    if (std::sscanf(text.c_str(), "%dx%d", &w, &h) != 2 || w <= 0 || h <= 0) {
        throw CLI::ValidationError("--resolution", "expected WxH, got '" + text + "'");
    }
    return std::make_pair(w, h);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse-to-continuous LiDAR depth densification pipeline"};
    app.require_subcommand(0, 1);

    bool print_config = false;
    app.add_flag("--print-config", print_config, "Print the default config document and exit");

    std::string config_path, resolution_text;
    std::optional<int> camera_index;
    std::optional<std::uint64_t> seed;

    // densify
    auto* densify = app.add_subcommand("densify", "Train an occupancy model and render it");
    s2c::cli::DensifyArgs densify_args;
    densify->add_option("scan", densify_args.scan_path, "Velodyne .bin scan")->required();
    densify->add_option("--cam-to-cam", densify_args.cam_to_cam_path, "KITTI cam_to_cam text")
        ->required();
    densify->add_option("--velo-to-cam", densify_args.velo_to_cam_path, "KITTI velo_to_cam text")
        ->required();
    densify->add_option("--config", config_path, "Pipeline config file");
    densify->add_option("--out", densify_args.out_path, "Output depth PNG")->required();
    densify->add_option("--camera", camera_index, "Rectified camera index (0-3)");
    densify->add_option("--seed", seed, "Run seed (overrides config)");
    densify->add_option("--resolution", resolution_text, "Output resolution WxH");

    // sparse-project
    auto* sparse = app.add_subcommand("sparse-project", "Project the raw scan (baseline)");
    s2c::cli::SparseProjectArgs sparse_args;
    sparse->add_option("scan", sparse_args.scan_path, "Velodyne .bin scan")->required();
    sparse->add_option("--cam-to-cam", sparse_args.cam_to_cam_path, "KITTI cam_to_cam text")
        ->required();
    sparse->add_option("--velo-to-cam", sparse_args.velo_to_cam_path, "KITTI velo_to_cam text")
        ->required();
    sparse->add_option("--config", config_path, "Pipeline config file");
    sparse->add_option("--out", sparse_args.out_path, "Output depth PNG")->required();
    sparse->add_option("--camera", camera_index, "Rectified camera index (0-3)");
    sparse->add_option("--resolution", resolution_text, "Output resolution WxH");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score predictions against ground truth");
    s2c::cli::EvaluateArgs evaluate_args;
    evaluate->add_option("pred_dir", evaluate_args.pred_dir, "Directory of prediction PNGs")
        ->required();
    evaluate->add_option("gt_dir", evaluate_args.gt_dir, "Directory of ground-truth PNGs")
        ->required();
    evaluate->add_option("--cap", evaluate_args.cap, "Depth cap in meters (50 or 80)")
        ->check(CLI::IsMember({50.0, 80.0}));
    std::string crop = "none";
    evaluate->add_option("--crop", crop, "Evaluation crop")->check(CLI::IsMember({"garg", "none"}));
    evaluate->add_flag("--per-image-average", evaluate_args.per_image_average,
                       "Average per-image metrics instead of pooling pixels");

    // stats
    auto* stats = app.add_subcommand("stats", "Valid-pixel statistics over a depth directory");
    s2c::cli::StatsArgs stats_args;
    stats->add_option("depth_dir", stats_args.depth_dir, "Directory of depth PNGs")->required();
    stats->add_option("--resolution", resolution_text,
                      "Also report fractions after nearest downsampling to WxH");
    stats->add_flag("--render", stats_args.render, "Write a colormap PNG next to each input");

    CLI11_PARSE(app, argc, argv);

    if (print_config) {
        std::cout << s2c::format_config(s2c::PipelineConfig{});
        return 0;
    }

    try {
        if (densify->parsed()) {
            densify_args.config_path = config_path;
            densify_args.camera_index = camera_index;
            densify_args.seed = seed;
            densify_args.resolution = parse_resolution(resolution_text);
            return s2c::cli::run_densify(densify_args);
        }
        if (sparse->parsed()) {
            sparse_args.config_path = config_path;
            sparse_args.camera_index = camera_index;
            sparse_args.resolution = parse_resolution(resolution_text);
            return s2c::cli::run_sparse_project(sparse_args);
        }
        if (evaluate->parsed()) {
            evaluate_args.garg_crop = crop == "garg";
            return s2c::cli::run_evaluate(evaluate_args);
        }
        if (stats->parsed()) {
            stats_args.resolution = parse_resolution(resolution_text);
            return s2c::cli::run_stats(stats_args);
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    }

    std::cout << app.help();
    return 0;
}
