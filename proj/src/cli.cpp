#include "s2c/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "s2c/config.hpp"
#include "s2c/densify.hpp"
#include "s2c/errors.hpp"
#include "s2c/io_depth.hpp"
#include "s2c/metrics.hpp"
#include "s2c/pointcloud.hpp"

namespace s2c::cli {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const char* stage, const std::string& message) {
    throw Error(std::string("stage ") + stage + ": " + message);
}

std::string read_text_file(const char* stage, const std::string& path) {
    std::ifstream input(path);
    if (!input) fail(stage, "cannot open " + path);
    std::stringstream buffer;
    buffer << input.rdbuf();
    return buffer.str();
}

PipelineConfig resolve_config(const std::string& config_path,
                              const std::optional<int>& camera_index,
                              const std::optional<std::uint64_t>& seed,
                              const std::optional<std::pair<int, int>>& resolution) {
    PipelineConfig config;
    if (!config_path.empty()) {
        config = parse_config(read_text_file("load-config", config_path));
    }
    if (camera_index) config.camera_index = *camera_index;
    if (seed) config.seed = *seed;
    if (resolution) {
        config.out_width = resolution->first;
        config.out_height = resolution->second;
    }
    config.validate();
    return config;
}

/// Loads the KITTI calibration pair and rescales it to the requested output
/// resolution (using S_rect when present, otherwise assuming the config
/// resolution is native).
CalibrationBundle load_scaled_calibration(const PipelineConfig& config,
                                          const std::string& cam_to_cam_path,
                                          const std::string& velo_to_cam_path) {
    const std::string cam_text = read_text_file("parse-calibration", cam_to_cam_path);
    const std::string velo_text = read_text_file("parse-calibration", velo_to_cam_path);
    CalibrationBundle calib = parse_calibration(cam_text, velo_text, config.camera_index);
    if (const auto native = parse_rect_size(cam_text, config.camera_index)) {
        const double sx = static_cast<double>(config.out_width) / native->first;
        const double sy = static_cast<double>(config.out_height) / native->second;
        calib = scale_calibration(calib, sx, sy);
    }
    return calib;
}

void write_summary(const std::string& out_path, const PipelineConfig& config,
                   const std::vector<std::pair<std::string, std::string>>& entries) {
    const std::string path = out_path + ".summary";
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail("write-output", "cannot open " + path);
    for (const auto& [key, value] : entries) out << key << "=" << value << "\n";
    std::istringstream config_lines(format_config(config));
    std::string line;
    while (std::getline(config_lines, line)) {
        const auto eq = line.find(" = ");
        out << "config." << line.substr(0, eq) << "=" << line.substr(eq + 3) << "\n";
    }
    if (!out) fail("write-output", "short write to " + path);
}

std::string render_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.9g", value);
    return buffer;
}

std::map<std::string, fs::path> png_files(const char* stage, const std::string& dir) {
    if (!fs::is_directory(dir)) fail(stage, dir + " is not a directory");
    std::map<std::string, fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png") {
            files[entry.path().filename().string()] = entry.path();
        }
    }
    return files;
}

/// Validity-preserving nearest downsample: target pixel takes the nearest
/// source pixel, valid or not.
DepthImage nearest_resize(const DepthImage& image, int new_width, int new_height) {
    DepthImage resized(new_width, new_height);
    for (int y = 0; y < new_height; ++y) {
        const int sy = std::min(
            image.height - 1,
            static_cast<int>(std::lround(static_cast<double>(y) * image.height / new_height)));
        for (int x = 0; x < new_width; ++x) {
            const int sx = std::min(
                image.width - 1,
                static_cast<int>(std::lround(static_cast<double>(x) * image.width / new_width)));
            resized.at(x, y) = image.at(sx, sy);
        }
    }
    return resized;
}

template <typename Fn>
int guarded(const char* command, Fn&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        std::cerr << command << ": " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int run_densify(const DensifyArgs& args) {
    return guarded("densify", [&]() -> int {
        const auto start = std::chrono::steady_clock::now();

        const PipelineConfig config =
            resolve_config(args.config_path, args.camera_index, args.seed, args.resolution);
        PointCloud cloud;
        try {
            cloud = load_velodyne_bin(args.scan_path);
        } catch (const Error& e) {
            fail("read-scan", e.what());
        }
        const CalibrationBundle calib =
            load_scaled_calibration(config, args.cam_to_cam_path, args.velo_to_cam_path);

        DensifyResult result;
        try {
            result = densify_depth_image(cloud, calib, config.out_width, config.out_height,
                                         march_params(config), config);
        } catch (const Error& e) {
            fail("densify", e.what());
        }
        try {
            write_depth_png(result.image, args.out_path);
        } catch (const Error& e) {
            fail("write-output", e.what());
        }

        const double wall = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start).count();
        write_summary(args.out_path, config,
                      {{"command", "densify"},
                       {"scan", args.scan_path},
                       {"input_points", std::to_string(result.stats.input_points)},
                       {"frustum_points", std::to_string(result.stats.frustum_points)},
                       {"cluster_count", std::to_string(result.stats.cluster_count)},
                       {"sample_count", std::to_string(result.stats.sample_count)},
                       {"initial_loss", render_double(result.stats.initial_loss)},
                       {"final_loss", render_double(result.stats.final_loss)},
                       {"valid_fraction", render_double(result.stats.valid_fraction)},
                       {"train_seconds", render_double(result.stats.train_seconds)},
                       {"render_seconds", render_double(result.stats.render_seconds)},
                       {"wall_time_s", render_double(wall)}});
        std::cout << "densify: wrote " << args.out_path << " (valid fraction "
                  << render_double(result.stats.valid_fraction) << ")\n";
        return 0;
    });
}

int run_sparse_project(const SparseProjectArgs& args) {
    return guarded("sparse-project", [&]() -> int {
        const auto start = std::chrono::steady_clock::now();

        const PipelineConfig config =
            resolve_config(args.config_path, args.camera_index, std::nullopt, args.resolution);
        PointCloud cloud;
        try {
            cloud = load_velodyne_bin(args.scan_path);
        } catch (const Error& e) {
            fail("read-scan", e.what());
        }
        const CalibrationBundle calib =
            load_scaled_calibration(config, args.cam_to_cam_path, args.velo_to_cam_path);

        const PointCloud in_frustum = filter_to_frustum(cloud, calib, config.out_width,
                                                        config.out_height, config.max_range);
        const DepthImage image =
            project_sparse(in_frustum, calib, config.out_width, config.out_height);
        try {
            write_depth_png(image, args.out_path);
        } catch (const Error& e) {
            fail("write-output", e.what());
        }

        const double wall = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start).count();
        write_summary(args.out_path, config,
                      {{"command", "sparse-project"},
                       {"scan", args.scan_path},
                       {"input_points", std::to_string(cloud.size())},
                       {"frustum_points", std::to_string(in_frustum.size())},
                       {"valid_fraction", render_double(valid_fraction(image))},
                       {"wall_time_s", render_double(wall)}});
        std::cout << "sparse-project: wrote " << args.out_path << " (valid fraction "
                  << render_double(valid_fraction(image)) << ")\n";
        return 0;
    });
}

int run_evaluate(const EvaluateArgs& args) {
    return guarded("evaluate", [&]() -> int {
        const auto pred_files = png_files("evaluate", args.pred_dir);
        const auto gt_files = png_files("evaluate", args.gt_dir);

        std::vector<std::string> missing;
        for (const auto& [name, path] : gt_files) {
            if (!pred_files.count(name)) missing.push_back("prediction " + name);
        }
        for (const auto& [name, path] : pred_files) {
            if (!gt_files.count(name)) missing.push_back("ground truth " + name);
        }
        if (!missing.empty()) {
            std::string joined;
            for (const auto& name : missing) joined += " " + name;
            fail("evaluate", "mismatched file sets: missing" + joined);
        }
        if (gt_files.empty()) fail("evaluate", "no png pairs found");

        std::vector<MetricsReport> reports;
        for (const auto& [name, gt_path] : gt_files) {
            DepthImage pred = read_depth_png(pred_files.at(name).string());
            DepthImage gt = read_depth_png(gt_path.string());
            if (!pred.same_shape(gt)) {
                pred = bilinear_resize(pred, gt.width, gt.height);
            }
            if (args.garg_crop) {
                pred = central_crop(pred);
                gt = central_crop(gt);
            }
            const MetricsReport report = eval_metrics(pred, gt, args.cap);
            reports.push_back(report);
            std::cout << format_report(report, "image=" + name) << "\n";
        }
        const MetricsReport summary = args.per_image_average
                                          ? average_reports(reports)
                                          : aggregate_reports(reports);
        std::cout << format_report(summary,
                                   args.per_image_average ? "per-image-average" : "pooled")
                  << "\n";
        return 0;
    });
}

int run_stats(const StatsArgs& args) {
    return guarded("stats", [&]() -> int {
        const auto files = png_files("stats", args.depth_dir);
        if (files.empty()) fail("stats", "no png files in " + args.depth_dir);

        double native_sum = 0.0, resized_sum = 0.0;
        for (const auto& [name, path] : files) {
            const DepthImage image = read_depth_png(path.string());
            const double native = valid_fraction(image);
            native_sum += native;
            std::cout << "file=" << name << " native=" << render_double(native);
            if (args.resolution) {
                const DepthImage resized =
                    nearest_resize(image, args.resolution->first, args.resolution->second);
                const double fraction = valid_fraction(resized);
                resized_sum += fraction;
                std::cout << " resized=" << render_double(fraction);
            }
            std::cout << "\n";
            if (args.render) {
                const fs::path out = fs::path(path).replace_extension(".vis.png");
                write_colormap_png(image, out.string());
            }
        }
        const double count = static_cast<double>(files.size());
        std::cout << "average native=" << render_double(native_sum / count);
        if (args.resolution) {
            std::cout << " resized=" << render_double(resized_sum / count);
        }
        std::cout << " files=" << files.size() << "\n";
        return 0;
    });
}

}  // namespace s2c::cli
