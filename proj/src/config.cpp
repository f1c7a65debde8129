#include "s2c/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "s2c/errors.hpp"

namespace s2c {

namespace {

struct Field {
    std::function<void(PipelineConfig&, const std::string&)> set;
    std::function<std::string(const PipelineConfig&)> get;
};

std::string render_double(double value) {
    std::ostringstream out;
    out.precision(17);
    out << value;
    return out.str();
}

double to_double(const std::string& key, const std::string& raw) {
    double value = 0.0;
    const char* begin = raw.data();
    const char* end = raw.data() + raw.size();
    const auto [next, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || next != end || !std::isfinite(value)) {
        throw ParseError("config: bad value '" + raw + "' for " + key);
    }
    return value;
}

std::int64_t to_int(const std::string& key, const std::string& raw) {
    std::int64_t value = 0;
    const char* begin = raw.data();
    const char* end = raw.data() + raw.size();
    const auto [next, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || next != end) {
        throw ParseError("config: bad integer '" + raw + "' for " + key);
    }
    return value;
}

const std::map<std::string, Field>& field_table() {
    static const std::map<std::string, Field> table = [] {
        std::map<std::string, Field> fields;
        const auto add_double = [&fields](const std::string& key, double PipelineConfig::* member) {
            fields[key] = Field{
                [key, member](PipelineConfig& c, const std::string& raw) {
                    c.*member = to_double(key, raw);
                },
                [member](const PipelineConfig& c) { return render_double(c.*member); }};
        };
        const auto add_int = [&fields](const std::string& key, int PipelineConfig::* member) {
            fields[key] = Field{
                [key, member](PipelineConfig& c, const std::string& raw) {
                    c.*member = static_cast<int>(to_int(key, raw));
                },
                [member](const PipelineConfig& c) { return std::to_string(c.*member); }};
        };
        add_double("tau", &PipelineConfig::tau);
        add_double("d0", &PipelineConfig::d0);
        add_double("epsilon", &PipelineConfig::epsilon);
        add_double("free_spacing", &PipelineConfig::free_spacing);
        add_double("margin_origin", &PipelineConfig::margin_origin);
        add_double("margin_endpoint", &PipelineConfig::margin_endpoint);
        add_double("learning_rate", &PipelineConfig::learning_rate);
        add_int("epochs", &PipelineConfig::epochs);
        add_int("batch_size", &PipelineConfig::batch_size);
        add_double("l1_weight", &PipelineConfig::l1_weight);
        add_double("l2_weight", &PipelineConfig::l2_weight);
        fields["seed"] = Field{
            [](PipelineConfig& c, const std::string& raw) {
                c.seed = static_cast<std::uint64_t>(to_int("seed", raw));
            },
            [](const PipelineConfig& c) { return std::to_string(c.seed); }};
        add_double("cutoff_scale", &PipelineConfig::cutoff_scale);
        add_double("march_step", &PipelineConfig::march_step);
        add_double("march_t_min", &PipelineConfig::march_t_min);
        add_double("march_t_max", &PipelineConfig::march_t_max);
        add_double("march_threshold", &PipelineConfig::march_threshold);
        add_int("march_refine_iters", &PipelineConfig::march_refine_iters);
        add_int("camera_index", &PipelineConfig::camera_index);
        add_int("out_width", &PipelineConfig::out_width);
        add_int("out_height", &PipelineConfig::out_height);
        add_double("max_range", &PipelineConfig::max_range);
        return fields;
    }();
    return table;
}

std::string trim(const std::string& text) {
    std::size_t begin = text.find_first_not_of(" \t\r");
    std::size_t end = text.find_last_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    return text.substr(begin, end - begin + 1);
}

}  // namespace

void PipelineConfig::validate() const {
    if (!(tau > 0.0)) throw Error("config: tau must be > 0");
    if (!(d0 > 0.0)) throw Error("config: d0 must be > 0");
    if (!(epsilon > 0.0)) throw Error("config: epsilon must be > 0");
    if (!(free_spacing > 0.0)) throw Error("config: free_spacing must be > 0");
    if (margin_origin < 0.0 || margin_endpoint < 0.0) throw Error("config: negative margin");
    training().validate();
    if (!(cutoff_scale > 0.0)) throw Error("config: cutoff_scale must be > 0");
    if (!(march_step > 0.0)) throw Error("config: march_step must be > 0");
    if (!(march_t_min > 0.0 && march_t_min < march_t_max)) {
        throw Error("config: need 0 < march_t_min < march_t_max");
    }
    if (!(march_threshold > 0.0 && march_threshold < 1.0)) {
        throw Error("config: march_threshold must be in (0, 1)");
    }
    if (march_refine_iters < 0) throw Error("config: march_refine_iters must be >= 0");
    if (camera_index < 0 || camera_index > 3) throw Error("config: camera_index must be 0..3");
    if (out_width <= 0 || out_height <= 0) throw Error("config: output resolution must be positive");
    if (!(max_range > 0.0)) throw Error("config: max_range must be > 0");
}

PipelineConfig parse_config(const std::string& text) {
    PipelineConfig config;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config: expected 'key = value', got '" + stripped + "'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        const auto it = field_table().find(key);
        if (it == field_table().end()) throw ParseError("config: unknown key '" + key + "'");
        it->second.set(config, value);
    }
    config.validate();
    return config;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream input(path);
    if (!input) throw IoError("cannot open config " + path);
    std::stringstream buffer;
    buffer << input.rdbuf();
    return parse_config(buffer.str());
}

std::string format_config(const PipelineConfig& config) {
    std::ostringstream out;
    for (const auto& [key, field] : field_table()) {
        out << key << " = " << field.get(config) << "\n";
    }
    return out.str();
}

}  // namespace s2c
