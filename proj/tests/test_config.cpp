#include <doctest.h>

#include "s2c/config.hpp"
#include "s2c/errors.hpp"

using namespace s2c;

TEST_SUITE("config") {

TEST_CASE("defaults are self-consistent") {
    const PipelineConfig config;
    CHECK_NOTHROW(config.validate());
    CHECK(config.tau == 0.3);
    CHECK(config.d0 == 20.0);
    CHECK(config.max_range == 80.0);
    CHECK(config.march_threshold == 0.6);
}

TEST_CASE("round trip through the text document") {
    PipelineConfig config;
    config.tau = 0.45;
    config.epochs = 3;
    config.seed = 123456789;
    config.march_threshold = 0.55;
    config.out_width = 160;
    config.out_height = 128;
    const PipelineConfig parsed = parse_config(format_config(config));
    CHECK(parsed.tau == config.tau);
    CHECK(parsed.epochs == config.epochs);
    CHECK(parsed.seed == config.seed);
    CHECK(parsed.march_threshold == config.march_threshold);
    CHECK(parsed.out_width == config.out_width);
    CHECK(parsed.out_height == config.out_height);
}

TEST_CASE("comments and blank lines are tolerated") {
    const PipelineConfig parsed = parse_config(
        "# clustering\n"
        "tau = 0.5\n"
        "\n"
        "d0 = 25 # growth scale\n");
    CHECK(parsed.tau == 0.5);
    CHECK(parsed.d0 == 25.0);
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_config("taau = 0.5\n"), ParseError);
    CHECK_THROWS_AS(parse_config("tau 0.5\n"), ParseError);
    CHECK_THROWS_AS(parse_config("tau = fast\n"), ParseError);
}

TEST_CASE("constraint violations are caught at parse time") {
    CHECK_THROWS_AS(parse_config("tau = -1\n"), Error);
    CHECK_THROWS_AS(parse_config("epochs = 0\n"), Error);
    CHECK_THROWS_AS(parse_config("march_threshold = 1.5\n"), Error);
    CHECK_THROWS_AS(parse_config("march_t_min = 90\n"), Error);  // above t_max
    CHECK_THROWS_AS(parse_config("camera_index = 9\n"), Error);
}

TEST_CASE("sub-configs mirror the flat fields") {
    PipelineConfig config;
    config.free_spacing = 0.75;
    config.learning_rate = 0.05;
    config.cutoff_scale = 2.5;
    CHECK(config.sampling().free_spacing == 0.75);
    CHECK(config.training().learning_rate == 0.05);
    CHECK(config.kernel_settings().cutoff_scale == 2.5);
}

}  // TEST_SUITE
