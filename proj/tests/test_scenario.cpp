#include "nhwave/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

using namespace nhwave;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"(name: small
model: {variant: hatano-nelson, N: 40, t_l: 2, t_r: 0.2}
initial: {kind: delta, site: 20}
evolution:
  backend: precision-stepper
  precision_bits: 128
  times: {start: 0, stop: 4, step: 1}
analysis:
  ops: [velocities, edge_timestamps]
output: {directory: unused}
)";

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("scalar expressions") {
    CHECK(eval_scalar("0.25") == 0.25);
    CHECK(eval_scalar("pi/4") == doctest::Approx(M_PI / 4));
    CHECK(eval_scalar("-pi/2") == doctest::Approx(-M_PI / 2));
    CHECK(eval_scalar("sqrt(3)") == doctest::Approx(std::sqrt(3.0)));
    CHECK(eval_scalar("2*(1+0.5)") == 3.0);
    CHECK_THROWS(eval_scalar("pi/"));
    CHECK_THROWS(eval_scalar("foo"));
}

TEST_CASE("parse a scenario") {
    const ScenarioConfig cfg = parse_scenario(kSmall);
    CHECK(cfg.name == "small");
    CHECK(cfg.model.N == 40);
    CHECK(cfg.model.hn.t_r.text() == "0.2");
    CHECK(cfg.initial.kind == InitialKind::Delta);
    CHECK(cfg.initial.site == 20);
    CHECK(cfg.evolution.times.size() == 5);
    CHECK(cfg.evolution.backend == Backend::PrecisionStepper);
}

TEST_CASE("configuration errors name the key and line") {
    const std::string bad_site = "name: x\nmodel: {variant: hatano-nelson, N: 10, t_l: 2, t_r: 1}\n"
                                 "initial: {kind: delta, site: 11}\nevolution: {times: [1]}\n";
    try {
        parse_scenario(bad_site);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "initial.site");
        CHECK(e.line() == 3);
    }
    const std::string empty_times = "model: {variant: hatano-nelson, N: 10, t_l: 2, t_r: 1}\n"
                                    "initial: {kind: delta, site: 1}\nevolution: {times: []}\n";
    CHECK_THROWS_AS(parse_scenario(empty_times), ConfigError);
    const std::string dup_times = "model: {variant: hatano-nelson, N: 10, t_l: 2, t_r: 1}\n"
                                  "initial: {kind: delta, site: 1}\nevolution: {times: [1, 1]}\n";
    CHECK_THROWS_AS(parse_scenario(dup_times), ConfigError);
    try {
        parse_scenario("initial: {kind: delta, site: 1}\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "model");
    }
    const std::string spectral_disorder = "model: {variant: hatano-nelson, N: 10, t_l: 2, t_r: 1, disorder: {w: 0.1}}\n"
                                          "initial: {kind: delta, site: 1}\n"
                                          "evolution: {backend: spectral-transform, times: [1]}\n";
    CHECK_THROWS_AS(parse_scenario(spectral_disorder), ConfigError);
}

TEST_CASE("unknown keys warn, or fail under strict") {
    const std::string text = std::string(kSmall) + "extra: 1\n";
    std::vector<std::string> warnings;
    CHECK_NOTHROW(parse_scenario(text, false, &warnings));
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("extra") != std::string::npos);
    CHECK_THROWS_AS(parse_scenario(text, true), ConfigError);
}

TEST_CASE("every preset parses strictly") {
    CHECK(list_presets().size() == 12);
    for (const auto& p : list_presets()) {
        CAPTURE(p.name);
        CHECK_NOTHROW(parse_scenario(p.yaml, true));
        CHECK(find_preset(p.name) == &p);
    }
    CHECK(find_preset("nope") == nullptr);
}

TEST_CASE("precision assessment") {
    const ScenarioConfig fig4 = parse_scenario(find_preset("fig4")->yaml);
    const auto low = assess_precision(fig4, 53);
    CHECK(low.applicable);
    CHECK(!low.sufficient);
    CHECK(low.minimum_bits > 53);
    CHECK(assess_precision(fig4, 166).sufficient);
    const ScenarioConfig fig1 = parse_scenario(find_preset("fig1")->yaml);
    CHECK(!assess_precision(fig1, 53).applicable);
    CHECK(amplified_momentum(fig4.model) == doctest::Approx(-M_PI / 2));
}

TEST_CASE("predict writes the closed forms") {
    const ScenarioConfig cfg = parse_scenario(kSmall);
    const auto j = nlohmann::json::parse(predict_json(cfg));
    CHECK(j["predictions"]["velocities"]["v_h"].get<double>() == doctest::Approx(1.2649110640673517));
    CHECK(j["predictions"]["edge_timestamps"]["t1"].get<double>() == doctest::Approx(20 / 2.2));
}

TEST_CASE("runs are reproducible apart from the timestamp") {
    const fs::path base = fs::temp_directory_path() / "nhwave_test_repro";
    fs::remove_all(base);
    ScenarioConfig cfg = parse_scenario(kSmall);
    std::ostringstream log;
    RunOptions a, b;
    a.output_dir = (base / "a").string();
    b.output_dir = (base / "b").string();
    b.jobs = 2;
    REQUIRE(run_scenario(cfg, a, log) == 0);
    REQUIRE(run_scenario(cfg, b, log) == 0);
    for (const auto& e : fs::directory_iterator(base / "a")) {
        const std::string name = e.path().filename().string();
        CAPTURE(name);
        const std::string x = slurp(e.path());
        const std::string y = slurp(base / "b" / name);
        if (name.ends_with(".meta.json")) {
            auto jx = nlohmann::json::parse(x), jy = nlohmann::json::parse(y);
            jx.erase("timestamp");
            jy.erase("timestamp");
            CHECK(jx == jy);
        } else {
            CHECK(x == y);
        }
    }
    bool csv = false;
    for (const auto& e : fs::directory_iterator(base / "a")) csv = csv || e.path().extension() == ".csv";
    CHECK(csv);
    fs::remove_all(base);
}

TEST_CASE("run exit codes") {
    std::ostringstream log;
    ScenarioConfig cfg = parse_scenario(find_preset("fig4")->yaml);
    RunOptions opt;
    opt.precision_bits = 53;
    opt.output_dir = (fs::temp_directory_path() / "nhwave_test_prec").string();
    CHECK(run_scenario(cfg, opt, log) == 2);
    CHECK(log.str().find("--precision-bits") != std::string::npos);

    const fs::path blocker = fs::temp_directory_path() / "nhwave_test_blocker";
    { std::ofstream(blocker) << "x"; }
    ScenarioConfig small = parse_scenario(kSmall);
    RunOptions io;
    io.output_dir = (blocker / "sub").string();
    CHECK(run_scenario(small, io, log) == 3);
    fs::remove(blocker);
}
