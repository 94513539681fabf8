#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli_determinism.hpp"
#include "fracqm/cli/commands.hpp"
#include "fracqm/cli/config.hpp"
#include "fracqm/csv_io.hpp"

using namespace fracqm;
using namespace fracqm::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class CliRun : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        root_ = fs::temp_directory_path() / (std::string("fracqm_cli_") + info->name());
        fs::remove_all(root_);
        fs::create_directories(root_);
        ::setenv("FRACQM_OUTPUT_ROOT", root_.c_str(), 1);
    }
    void TearDown() override {
        ::unsetenv("FRACQM_OUTPUT_ROOT");
        fs::remove_all(root_);
    }

    int run(const std::string& sub, const std::string& config_text) {
        const fs::path cfg = root_ / "config.json";
        std::ofstream(cfg) << config_text;
        const std::string c = cfg.string();
        const char* argv[] = {"fracqm", sub.c_str(), "--config", c.c_str()};
        return run_cli(4, argv);
    }

    json read_json(const fs::path& rel) const { return json::parse(io::read_text_file(root_ / rel)); }
    std::string read(const fs::path& rel) const { return io::read_text_file(root_ / rel); }

    fs::path root_;
};

const double kKochDim = std::log(4.0) / std::log(3.0);

}  // namespace

TEST(Config, DefaultsAndValues) {
    const auto c = parse_config(json::parse(R"({"curve": {"kind": "line", "intervals": 10},
        "alpha_space": 1.5, "run": {"boundary": "periodic", "d_tau": 0.5},
        "state": {"kind": "plane_wave", "A": [1, 2]}})"));
    EXPECT_EQ(c.curve.kind, "line");
    EXPECT_EQ(c.curve.intervals, 10u);
    EXPECT_EQ(c.alpha_space, 1.5);
    EXPECT_EQ(c.run.boundary, Boundary::periodic);
    EXPECT_EQ(c.run.d_tau, 0.5);
    EXPECT_EQ(c.state.A, Complex(1, 2));
    EXPECT_EQ(c.physics.hbar, 1.0);
    EXPECT_FALSE(parse_config(json::parse(R"({"alpha_space": "auto"})")).alpha_space);
}

TEST(Config, SchemaErrors) {
    for (const char* bad : {
             R"({"curv": {}})",
             R"({"curve": {"kind": "spiral"}})",
             R"({"curve": {"level": "five"}})",
             R"({"curve": {"level": -1}})",
             R"({"curve": {"level": 11}})",
             R"({"curve": {"kind": "custom"}})",
             R"({"alpha_space": "guess"})",
             R"({"alpha_space": -1})",
             R"({"physics": {"hbar": 0}})",
             R"({"run": {"d_tau": 0}})",
             R"({"run": {"stride": 0}})",
             R"({"run": {"potential": {"kind": "quartic"}}})",
             R"({"time_set": {"T": -1}})",
             R"({"state": {"sigma": 0}})",
             R"({"field": {"function": "tanS"}})",
             R"({"output": ""})",
             R"([1, 2])",
         }) {
        EXPECT_THROW(parse_config(json::parse(bad)), ConfigError) << bad;
    }
}

TEST(Config, HashIgnoresKeyOrderAndWhitespace) {
    const auto a = json::parse(R"({"curve": {"kind": "koch", "level": 3}, "output": "x"})");
    const auto b = json::parse("{\"output\":\"x\",\n \"curve\":{\"level\":3,\"kind\":\"koch\"}}");
    const auto c = json::parse(R"({"curve": {"kind": "koch", "level": 4}, "output": "x"})");
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_NE(config_hash(a), config_hash(c));
    EXPECT_EQ(hex64(0xabcull), "0000000000000abc");
}

TEST(Config, OutputRootOverride) {
    ExperimentConfig c;
    c.output = "runs/a";
    ::unsetenv("FRACQM_OUTPUT_ROOT");
    EXPECT_EQ(resolve_output_dir(c), fs::path("runs/a"));
    ::setenv("FRACQM_OUTPUT_ROOT", "/tmp/base", 1);
    EXPECT_EQ(resolve_output_dir(c), fs::path("/tmp/base/runs/a"));
    c.output = "/abs/dir";
    EXPECT_EQ(resolve_output_dir(c), fs::path("/abs/dir"));
    ::unsetenv("FRACQM_OUTPUT_ROOT");
}

TEST_F(CliRun, UsageErrorsExitTwo) {
    const char* none[] = {"fracqm"};
    EXPECT_EQ(run_cli(1, none), kExitUsage);
    const char* unknown[] = {"fracqm", "plot", "--config", "x.json"};
    EXPECT_EQ(run_cli(4, unknown), kExitUsage);
    const char* noconfig[] = {"fracqm", "evolve"};
    EXPECT_EQ(run_cli(2, noconfig), kExitUsage);
    const char* missing[] = {"fracqm", "evolve", "--config", "/nonexistent/cfg.json"};
    EXPECT_EQ(run_cli(4, missing), kExitUsage);
    EXPECT_EQ(run("evolve", "{ not json"), kExitUsage);
    EXPECT_EQ(run("evolve", R"({"run": {"steps": 10, "dt": 0.1}})"), kExitUsage);
}

TEST_F(CliRun, HelpExitsZero) {
    const char* help[] = {"fracqm", "--help"};
    testing::internal::CaptureStdout();
    EXPECT_EQ(run_cli(2, help), kExitOk);
    EXPECT_NE(testing::internal::GetCapturedStdout().find("evolve"), std::string::npos);
}

TEST_F(CliRun, DimensionSingleSegmentWithThreeLevelsIsUsageError) {
    EXPECT_EQ(run("dimension", R"({"curve": {"kind": "koch", "level": 0}, "output": "d"})"), kExitUsage);
    EXPECT_FALSE(fs::exists(root_ / "d" / "dimension.json"));
}

TEST_F(CliRun, DimensionKochAndLine) {
    ASSERT_EQ(run("dimension", R"({"curve": {"kind": "koch", "level": 7}, "dimension": {"levels": [2, 7],
              "tol": 1e-3}, "output": "koch"})"), kExitOk);
    const auto k = read_json("koch/dimension.json");
    EXPECT_EQ(k["status"], "ok");
    EXPECT_NEAR(k["estimate"]["alpha_star"].get<double>(), kKochDim, 1e-3);
    EXPECT_EQ(k["estimate"]["levels_used"].size(), 6u);

    ASSERT_EQ(run("dimension", R"({"curve": {"kind": "line", "level": 6}, "output": "line"})"), kExitOk);
    EXPECT_NEAR(read_json("line/dimension.json")["estimate"]["alpha_star"].get<double>(), 1.0, 1e-3);
}

TEST_F(CliRun, DimensionFailureWritesDiagnostics) {
    // one contracting map: the pre-measure decays for every alpha > 0
    ASSERT_EQ(run("dimension", R"({"curve": {"kind": "custom", "level": 4,
              "maps": [{"scale": 0.001, "translation": [5, 0, 0]}]}, "output": "f"})"), kExitNumerical);
    const auto j = read_json("f/dimension.json");
    EXPECT_EQ(j["status"], "estimation_failure");
    EXPECT_FALSE(j["slopes_per_level"].empty());
}

TEST_F(CliRun, StaircaseLineIsIdentity) {
    ASSERT_EQ(run("staircase", R"({"curve": {"kind": "line", "intervals": 64}, "alpha_space": 1,
              "output": "s"})"), kExitOk);
    const auto st = io::parse_staircase_csv(read("s/staircase.csv"), 1.0);
    ASSERT_EQ(st.size(), 65u);
    for (std::size_t i = 0; i < st.size(); ++i) EXPECT_NEAR(st.value(i), st.param(i), 1e-15);
}

TEST_F(CliRun, StaircaseKochAutoAndCantorTime) {
    ASSERT_EQ(run("staircase", R"({"curve": {"kind": "koch", "level": 6}, "alpha_space": "auto",
              "dimension": {"levels": [2, 6]}, "time_set": {"kind": "cantor", "level": 5, "T": 2.0},
              "output": "k"})"), kExitOk);
    const auto meta = read_json("k/staircase.json");
    EXPECT_EQ(meta["alpha_space"]["source"], "auto");
    const double alpha = meta["alpha_space"]["alpha"].get<double>();
    EXPECT_NEAR(alpha, kKochDim, 5e-3);
    const auto st = io::parse_staircase_csv(read("k/staircase.csv"), alpha);
    for (std::size_t i = 1; i < st.size(); ++i) EXPECT_GT(st.value(i), st.value(i - 1));
    // 4^6 chords of length 3^-6 at the estimated exponent
    const double expect = std::pow(4.0 * std::pow(3.0, -alpha), 6) / std::tgamma(1 + alpha);
    EXPECT_NEAR(st.back(), expect, 1e-12 * expect);
    EXPECT_NEAR(st.back(), 1.0 / std::tgamma(1 + kKochDim), 2e-2);

    const double at = std::log(2.0) / std::log(3.0);
    const auto ts = io::parse_staircase_csv(read("k/time_staircase.csv"), at);
    EXPECT_TRUE(ts.has_plateau());
    EXPECT_NEAR(ts.back(), std::pow(2.0, at) / std::tgamma(1 + at), 1e-12);  // (T)^a / Gamma(1+a)
    EXPECT_EQ(io::parse_numeric_csv(read("k/time_set.csv"), 2).size(), 32u);
}

TEST_F(CliRun, DeriveKochSine) {
    ASSERT_EQ(run("derive", R"({"curve": {"kind": "koch", "level": 6}, "alpha_space": 1.2618595071429148,
              "field": {"function": "sinS", "k": 2}, "output": "d"})"), kExitOk);
    const auto j = read_json("d/derive.json");
    EXPECT_LT(j["derivative_max_error"].get<double>(), 1e-2);
    EXPECT_LT(j["laplacian_max_error"].get<double>(), 5e-2);
    const auto f = io::parse_field_csv(read("d/field.csv"), 1.2618595071429148);
    const auto d = io::parse_field_csv(read("d/derivative.csv"), 1.2618595071429148);
    EXPECT_TRUE(f.chart->same_knots(*d.chart));
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        EXPECT_EQ(f.values[i], Complex(std::sin(2 * f.chart->value(i)), 0.0));
    }
}

TEST_F(CliRun, DerivePlateauIsNumericalFailure) {
    EXPECT_EQ(run("derive", R"({"curve": {"kind": "cantor", "level": 4}, "alpha_space": 0.6309,
              "output": "p"})"), kExitNumerical);
}

TEST_F(CliRun, IntegrateConstantIsStaircaseDifference) {
    ASSERT_EQ(run("integrate", R"({"curve": {"kind": "koch", "level": 5}, "alpha_space": 1.2618595071429148,
              "field": {"function": "one"}, "integrate": {"a": 0.25, "b": 0.75}, "output": "i"})"), kExitOk);
    const auto j = read_json("i/integral.json");
    const double expect = j["S_b"].get<double>() - j["S_a"].get<double>();
    EXPECT_NEAR(j["value"]["re"].get<double>(), expect, 1e-12 * expect);
    EXPECT_EQ(j["value"]["im"].get<double>(), 0.0);
    EXPECT_EQ(run("integrate", R"({"curve": {"kind": "koch", "level": 5}, "alpha_space": 1.26,
              "integrate": {"a": 0.3}, "output": "j"})"), kExitUsage);  // 0.3 is not a node
}

TEST_F(CliRun, EvolvePlaneWavePhaseCheck) {
    ASSERT_EQ(run("evolve", R"({"curve": {"kind": "koch", "level": 5}, "alpha_space": 1.2618595071429148,
              "state": {"kind": "plane_wave", "mode": 1},
              "run": {"d_tau": 0.001, "steps": 200, "stride": 10, "boundary": "periodic", "xi_points": 512},
              "output": "pw"})"), kExitOk);
    const auto pc = read_json("pw/phase_check.json");
    const double k = pc["k"].get<double>();
    EXPECT_NEAR(pc["beta_expected"].get<double>(), k * k / 2, 1e-12 * k * k);
    EXPECT_LT(pc["relative_error"].get<double>(), 1e-3);

    const auto m = read_json("pw/manifest.json");
    EXPECT_EQ(m["config_hash"], hex64(config_hash(m["config"])));
    EXPECT_EQ(m["snapshots"].size(), 21u);
    EXPECT_LT(m["xi_norm_drift_max"].get<double>(), 1e-10);
    EXPECT_LT(m["probability_drift_max"].get<double>(), 1e-3);  // resampled onto 1025 knots
    for (const auto& s : m["snapshots"]) {
        const auto rows = io::parse_numeric_csv(read(fs::path("pw") / s["file"].get<std::string>()), 5);
        EXPECT_EQ(rows.size(), 1025u);
        for (const auto& r : rows) EXPECT_NEAR(r[4], 1.0, 1e-2);
    }
    EXPECT_EQ(io::parse_numeric_csv(read("pw/continuity.csv"), 4).size(), 19u);
}

TEST_F(CliRun, EvolveHarmonicGroundStateStationary) {
    ASSERT_EQ(run("evolve", R"({"curve": {"kind": "line", "start": [-8, 0, 0], "end": [8, 0, 0],
              "intervals": 1600}, "alpha_space": 1, "p0": 0.5,
              "state": {"kind": "gaussian", "center": 0, "sigma": 0.7071067811865476},
              "run": {"d_tau": 0.01, "steps": 100, "stride": 50,
                      "potential": {"kind": "harmonic", "omega": 1, "center": 0}},
              "output": "h"})"), kExitOk);
    const auto s = read_json("h/stationarity.json");
    EXPECT_LT(s["relative_density_change"].get<double>(), 1e-3);
    EXPECT_LT(s["probability_drift_max"].get<double>(), 1e-10);
    const auto snap = io::parse_numeric_csv(read("h/snapshots/snapshot_000100.csv"), 5);
    EXPECT_NEAR(snap[800][1], 0.0, 1e-12);  // S column centered by p0
}

TEST_F(CliRun, EvolveTimeSetMapsTauToPhysicalTime) {
    ASSERT_EQ(run("evolve", R"({"curve": {"kind": "line", "start": [-4, 0, 0], "end": [4, 0, 0],
              "intervals": 400}, "alpha_space": 1, "time_set": {"kind": "cantor", "level": 4, "T": 1},
              "run": {"d_tau": 0.01, "steps": 50, "stride": 25}, "output": "t"})"), kExitOk);
    const auto m = read_json("t/manifest.json");
    const auto ts = build_cantor_time(1.0, 4);
    for (const auto& s : m["snapshots"]) {
        EXPECT_EQ(s["t"].get<double>(), ts.staircase().inverse(s["tau"].get<double>()));
    }
    // tau beyond tau(T) is a precondition violation
    EXPECT_EQ(run("evolve", R"({"curve": {"kind": "line", "intervals": 100}, "alpha_space": 1,
              "time_set": {"kind": "full", "T": 0.5}, "run": {"d_tau": 0.01, "steps": 100},
              "output": "u"})"), kExitUsage);
}

TEST_F(CliRun, ContinuityResidualSmall) {
    ASSERT_EQ(run("continuity", R"({"curve": {"kind": "line", "start": [-6, 0, 0], "end": [6, 0, 0],
              "intervals": 1200}, "alpha_space": 1, "p0": 0.5,
              "state": {"kind": "gaussian", "center": -1, "sigma": 0.5, "k0": 2},
              "run": {"d_tau": 0.005, "steps": 60, "stride": 20}, "output": "c"})"), kExitOk);
    const auto rows = io::parse_numeric_csv(read("c/continuity.csv"), 4);
    ASSERT_EQ(rows.size(), 2u);  // tau = 0.1, 0.2; the last stride has no successor
    for (const auto& r : rows) {
        EXPECT_LT(r[1], 5e-3);
        EXPECT_NEAR(r[3], 1.0, 1e-8);
    }
    EXPECT_FALSE(fs::exists(root_ / "c" / "snapshots"));
}

TEST_F(CliRun, InProcessRepeatIsByteIdentical) {
    const std::string cfg = R"({"curve": {"kind": "koch", "level": 4}, "alpha_space": "auto",
        "dimension": {"levels": [2, 5]}, "state": {"kind": "gaussian", "k0": 3},
        "run": {"d_tau": 0.0005, "steps": 20, "stride": 10}, "output": "r"})";
    ASSERT_EQ(run("evolve", cfg), kExitOk);
    const auto first = cli_check::tree(root_ / "r");
    fs::remove_all(root_ / "r");
    ASSERT_EQ(run("evolve", cfg), kExitOk);
    EXPECT_EQ(cli_check::tree(root_ / "r"), first);
    EXPECT_GE(first.size(), 4u);
}

TEST(CliBinary, AllSubcommandsDeterministic) {
    const auto r = cli_check::run_all_twice(FRACQM_CLI_PATH);
    EXPECT_TRUE(r.ok) << r.detail;
}
