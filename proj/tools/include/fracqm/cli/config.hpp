#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracqm/curve_geometry.hpp"
#include "fracqm/quantum_dynamics.hpp"

namespace fracqm::cli {

// Malformed or inconsistent configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CurveConfig {
    std::string kind = "koch";  // koch | line | cantor | custom
    int level = 5;
    int level_cap = 10;
    Vec3 start = Vec3::Zero();  // line only
    Vec3 end = Vec3::UnitX();
    std::size_t intervals = 256;
    double length = 1.0;                      // cantor only
    std::optional<GeneratorSpec> generator;  // custom only
};

struct DimensionConfig {
    int min_level = 2;
    int max_level = 7;
    double tol = 1e-3;
};

struct TimeSetConfig {
    std::string kind = "full";  // full | cantor
    int level = 4;
    double duration = 1.0;
    std::optional<double> alpha;  // default: log 2 / log 3 for cantor
};

struct StateConfig {
    std::string kind = "gaussian";  // gaussian | plane_wave
    std::optional<double> center;
    std::optional<double> sigma;
    double k0 = 0.0;
    Complex A{1.0, 0.0};
    Complex B{0.0, 0.0};
    std::optional<double> k;
    int mode = 1;  // plane wave with k = 2 pi mode / span when k is absent
};

struct PotentialConfig {
    std::string kind = "none";  // none | harmonic
    double omega = 1.0;
    std::optional<double> center;
};

struct RunConfig {
    double d_tau = 1e-3;
    std::size_t steps = 100;
    std::size_t stride = 10;
    Boundary boundary = Boundary::dirichlet;
    std::size_t xi_points = 0;
    PotentialConfig potential;
};

struct FieldConfig {
    std::string function = "sinS";  // S | S2 | sinS | cosS | expS | planewave
    double k = 1.0;
};

struct IntegrateConfig {
    std::optional<double> a;  // parameter bounds; default: whole curve
    std::optional<double> b;
};

struct ExperimentConfig {
    nlohmann::json raw;  // as parsed, for the manifest and hash
    CurveConfig curve;
    std::optional<double> alpha_space;  // empty: "auto"
    double p0 = 0.0;
    DimensionConfig dimension;
    std::optional<TimeSetConfig> time_set;
    PhysicalConstants physics;
    StateConfig state;
    RunConfig run;
    FieldConfig field;
    IntegrateConfig integrate;
    std::filesystem::path output = "fracqm_out";
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

// FNV-1a over the canonical (key-sorted, compact) JSON text.
std::uint64_t config_hash(const nlohmann::json& j);
std::string hex64(std::uint64_t x);

// Output directory, re-rooted under $FRACQM_OUTPUT_ROOT when that is set and
// the configured path is relative.
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg);

}  // namespace fracqm::cli
