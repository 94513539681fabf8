#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fracqm/cli/config.hpp"

namespace fracqm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

// Curve described by `cfg.curve` at an arbitrary level (line: bisection
// generator, so levels are comparable for the dimension estimate).
CurveGrid curve_at_level(const CurveConfig& curve, int level);
CurveGrid build_curve(const CurveConfig& curve);

// Every command writes into `out` and returns the files it wrote, relative
// to `out`, in write order.
std::vector<std::filesystem::path> cmd_dimension(const ExperimentConfig& cfg,
                                                 const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_staircase(const ExperimentConfig& cfg,
                                                 const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_derive(const ExperimentConfig& cfg,
                                              const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_integrate(const ExperimentConfig& cfg,
                                                 const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_evolve(const ExperimentConfig& cfg,
                                              const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_continuity(const ExperimentConfig& cfg,
                                                  const std::filesystem::path& out);

const std::vector<std::string>& subcommand_names();

// Full command line: `fracqm <subcommand> --config FILE`. Returns the exit
// code; diagnostics go to stderr.
int run_cli(int argc, const char* const* argv);

}  // namespace fracqm::cli
