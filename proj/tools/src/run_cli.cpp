#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "fracqm/cli/commands.hpp"
#include "fracqm/errors.hpp"

namespace fracqm::cli {

namespace {

using Command = std::vector<std::filesystem::path> (*)(const ExperimentConfig&, const std::filesystem::path&);

const std::map<std::string, std::pair<Command, const char*>>& commands() {
    static const std::map<std::string, std::pair<Command, const char*>> table{
        {"dimension", {cmd_dimension, "estimate the gamma-dimension of the curve"}},
        {"staircase", {cmd_staircase, "tabulate the staircase chart S(v)"}},
        {"derive", {cmd_derive, "apply the F-alpha derivative and Laplacian to a test field"}},
        {"integrate", {cmd_integrate, "F-alpha integral and antiderivative of a test field"}},
        {"evolve", {cmd_evolve, "Crank-Nicolson evolution with snapshots"}},
        {"continuity", {cmd_continuity, "continuity residual along an evolution"}},
    };
    return table;
}

int fail(int code, const std::string& kind, const std::string& msg) {
    std::cerr << "fracqm: " << kind << ": " << msg << "\n";
    return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Calculus and quantum dynamics on fractal curves"};
    app.require_subcommand(1);
    std::string config_path;
    for (const auto& [name, entry] : commands()) {
        auto* sub = app.add_subcommand(name, entry.second);
        sub->add_option("-c,--config", config_path, "experiment config (JSON)")->required();
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        const auto cfg = load_config(config_path);
        const auto out = resolve_output_dir(cfg);
        for (const auto& f : commands().at(name).first(cfg, out)) std::cout << (out / f).string() << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        return fail(kExitUsage, "config error", e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(kExitUsage, "config error", e.what());
    } catch (const DomainError& e) {
        return fail(kExitUsage, "precondition", e.what());
    } catch (const ResourceLimitError& e) {
        return fail(kExitUsage, "resource limit", e.what());
    } catch (const DegenerateCurveError& e) {
        return fail(kExitUsage, "precondition", e.what());
    } catch (const AlignmentError& e) {
        return fail(kExitUsage, "precondition", e.what());
    } catch (const NotOnCurveError& e) {
        return fail(kExitUsage, "precondition", e.what());
    } catch (const IoError& e) {
        return fail(kExitNumerical, "i/o error", e.what());
    } catch (const Error& e) {
        return fail(kExitNumerical, "numerical failure", e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(kExitNumerical, "i/o error", e.what());
    }
}

}  // namespace fracqm::cli
