// SPDX-License-Identifier: MIT
/**
 * @file thetaexp_cli.cpp
 * @brief Command-line front end: one subcommand per experiment, CSV or JSON out.
 *
 * Exit status: 0 success, 2 invalid configuration, 3 work budget exceeded,
 * 4 output failure. Failures print a one-line JSON error record on stderr.
 */

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

namespace cli = thetaexp::cli;
namespace report = thetaexp::report;

enum Exit : int { kOk = 0, kInvalid = 2, kResource = 3, kIo = 4 };

int fail(int code, const std::string& kind, const std::string& message) {
    report::Json err = report::Json::object();
    err["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << err.dump() << '\n';
    return code;
}

const char* describe(const std::string& name) {
    if (name == "digits") return "Digits of x";
    if (name == "convergents") return "Convergents of x with their error bounds";
    if (name == "invariance-check") return "Invariant measure against its preimage under T";
    if (name == "pf-contract") return "Contraction of the transfer operator on a test battery";
    if (name == "kuzmin-1d") return "Distribution of T^n from the uniform start";
    if (name == "kuzmin-2d") return "Planar distribution under the natural extension";
    if (name == "error-surface") return "Error term of the joint law on a grid";
    if (name == "sandwich") return "Lower and upper bounds on the error term";
    if (name == "bounds-table") return "Limits of the convergence-rate bounds";
    return "";
}

std::filesystem::path resolve_out(const std::string& out) {
    std::filesystem::path p(out);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("THETAEXP_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
            return std::filesystem::path(dir) / p;
        }
    }
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"theta-expansions: invariant measures, transfer operator and Gauss-Kuzmin experiments"};
    app.set_version_flag("--version", std::string(cli::kToolVersion));
    app.require_subcommand(1);

    cli::ExperimentConfig config;
    std::string out;
    bool timing = false;

    for (const auto& name : cli::commands()) {
        auto* sub = app.add_subcommand(name, describe(name));
        sub->add_option("--m", config.m, "Parameter m (comma-separated list)")->delimiter(',');
        sub->add_option("--n", config.n, "Iteration count / number of digits");
        sub->add_option("--x", config.x, "x coordinate in [0, theta]");
        sub->add_option("--y", config.y, "y coordinate in [0, theta]");
        sub->add_option("--grid", config.grid, "Grid points per axis for surfaces and checks");
        sub->add_option("--cells", config.cells, "Cells of 1-D grid functions");
        sub->add_option("--i-max", config.i_max, "Digit cutoff for explicit series (0: default)");
        sub->add_option("--samples", config.samples, "Monte Carlo samples");
        sub->add_option("--seed", config.seed, "Random seed");
        sub->add_option("--a", config.a, "Seeds a in [0, theta] (comma-separated list)")->delimiter(',');
        sub->add_option("--format", config.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", out, "Output file (default: stdout)");
        sub->add_flag("--timing", timing, "Record wall-clock duration in the metadata");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(kInvalid, "invalid_config", e.what());
    }

    const std::string command = app.get_subcommands().front()->get_name();
    report::RunArtifact artifact;
    try {
        const auto start = std::chrono::steady_clock::now();
        artifact = cli::run(command, config);
        if (timing) {
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
            artifact.meta["duration_s"] = dt.count();
        }
    } catch (const thetaexp::invalid_parameter& e) {
        return fail(kInvalid, "invalid_config", e.what());
    } catch (const thetaexp::resource_error& e) {
        return fail(kResource, "resource_budget", e.what());
    }

    const std::string text = report::render(artifact, config.format);
    if (out.empty()) {
        std::cout << text;
        std::cout.flush();
        return std::cout ? kOk : fail(kIo, "io", "failed to write standard output");
    }
    const auto path = resolve_out(out);
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        return fail(kIo, "io", "cannot open " + path.string() + " for writing");
    }
    f << text;
    f.close();
    if (!f) {
        return fail(kIo, "io", "failed writing " + path.string());
    }
    return kOk;
}
