// qwire: batch runner for star-graph scattering sweeps.
//
//   qwire run <config> [--out dir]
//   qwire preset <name> [--out dir]
//   qwire list-presets
//
// QWIRE_THREADS sets the worker count for grid sweeps. Exit codes: 0 ok,
// 1 computation failed, 2 bad config or command line.

#include "qwire/config.hpp"
#include "qwire/errors.hpp"
#include "qwire/run.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fmt/format.h>
#include <thread>

namespace {

unsigned thread_count() {
    if (const char* env = std::getenv("QWIRE_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || n < 1) {
            throw qwire::ConfigError(fmt::format("QWIRE_THREADS='{}' is not a positive integer", env));
        }
        return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void execute(const qwire::RunConfig& config, const std::string& out) {
    const auto report = qwire::run(config, out, thread_count());
    for (const auto& line : report.summary) fmt::print("{}: {}\n", config.name, line);
    for (const auto& f : report.files) fmt::print("wrote {}\n", f.string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scattering on star graphs: Argand diagrams, delay times, wavepackets"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out = ".";
    auto* run = app.add_subcommand("run", "run a config file");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--out", out, "output directory");

    std::string preset_name;
    auto* preset = app.add_subcommand("preset", "run a figure preset");
    preset->add_option("name", preset_name, "preset name")->required();
    preset->add_option("--out", out, "output directory");

    auto* list = app.add_subcommand("list-presets", "list figure presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*list) {
            for (const auto& p : qwire::presets()) fmt::print("{:<6} {}\n", p.name, p.description);
        } else if (*run) {
            execute(qwire::load_config(config_path), out);
        } else if (*preset) {
            execute(qwire::find_preset(preset_name).config, out);
        }
    } catch (const qwire::ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return 2;
    } catch (const qwire::InvalidGraph& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
