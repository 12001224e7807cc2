// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0

// cubegen <subcommand> --config <path> [--out <dir>] [--seed <n>]

#include "cubegen/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

int main(int argc, char** argv) {
    CLI::App app{"Cubemap 360 video generation toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;

    for (const char* name : {"project", "plan", "context", "attend-bench", "generate", "metrics"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "Output directory (default: output_dir from the config)");
        sub->add_option("--seed", seed, "Overrides the config seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << nlohmann::json{{"error", {{"type", "usage"}, {"message", e.what()}}}}.dump() << "\n";
        return 2;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        cubegen::RunConfig cfg = cubegen::parse_config(config_path);
        if (seed) cfg.seed = *seed;
        return cubegen::run_subcommand(name, cfg, out_dir.empty() ? cfg.output_dir : out_dir);
    } catch (const std::exception& e) {
        std::cerr << cubegen::error_json(e).dump() << "\n";
        return dynamic_cast<const cubegen::ConfigError*>(&e) ? 2 : 1;
    }
}
