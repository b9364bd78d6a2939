#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "discdrift/cli.hpp"
#include "discdrift/errors.hpp"
#include "discdrift/model.hpp"

namespace {

int list_catalog() {
    for (const auto name : discdrift::catalog_names()) {
        const auto spec = discdrift::catalog(name, 0.0);
        const auto direction = discdrift::classify(spec.drift);
        const auto values = spec.drift.values();
        std::cout << name << "\tbreakpoint=" << spec.drift.breakpoints()[0] << "\tvalues=["
                  << values[0] << ", " << values[1] << "]\t" << discdrift::to_string(direction.kind)
                  << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo experiments for SDEs with piecewise-constant drift"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a JSON config");
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    unsigned threads = 0;
    run_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed, "Override master_seed");
    auto* out_opt = run_cmd->add_option("--out", out_dir, "Override output_dir");
    run_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

    app.add_subcommand("catalog", "List the built-in test equations");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("catalog")) return list_catalog();

    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read " << config_path << '\n';
            return 2;
        }
        std::ostringstream text;
        text << in.rdbuf();
        auto cfg = discdrift::cli::parse_config(text.str());

        discdrift::cli::RunOptions options;
        if (*seed_opt) options.seed = seed;
        if (*out_opt) options.output_dir = out_dir;
        options.threads = threads;
        const auto result = discdrift::cli::run(std::move(cfg), options);
        for (const auto& file : result.files) std::cout << file.string() << '\n';
        return 0;
    } catch (const discdrift::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
