// Batch front end: idbounds_cli CONFIG.json [--seed S] [--count N] [--out DIR]
#include "idbounds/config.hpp"
#include "idbounds/errors.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Evaluate, simulate and verify deviation bounds from a JSON config"};
    std::string config_path;
    idbounds::cli::Overrides ov;
    std::uint64_t seed = 0;
    std::size_t count = 0;
    std::string out;
    bool print_config = false;
    app.add_option("config", config_path, "run configuration (JSON)")->required();
    auto* seed_opt = app.add_option("--seed", seed, "override mc.seed");
    auto* count_opt = app.add_option("--count", count, "override mc.count");
    auto* out_opt = app.add_option("--out", out, "override out.dir");
    app.add_flag("--print-config", print_config, "echo the effective config and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : idbounds::cli::kExitError;
    }
    if (*seed_opt) ov.seed = seed;
    if (*count_opt) ov.count = count;
    if (*out_opt) ov.out = out;
    try {
        auto cfg = idbounds::cli::effective_config(idbounds::cli::load_config(config_path), ov);
        if (print_config) {
            std::cout << cfg.dump(2) << "\n";
            return 0;
        }
        return idbounds::cli::run_main(cfg, std::cerr, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return idbounds::cli::kExitError;
    }
}
