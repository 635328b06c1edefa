#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bubble/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"bubble-hjb: stationary HJB consensus-value solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> n_override;

    const char* names[] = {"solve",          "eigen",    "evolve",    "branch",
                           "verify-control", "scenario", "verify-all"};
    std::string chosen;
    for (const char* name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "key=value config file")->required();
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--seed", seed, "master RNG seed override");
        sub->add_option("--n", n_override, "grid size override");
        sub->callback([&chosen, name] { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        bubble::RunConfig cfg = bubble::load_config(config_path);
        if (out_dir) cfg.out_dir = *out_dir;
        if (seed) cfg.seed = *seed;
        if (n_override) {
            if (*n_override < 3) throw bubble::ParseError("--n must be >= 3");
            cfg.n = *n_override;
        }
        return bubble::run_command(chosen, cfg, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "bubble-hjb: " << e.what() << "\n";
        return 1;
    }
}
