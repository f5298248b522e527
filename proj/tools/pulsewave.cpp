// pulsewave: command-line front end. See README.md for the config reference.
#include <CLI11.hpp>
#include <iostream>

#include "pulsewave/config.hpp"
#include "pulsewave/errors.hpp"
#include "pulsewave/pipeline.hpp"

int main(int argc, char** argv) {
    using namespace pulsewave;
    CLI::App app{"Pulsating traveling waves of monostable reaction-diffusion equations in periodic media"};
    app.require_subcommand(1, 1);

    std::string config_path, out_dir;
    unsigned workers = 0;
    std::uint64_t seed = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file (JSON)")->required()->envname("PULSEWAVE_CONFIG");
        sub->add_option("--out", out_dir, "output directory (overrides `output`)")->envname("PULSEWAVE_OUT");
        sub->add_option("--workers", workers, "worker cap (overrides `workers`)")
            ->envname("PULSEWAVE_WORKERS")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "random seed (overrides `seed`)")->envname("PULSEWAVE_SEED");
    };
    const std::vector<std::pair<const char*, const char*>> commands{
        {"validate", "structural checks of the medium and its steady state"},
        {"eigen", "principal eigenpair of the twisted operator at eigen.lambda, eigen.c"},
        {"dispersion", "dispersion curve c(lambda) and the minimal speed"},
        {"speed", "minimal speed and the decay-rate roots of every listed speed"},
        {"wave", "pulsating fronts for every listed speed"},
        {"stability", "twin-run stability experiments"},
        {"uniqueness", "uniqueness up to translation"},
        {"full", "validate, speed, wave, stability, uniqueness"},
    };
    for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : exit_config;
    }
    const std::string sub = app.get_subcommands().front()->get_name();

    ExperimentConfig cfg;
    try {
        cfg = parse_config(config_path);
        if (app.get_subcommands().front()->count("--seed")) set_seed(cfg, seed);
        if (workers > 0) cfg.workers = static_cast<int>(workers);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return report_error(std::filesystem::path(out_dir.empty() ? cfg.output : out_dir), e.kind(), e.what());
    }
    if (!out_dir.empty()) cfg.output = out_dir;
    return run(sub, cfg, cfg.output, std::cerr);
}
