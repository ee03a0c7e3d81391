// ethsim: run an event/branching experiment from a config file or a named scenario

#include "ethsim/run.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Finite-dimensional event and branching simulator"};
    std::string config_path, scenario, mode, out, format;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    bool timings = false;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--scenario", scenario, "epr | massive-control | two-leaf | qubit");
    app.add_option("--mode", mode, "enumerate | sample | record");
    app.add_option("--samples", samples, "number of sampled histories");
    auto* seed_opt = app.add_option("--seed", seed, "64-bit seed (sample mode)");
    app.add_option("--out", out, "output path (default: standard output)");
    app.add_option("--format", format, "structured | csv");
    app.add_flag("--timings", timings, "include wall-clock timings (reports stop being byte-reproducible)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        ethsim::RunConfig config;
        if (!config_path.empty()) config = ethsim::load_config(config_path);
        nlohmann::json overrides = ethsim::config_to_json(config);
        if (!scenario.empty()) {
            overrides["scenario"] = scenario;
            overrides.erase("net");
        }
        if (!mode.empty()) overrides["mode"] = mode;
        if (samples > 0) overrides["samples"] = samples;
        if (*seed_opt) overrides["seed"] = seed;
        if (!out.empty()) overrides["output"] = out;
        if (!format.empty()) overrides["format"] = format;
        if (timings) overrides["timings"] = true;
        config = ethsim::parse_config(overrides);

        const ethsim::RunReport report = ethsim::run(config);
        if (report.axiom2.flagged)
            std::cerr << "warning: spacelike events fail to commute (norm " << report.axiom2.max_norm << ")\n";
        ethsim::emit_report(report, config.format, config.output);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ethsim::exit_code_for(e);
    }
}
