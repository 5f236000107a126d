#include "commands.hpp"

#include "foliation/config.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv)
{
    CLI::App app{"Numerical laboratory for singular holomorphic foliations by curves"};
    app.require_subcommand(0, 1);  // a config file may name it instead
    app.fallthrough();

    std::string config_path, scenario_id, out_path, format, point;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    app.add_option("--scenario", scenario_id, "scenario id, see list-scenarios");
    app.add_option("--seed", seed, "seed for sampling subcommands");
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--format", format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
    app.add_option("--point", point, "base point, e.g. \"(0, 0, 0.3)\"");

    const char* subs[][2] = {
        {"cone", "tangent cone of the foliation at a singular point"},
        {"transversal", "transversal-type verdict at a singular point"},
        {"eta", "exact value and certified bracket of eta at a point"},
        {"scan", "discontinuity scan over the registered leaf families"},
        {"complete", "completeness probe along the scenario rays"},
        {"converge", "restricted eta over a converging domain family"},
        {"ex32", "comparison constants and density for the radial example"},
        {"report", "run every declared expectation of a scenario"},
        {"list-scenarios", "print the registered scenario ids"},
    };
    for (const auto& s : subs) app.add_subcommand(s[0], s[1]);

    CLI11_PARSE(app, argc, argv);

    try {
        foliation::RunConfig cfg = config_path.empty() ? foliation::RunConfig{} : foliation::load_config(config_path);
        if (!app.get_subcommands().empty()) cfg.subcommand = app.get_subcommands().front()->get_name();
        if (cfg.subcommand.empty()) throw std::invalid_argument("no subcommand given; pass one or set [run] subcommand in --config");
        if (!scenario_id.empty()) cfg.scenario = scenario_id;
        if (seed) cfg.seed = seed;
        if (!out_path.empty()) cfg.output = out_path;
        if (!format.empty()) cfg.format = format;
        if (!point.empty()) cfg.point = point;
        cfg.require_seed(cfg.subcommand);

        if (cfg.output.empty()) return lab::run_command(cfg, std::cout);
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot write " << cfg.output << '\n';
            return 2;
        }
        return lab::run_command(cfg, file);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
}
