// Command-line front end for the scenario runner.

#include "pfqed/scenario/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

using namespace pfqed::scenario;

namespace {

int cmd_list()
{
    std::cout << std::left << std::setw(24) << "id" << std::setw(20) << "figures" << std::setw(6) << "system"
              << "description\n";
    for(const auto& s : catalog())
    {
        std::cout << std::setw(24) << s.id << std::setw(20) << s.figures << std::setw(6) << s.system << s.description
                  << '\n';
        std::cout << std::setw(24) << "" << "desk:  " << s.desk << '\n';
        std::cout << std::setw(24) << "" << "full:  " << s.full << '\n';
    }
    return 0;
}

int cmd_validate(const std::string& path)
{
    const auto cfg = load_config(path);
    std::cout << path << ": ok (" << cfg.scenario << ", " << to_string(cfg.preset) << ", hash " << config_hash(cfg)
              << ")\n";
    return 0;
}

int cmd_template(const std::string& id, const std::string& preset, const std::string& out)
{
    const auto cfg = scenario_defaults(id, parse_preset(preset));
    const std::string text = to_json(cfg).dump(2) + "\n";
    if(out.empty() || out == "-")
    {
        std::cout << text;
        return 0;
    }
    std::ofstream f(out);
    if(!f) throw pfqed::Error("cannot write " + out);
    f << text;
    return 0;
}

int cmd_run(const std::string& path, const std::string& out, std::optional<std::size_t> threads,
            std::optional<std::uint64_t> seed, bool svg)
{
    auto cfg = load_config(path);
    if(threads) cfg.threads = *threads;
    if(seed) cfg.seed = *seed;
    if(svg) cfg.svg = true;
    cfg.validate();
    RunOptions opt;
    if(!out.empty()) opt.out_dir = out;
    const auto m = run_scenario(cfg, opt);
    const auto dir = opt.out_dir ? *opt.out_dir : std::filesystem::path(cfg.output);
    for(const auto& o : m.outputs) std::cout << (dir / o.file).string() << "  " << o.sha256 << '\n';
    std::cout << (dir / "manifest.json").string() << "  status " << m.status << ", " << std::fixed
              << std::setprecision(1) << m.seconds << " s\n";
    if(m.status != "ok")
    {
        std::cerr << "error: " << m.error << '\n';
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pauli-Fierz multimode light-matter scenarios"};
    app.set_version_flag("--version", std::string(PFQED_VERSION));
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a scenario config");
    std::string config, out;
    std::optional<std::size_t> threads;
    std::optional<std::uint64_t> seed;
    bool svg = false;
    run->add_option("--config", config, "scenario config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "output directory (default: the config's output entry)");
    run->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "eigensolver start-vector seed");
    run->add_flag("--svg", svg, "also write SVG plots");

    auto* list = app.add_subcommand("list-scenarios", "print the scenario catalog");

    auto* validate = app.add_subcommand("validate", "check a config without running it");
    std::string vconfig;
    validate->add_option("--config", vconfig, "scenario config (JSON)")->required()->check(CLI::ExistingFile);

    auto* tmpl = app.add_subcommand("template", "write the default config of a scenario");
    std::string tid, tpreset = "desk", tout;
    tmpl->add_option("id", tid, "scenario id")->required();
    tmpl->add_option("--preset", tpreset, "desk or full")->check(CLI::IsMember({"desk", "full"}));
    tmpl->add_option("--out", tout, "output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);
    try
    {
        if(*run) return cmd_run(config, out, threads, seed, svg);
        if(*list) return cmd_list();
        if(*validate) return cmd_validate(vconfig);
        if(*tmpl) return cmd_template(tid, tpreset, tout);
    }
    catch(const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
