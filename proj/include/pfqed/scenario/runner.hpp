#ifndef PFQED_SCENARIO_RUNNER_HPP
#define PFQED_SCENARIO_RUNNER_HPP

#include "pfqed/core/log.hpp"
#include "pfqed/scenario/scenarios.hpp"

#include <chrono>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

#ifndef PFQED_VERSION
#define PFQED_VERSION "0.0.0"
#endif

namespace pfqed::scenario {

inline std::string config_hash(const ScenarioConfig& c) { return sha256_hex(to_json(c).dump()); }

struct RunOptions
{
    /// Overrides cfg.output when set.
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::filesystem::path> cache_dir;
    /// Rethrow after the failure manifest is written.
    bool rethrow = false;
};

/// Run one registered scenario. Tables and the manifest go to the output
/// directory; on failure the manifest records the error and whatever
/// files were already written.
inline RunManifest run_scenario(const ScenarioConfig& cfg, const RunOptions& opt = {})
{
    cfg.validate();
    const auto& info = find_scenario(cfg.scenario);

    RunManifest m;
    m.scenario = cfg.scenario;
    m.preset = to_string(cfg.preset);
    m.config = to_json(cfg);
    m.config_hash = config_hash(cfg);
    m.library_version = PFQED_VERSION;
    m.threads = cfg.threads;
    m.seed = cfg.seed;
    if(cfg.preset == Preset::desk && cfg.system != "free")
        m.notes.push_back("desk preset: reduced N_p, N_s and grids; results carry the widened desk tolerances");

    OutputSink sink(opt.out_dir ? *opt.out_dir : std::filesystem::path(cfg.output), m);
    MatterCache cache(opt.cache_dir ? *opt.cache_dir : default_cache_dir());
    RunContext ctx{cfg, sink, m, cache};

    // Library warnings become manifest notes (deduplicated).
    std::mutex warn_mutex;
    const auto previous = set_warning_handler([&](const std::string& w) {
        std::lock_guard lock(warn_mutex);
        if(std::find(m.notes.begin(), m.notes.end(), w) == m.notes.end()) m.notes.push_back(w);
    });

    const auto t0 = std::chrono::steady_clock::now();
    std::exception_ptr failure;
    try
    {
        info.run(ctx);
        m.status = "ok";
    }
    catch(const std::exception& e)
    {
        m.status = "failed";
        m.error = e.what();
        failure = std::current_exception();
    }
    set_warning_handler(previous);
    m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m.metadata["cache_dir"] = cache.dir().string();
    sink.write_manifest();
    if(failure && opt.rethrow) std::rethrow_exception(failure);
    return m;
}

} // namespace pfqed::scenario

#endif // PFQED_SCENARIO_RUNNER_HPP
