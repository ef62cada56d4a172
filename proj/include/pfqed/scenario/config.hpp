#ifndef PFQED_SCENARIO_CONFIG_HPP
#define PFQED_SCENARIO_CONFIG_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/qed/assembler.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace pfqed::scenario {

using json = nlohmann::json;

enum class Preset
{
    desk,
    full
};

inline std::string to_string(Preset p) { return p == Preset::desk ? "desk" : "full"; }

inline Preset parse_preset(const std::string& s)
{
    if(s == "desk") return Preset::desk;
    if(s == "full") return Preset::full;
    throw InvalidArgument("config: preset must be \"desk\" or \"full\", got \"" + s + "\"");
}

struct GridBlock
{
    std::size_t points = 0;
    double dx = 0.0;
};

/// Everything a scenario run reads. Unset blocks take the scenario's
/// preset defaults; see scenario_defaults().
struct ScenarioConfig
{
    std::string scenario;
    Preset preset = Preset::desk;
    std::string system; // free | atom | h2

    // Mode sampling; `n_modes` and `lambda` are sweeps (one entry = fixed).
    // The default takes the lowest N_p modes of the 200-mode grid on
    // [0.01, 0.5], so raising N_p raises the cutoff.
    double omega_min = 0.01;
    double omega_max = 0.5;
    std::string sampling = "fixed_spacing"; // or "equidistant" on [omega_min, omega_max]
    double spacing = 0.49 / 199.0;
    std::vector<std::size_t> n_modes;
    std::vector<double> lambda;

    std::size_t n_states = 0;
    GridBlock grid;
    double r_max = 9.0;
    double r_step = 0.1;

    std::string gauge = "length";     // length | bqm_dse | effective_single
    std::string strategy = "lowest";  // lowest | averaged
    int max_photons = 2;

    double k_max = 2.0;
    std::size_t k_points = 41;
    double gamma = 0.0034;
    std::size_t lanczos_steps = 400;

    std::string output = "out";
    std::uint64_t seed = 20240601;
    std::size_t threads = 1;
    bool svg = false;

    qed::CouplingConfig coupling() const
    {
        qed::CouplingConfig c;
        if(gauge == "bqm_dse") c = qed::CouplingConfig::bqm_dse();
        else if(gauge == "effective_single")
            c = qed::CouplingConfig::effective(strategy == "averaged" ? qed::EffectiveStrategy::averaged
                                                                       : qed::EffectiveStrategy::lowest);
        c.max_photons = max_photons;
        return c;
    }

    void validate() const
    {
        using pfqed::detail::require;
        require(!scenario.empty(), "config: scenario id missing");
        require(system == "free" || system == "atom" || system == "h2", "config: system must be free, atom or h2");
        require(omega_min > 0.0 && omega_max > omega_min, "config: need 0 < omega_min < omega_max");
        require(sampling == "equidistant" || sampling == "fixed_spacing",
                "config: sampling must be equidistant or fixed_spacing");
        require(spacing > 0.0, "config: spacing must be positive");
        require(!n_modes.empty(), "config: n_modes sweep is empty");
        require(!lambda.empty(), "config: lambda sweep is empty");
        for(double l : lambda) require(l >= 0.0, "config: lambda must be non-negative");
        require(gauge == "length" || gauge == "bqm_dse" || gauge == "effective_single",
                "config: gauge must be length, bqm_dse or effective_single");
        require(strategy == "lowest" || strategy == "averaged", "config: strategy must be lowest or averaged");
        require(max_photons == 1 || max_photons == 2, "config: max_photons must be 1 or 2");
        if(system != "free")
        {
            require(n_states >= 1, "config: n_states must be >= 1");
            require(grid.points >= 9 && grid.dx > 0.0, "config: grid needs >= 9 points and dx > 0");
        }
        require(r_step > 0.0 && r_max > r_step, "config: need 0 < separation.step < separation.r_max");
        require(k_max > 0.0 && k_points >= 3, "config: k block needs max > 0 and >= 3 points");
        require(gamma > 0.0, "config: gamma must be positive");
        require(lanczos_steps >= 10, "config: lanczos_steps must be >= 10");
        require(threads >= 1, "config: threads must be >= 1");
    }
};

inline json to_json(const ScenarioConfig& c)
{
    json j;
    j["scenario"] = c.scenario;
    j["preset"] = to_string(c.preset);
    j["system"] = c.system;
    j["modes"] = {{"omega_min", c.omega_min}, {"omega_max", c.omega_max}, {"sampling", c.sampling},
                  {"spacing", c.spacing},     {"n_modes", c.n_modes}};
    j["lambda"] = c.lambda;
    j["n_states"] = c.n_states;
    j["grid"] = {{"points", c.grid.points}, {"dx", c.grid.dx}};
    j["separation"] = {{"r_max", c.r_max}, {"step", c.r_step}};
    j["coupling"] = {{"gauge", c.gauge}, {"strategy", c.strategy}, {"max_photons", c.max_photons}};
    j["k"] = {{"max", c.k_max}, {"points", c.k_points}};
    j["spectrum"] = {{"gamma", c.gamma}, {"lanczos_steps", c.lanczos_steps}};
    j["output"] = c.output;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["svg"] = c.svg;
    return j;
}

namespace detail {

template <class T>
std::vector<T> scalar_or_list(const json& v, const std::string& key)
{
    if(v.is_array()) return v.get<std::vector<T>>();
    if(v.is_number()) return {v.get<T>()};
    throw InvalidArgument("config: " + key + " must be a number or a list of numbers");
}

inline void reject_unknown(const json& j, const std::vector<std::string>& allowed, const std::string& where)
{
    for(auto it = j.begin(); it != j.end(); ++it)
        if(std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw InvalidArgument("config: unknown key \"" + it.key() + "\" in " + where);
}

} // namespace detail

} // namespace pfqed::scenario

#endif // PFQED_SCENARIO_CONFIG_HPP
