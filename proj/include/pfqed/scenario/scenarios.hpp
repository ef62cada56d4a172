#ifndef PFQED_SCENARIO_SCENARIOS_HPP
#define PFQED_SCENARIO_SCENARIOS_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/matter/atom.hpp"
#include "pfqed/matter/h2.hpp"
#include "pfqed/molecular/popes.hpp"
#include "pfqed/observables/density.hpp"
#include "pfqed/observables/spectrum.hpp"
#include "pfqed/photon/continuum.hpp"
#include "pfqed/photon/dispersion.hpp"
#include "pfqed/photon/normal_modes.hpp"
#include "pfqed/qed/free_particle.hpp"
#include "pfqed/qed/solve.hpp"
#include "pfqed/scenario/cache.hpp"
#include "pfqed/scenario/config.hpp"
#include "pfqed/scenario/output.hpp"
#include "pfqed/scenario/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

namespace pfqed::scenario {

/// Shared state of one run.
struct RunContext
{
    const ScenarioConfig& cfg;
    OutputSink& out;
    RunManifest& manifest;
    MatterCache& cache;

    linalg::KrylovOptions krylov() const
    {
        linalg::KrylovOptions k;
        k.seed = cfg.seed;
        return k;
    }

    void table(const std::string& name, const CsvTable& t)
    {
        out.write_csv(name + ".csv", t);
    }

    /// CSV plus an optional plot of `ys` against `x`.
    void table(const std::string& name, const CsvTable& t, const std::string& x, const std::vector<std::string>& ys)
    {
        table(name, t);
        if(cfg.svg) out.write(name + ".svg", svg_plot(t, x, ys, cfg.scenario + ": " + name));
    }
};

struct ScenarioInfo
{
    std::string id;
    std::string figures;
    std::string system;
    std::string description;
    std::string desk;
    std::string full;
    std::function<void(RunContext&)> run;
};

namespace detail {

inline constexpr double reference_masses[][2] = {{0.0009, 1.0336732282}, {0.0012, 1.0673464565}, {0.0019, 1.1683661411}};

inline photon::ModeContinuum modes_for(const ScenarioConfig& c, std::size_t np, double lambda)
{
    if(c.sampling == "fixed_spacing") return photon::sample_fixed_spacing(c.omega_min, c.spacing, np, lambda);
    return photon::sample_equidistant(c.omega_min, c.omega_max, np, lambda);
}

inline double electron_g(const photon::ModeContinuum& modes, double mass = 1.0)
{
    if(modes.coupling_norm2() == 0.0) return 0.0;
    return photon::multimode_coupling_g(modes, photon::coupling_vector(modes, {mass, 1.0, 1}));
}

inline double electron_mass(const photon::ModeContinuum& modes)
{
    return photon::renormalized_mass(1.0, electron_g(modes)).observable;
}

inline matter::Grid1D grid_for(const ScenarioConfig& c) { return matter::Grid1D::centered(c.grid.points, c.grid.dx); }

inline std::shared_ptr<const matter::MatterBasis> atom_matter(const RunContext& ctx, double mass = 1.0)
{
    matter::AtomModel model;
    model.mass = mass;
    matter::MatterSolveOptions opt;
    opt.krylov = ctx.krylov();
    return std::make_shared<const matter::MatterBasis>(
        matter::atom_basis(grid_for(ctx.cfg), model, ctx.cfg.n_states, opt));
}

inline double max_residual(const matter::MatterBasis& mb)
{
    return mb.residuals.empty() ? 0.0 : *std::max_element(mb.residuals.begin(), mb.residuals.end());
}

/// A fixed comparison setting with the configured Fock truncation.
inline qed::CouplingConfig truncated(const ScenarioConfig& c, qed::CouplingConfig cc)
{
    cc.max_photons = c.max_photons;
    return cc;
}

/// Coupled ground state for `bare` coupled to `modes` per `cfg`.
inline qed::CoupledState coupled_ground(RunContext& ctx, const std::shared_ptr<const matter::MatterBasis>& bare,
                                        const photon::ModeContinuum& modes, const qed::CouplingConfig& cfg)
{
    const auto p = qed::build_problem(bare, modes, cfg);
    auto gs = qed::ground_state(p, ctx.krylov());
    return gs;
}

/// Least-squares curvature c of E(k) - E(0) = c k^2 / 2.
inline double curvature(const std::vector<double>& k, const std::vector<double>& e)
{
    const auto zero = static_cast<std::size_t>(std::min_element(k.begin(), k.end(), [](double a, double b) {
                                                   return std::abs(a) < std::abs(b);
                                               }) - k.begin());
    double num = 0.0, den = 0.0;
    for(std::size_t i = 0; i < k.size(); ++i)
    {
        const double q = 0.5 * k[i] * k[i];
        num += q * (e[i] - e[zero]);
        den += q * q;
    }
    return num / den;
}

inline std::vector<double> k_grid(const ScenarioConfig& c)
{
    std::vector<double> k(c.k_points);
    for(std::size_t i = 0; i < k.size(); ++i)
        k[i] = -c.k_max + 2.0 * c.k_max * static_cast<double>(i) / static_cast<double>(c.k_points - 1);
    return k;
}

/// Matter-only dipole strength from the eigenpairs of `mb`.
inline observables::SpectrumData matter_spectrum(const matter::MatterBasis& mb, double gamma,
                                                 const std::vector<double>& omega)
{
    observables::SpectrumData s;
    s.gamma = gamma;
    for(std::size_t n = 1; n < mb.size(); ++n)
    {
        const double w = mb.energies[static_cast<Eigen::Index>(n)] - mb.energies[0];
        const double mu = mb.dipole(0, static_cast<Eigen::Index>(n));
        s.excitation.push_back(w);
        s.strengths.push_back(2.0 * w * mu * mu);
    }
    observables::evaluate_curve(s, omega);
    return s;
}

/// Lowest stick carrying at least `fraction` of the largest strength.
inline std::size_t lowest_bright(const observables::SpectrumData& s, double fraction = 0.1)
{
    const double top = s.strengths[s.brightest()];
    std::size_t best = s.brightest();
    for(std::size_t n = 0; n < s.strengths.size(); ++n)
        if(s.strengths[n] >= fraction * top && s.excitation[n] < s.excitation[best]) best = n;
    return best;
}

inline void add_profile_rows(CsvTable& t, double lambda, const std::vector<const observables::DensityProfile*>& cols)
{
    const auto& g = cols.front()->grid;
    for(std::size_t i = 0; i < g.n; ++i)
    {
        std::vector<CsvTable::Cell> row{lambda, g.x(i)};
        for(const auto* p : cols) row.emplace_back(p->values[i]);
        t.add(std::move(row));
    }
}

inline CsvTable profile_table(const std::vector<std::string>& extra)
{
    std::vector<std::string> cols{"lambda", "x"};
    cols.insert(cols.end(), extra.begin(), extra.end());
    return CsvTable(cols);
}

/// Single-lambda profile tables carry no lambda column.
inline CsvTable profile_table_x(const std::vector<std::string>& extra)
{
    std::vector<std::string> cols{"x"};
    cols.insert(cols.end(), extra.begin(), extra.end());
    return CsvTable(cols);
}

// ---------------------------------------------------------------- free particle

inline void run_free_dispersion(RunContext& ctx)
{
    const auto& c = ctx.cfg;
    const auto k = k_grid(c);
    const photon::Species e = photon::Species::electron();
    CsvTable t({"k", "E_nrqed", "E_qm", "E_numeric", "lambda"});
    json per = json::array();
    for(double lambda : c.lambda)
        for(std::size_t np : c.n_modes)
        {
            const auto modes = modes_for(c, np, lambda);
            const auto nm = photon::normal_modes(modes, photon::coupling_vector(modes, e));
            const double m_e = photon::renormalized_mass(1.0, nm.g).observable;
            const auto numeric = parallel_map(k.size(), c.threads, [&](std::size_t i) {
                return qed::numeric_free_dispersion(k[i], modes, e, 60) - nm.zero_point();
            });
            for(std::size_t i = 0; i < k.size(); ++i)
                t.add({k[i], photon::dispersion_analytic(k[i], nm, e, {}, true).energy, k[i] * k[i] / (2.0 * m_e),
                       numeric[i], lambda});
            per.push_back({{"lambda", lambda}, {"n_modes", np}, {"g", nm.g}, {"m_e", m_e}});
        }
    ctx.manifest.metadata["continua"] = per;
    ctx.table("free-dispersion", t, "k", {"E_nrqed", "E_qm", "E_numeric"});
}

inline void run_mass_vs_coupling_modes(RunContext& ctx)
{
    const auto& c = ctx.cfg;
    const photon::Species e = photon::Species::electron();
    CsvTable t({"lambda", "n_modes", "g", "S", "m_e", "m_pt"});
    for(double lambda : c.lambda)
        for(std::size_t np : c.n_modes)
        {
            const auto modes = modes_for(c, np, lambda);
            const auto r = photon::coupling_routes(modes, photon::coupling_vector(modes, e));
            const auto m = photon::renormalized_mass(1.0, r.sherman_morrison);
            t.add({lambda, static_cast<long long>(np), r.sherman_morrison, r.S, m.observable, m.shift});
        }
    ctx.table("mass-vs-coupling-modes", t, "n_modes", {"m_e"});

    // Reference masses are quoted for 200 modes on the standard continuum.
    CsvTable ref({"lambda", "m_e", "m_e_reference", "rel_dev"});
    for(const auto& row : reference_masses)
    {
        const auto modes = photon::sample_equidistant(0.01, 0.5, 200, row[0]);
        const double me = electron_mass(modes);
        ref.add({row[0], me, row[1], me / row[1] - 1.0});
    }
    ctx.table("reference-masses", ref);
}

inline void run_ir_mismatch(RunContext& ctx)
{
    const auto& c = ctx.cfg;
    const double lambda = c.lambda.front();
    const std::size_t np = c.n_modes.front();
    const photon::Species e = photon::Species::electron();
    const auto matched = modes_for(c, np, lambda);
    const auto off = photon::sample_equidistant(0.001, 0.05, np, lambda);
    const auto nm_m = photon::normal_modes(matched, photon::coupling_vector(matched, e));
    const auto nm_o = photon::normal_modes(off, photon::coupling_vector(off, e));
    const auto k = k_grid(c);
    const auto numeric = parallel_map(k.size(), c.threads, [&](std::size_t i) {
        return qed::numeric_free_dispersion(k[i], off, e, 60) - nm_o.zero_point();
    });
    CsvTable t({"k", "E_nrqed", "E_nrqed_off", "E_numeric_off"});
    for(std::size_t i = 0; i < k.size(); ++i)
        t.add({k[i], photon::dispersion_analytic(k[i], nm_m, e, {}, true).energy,
               photon::dispersion_analytic(k[i], nm_o, e, {}, true).energy, numeric[i]});
    ctx.table("ir-mismatch", t, "k", {"E_nrqed", "E_nrqed_off", "E_numeric_off"});

    std::vector<double> e_matched;
    for(double q : k) e_matched.push_back(qed::numeric_free_dispersion(q, matched, e, 60) - nm_m.zero_point());
    CsvTable s({"continuum", "g", "curvature_closed", "curvature_numeric"});
    s.add({std::string("matched"), nm_m.g, 1.0 - nm_m.g, curvature(k, e_matched)});
    s.add({std::string("off"), nm_o.g, 1.0 - nm_o.g, curvature(k, numeric)});
    ctx.table("curvature", s);
}

inline void run_coupling_bounds(RunContext& ctx)
{
    const auto& c = ctx.cfg;
    // Perturbative coupling with unit prefactor against the upper cutoff.
    CsvTable a1({"lambda_l", "lambda_u", "g_pert"});
    for(int d = 1; d <= 6; ++d)
    {
        const double lo = std::pow(10.0, -d);
        for(int i = 0; i <= 40; ++i)
        {
            const double hi = lo * std::pow(10.0, 0.1 * i);
            a1.add({lo, hi, photon::perturbative_g(lo, hi, 1.0)});
        }
    }
    ctx.table("perturbative", a1);

    // Exact g(N_p) for harmonics omega_a = a omega with a fixed diamagnetic
    // frequency per mode; only omega_d / omega matters.
    CsvTable a2({"ratio", "n_modes", "g"});
    const std::size_t np_max = c.n_modes.back();
    for(double ratio : {1.0, 5.0, 10.0, 15.0})
    {
        std::vector<double> w, lam;
        for(std::size_t a = 1; a <= np_max; ++a)
        {
            w.push_back(static_cast<double>(a));
            lam.push_back(ratio);
            const photon::ModeContinuum modes(w, lam);
            a2.add({ratio, static_cast<long long>(a), photon::multimode_coupling_g(modes, lam)});
        }
    }
    ctx.table("exact", a2, "n_modes", {"g"});

    // Matched contrast: a discrete continuum on [Lambda_l, 1] whose couplings
    // are trapezoid weights of the same integral, so that S approximates
    // the perturbative value while g = S / (1 + S) stays below 1.
    const double prefactor = 1e-3;
    CsvTable con({"lambda_l", "g_pert", "S", "g_exact"});
    for(int d = 1; d <= 6; ++d)
    {
        const double lo = std::pow(10.0, -d);
        const std::size_t n = 400;
        std::vector<double> w(n), lam(n);
        for(std::size_t a = 0; a < n; ++a) w[a] = lo * std::pow(1.0 / lo, static_cast<double>(a) / (n - 1));
        for(std::size_t a = 0; a < n; ++a)
        {
            const double left = a > 0 ? w[a] - w[a - 1] : 0.0;
            const double right = a + 1 < n ? w[a + 1] - w[a] : 0.0;
            lam[a] = std::sqrt(prefactor * 0.5 * (left + right));
        }
        const photon::ModeContinuum modes(w, lam);
        const auto r = photon::coupling_routes(modes, lam);
        con.add({lo, photon::perturbative_g(lo, 1.0, prefactor), r.S, r.sherman_morrison});
    }
    ctx.table("contrast", con);
    ctx.manifest.metadata["contrast_prefactor"] = prefactor;
}

// ---------------------------------------------------------------- atom

inline void run_atom_density(RunContext& ctx)
{
    const auto& c = ctx.cfg;
    const std::size_t np = c.n_modes.front();
    const auto bare = atom_matter(ctx);
    ctx.manifest.note_residual(max_residual(*bare));
    const auto n_bare = observables::density(*bare, std::size_t{0});
    CsvTable t = profile_table({"n_nrqed", "n_qm", "n_bare"});
    CsvTable s({"lambda", "n_modes", "m_e", "delta_n_qm", "delta_n_bare", "peak_nrqed", "peak_qm", "peak_bare",
                "width_nrqed", "width_qm", "width_bare"});
    for(double lambda : c.lambda)
    {
        const auto modes = modes_for(c, np, lambda);
        const auto gs = coupled_ground(ctx, bare, modes, c.coupling());
        ctx.manifest.note_residual(gs.residual);
        const double m_e = electron_mass(modes);
        const auto qm = atom_matter(ctx, m_e);
        const auto n_nr = observables::density(gs);
        const auto n_qm = observables::density(*qm, std::size_t{0});
        add_profile_rows(t, lambda, {&n_nr, &n_qm, &n_bare});
        s.add({lambda, static_cast<long long>(np), m_e, observables::integrated_density_diff(n_nr, n_qm),
               observables::integrated_density_diff(n_nr, n_bare), n_nr.peak(), n_qm.peak(), n_bare.peak(),
               n_nr.width(), n_qm.width(), n_bare.width()});
    }
    ctx.table("atom-density", t);
    ctx.table("summary", s);
}

inline void run_photon_occupation(RunContext& ctx)
{
    const auto& c = ctx.cfg;
    const std::size_t np = c.n_modes.front();
    const auto bare = atom_matter(ctx);
    CsvTable t({"mode_index", "omega", "n_occ", "lambda"});
    for(double lambda : c.lambda)
    {
        const auto modes = modes_for(c, np, lambda);
        const auto gs = coupled_ground(ctx, bare, modes, c.coupling());
        ctx.manifest.note_residual(gs.residual);
        const auto n = qed::photon_occupation(gs, qed::OccupationGauge::velocity);
        for(std::size_t a = 0; a < n.size(); ++a)
            t.add({static_cast<long long>(a + 1), gs.modes.frequency(a), n[a], lambda});
    }
    ctx.table("photon-occupation", t, "mode_index", {"n_occ"});
}

inline void run_density_saturation(RunContext& ctx)
{
    const auto& c = ctx.cfg;
    const auto bare = atom_matter(ctx);
    struct Point
    {
        double lambda;
        std::size_t np;
    };
    std::vector<Point> pts;
    for(double l : c.lambda)
        for(std::size_t np : c.n_modes) pts.push_back({l, np});
    struct Row
    {
        double dn_qm = 0, dn_bqm = 0, g = 0, residual = 0;
    };
    const auto rows = parallel_map(pts.size(), c.threads, [&](std::size_t i) {
        const auto modes = modes_for(c, pts[i].np, pts[i].lambda);
        const auto gs = coupled_ground(ctx, bare, modes, c.coupling());
        const auto bq = coupled_ground(ctx, bare, modes, truncated(c, qed::CouplingConfig::bqm_dse()));
        const double g = electron_g(modes);
        const auto qm = atom_matter(ctx, photon::renormalized_mass(1.0, g).observable);
        const auto n_nr = observables::density(gs);
        return Row{observables::integrated_density_diff(n_nr, observables::density(*qm, std::size_t{0})),
                   observables::integrated_density_diff(n_nr, observables::density(bq)), g,
                   std::max(gs.residual, bq.residual)};
    });
    CsvTable t({"lambda", "n_modes", "delta_n", "g", "delta_n_bqm_dse"});
    for(std::size_t i = 0; i < pts.size(); ++i)
    {
        ctx.manifest.note_residual(rows[i].residual);
        t.add({pts[i].lambda, static_cast<long long>(pts[i].np), rows[i].dn_qm, rows[i].g, rows[i].dn_bqm});
    }
    ctx.table("density-saturation", t, "n_modes", {"delta_n"});
}

inline void run_absorption(RunContext& ctx)
{
    const auto& c = ctx.cfg;
    const double lambda = c.lambda.front();
    const auto modes = modes_for(c, c.n_modes.front(), lambda);
    const auto bare = atom_matter(ctx);
    const auto p = qed::build_problem(bare, modes, c.coupling());
    const auto gs = qed::ground_state(p, ctx.krylov());
    ctx.manifest.note_residual(gs.residual);

    const double m_e = electron_mass(modes);
    const auto qm = atom_matter(ctx, m_e);
    std::vector<double> all_w;
    for(std::size_t n = 1; n < qm->size(); ++n) all_w.push_back(qm->energies[static_cast<Eigen::Index>(n)] - qm->energies[0]);
    for(std::size_t n = 1; n < bare->size(); ++n)
        all_w.push_back(bare->energies[static_cast<Eigen::Index>(n)] - bare->energies[0]);
    const auto omega = observables::default_frequency_grid(all_w, 2000);

    const auto nr = observables::dipole_strength_lanczos(p, gs, c.gamma, c.lanczos_steps, omega);
    const auto qs = matter_spectrum(*qm, c.gamma, omega);

    // Fixed-width fit around the brightest NRQED line.
    const std::size_t top = nr.brightest();
    const double lo = nr.excitation[top] - 0.02, hi = nr.excitation[top] + 0.02;
    const auto fit = observables::lorentzian_fit(nr, lo, hi, c.gamma);
    const std::size_t qb = lowest_bright(qs);

    CsvTable t({"omega", "S_nrqed", "S_qm", "S_fit"});
    for(std::size_t i = 0; i < omega.size(); ++i)
        t.add({omega[i], nr.curve[i], qs.curve[i], fit.amplitude * observables::lorentzian(omega[i], fit.center, fit.gamma)});
    ctx.table("absorption", t, "omega", {"S_nrqed", "S_qm", "S_fit"});

    CsvTable sticks({"setting", "omega_n", "strength"});
    for(std::size_t n = 0; n < nr.excitation.size(); ++n) sticks.add({std::string("nrqed"), nr.excitation[n], nr.strengths[n]});
    for(std::size_t n = 0; n < qs.excitation.size(); ++n) sticks.add({std::string("qm"), qs.excitation[n], qs.strengths[n]});
    ctx.table("sticks", sticks);

    ctx.manifest.metadata["fit"] = {{"window", {lo, hi}},          {"gamma_fixed", c.gamma},
                                    {"center", fit.center},        {"amplitude", fit.amplitude},
                                    {"residual", fit.residual},    {"brightest_node", nr.excitation[top]},
                                    {"qm_peak", qs.excitation[qb]}, {"m_e", m_e},
                                    {"red_shift", fit.center - qs.excitation[qb]}};
}

inline void run_approx_compare(RunContext& ctx)
{
    const auto& c = ctx.cfg;
    const double lambda = c.lambda.front();
    const auto modes = modes_for(c, c.n_modes.front(), lambda);
    const auto bare = atom_matter(ctx);
    const auto solve = [&](const qed::CouplingConfig& cc) {
        auto gs = coupled_ground(ctx, bare, modes, cc);
        ctx.manifest.note_residual(gs.residual);
        return observables::density(gs);
    };
    const auto n_nr = solve(truncated(c, qed::CouplingConfig::length()));
    const auto n_bq = solve(truncated(c, qed::CouplingConfig::bqm_dse()));
    const auto n_lo = solve(truncated(c, qed::CouplingConfig::effective(qed::EffectiveStrategy::lowest)));
    const auto n_av = solve(truncated(c, qed::CouplingConfig::effective(qed::EffectiveStrategy::averaged)));
    const auto n_bare = observables::density(*bare, std::size_t{0});

    CsvTable t = profile_table_x({"n_nrqed", "n_bqm_dse", "n_bare", "n_eff_lowest", "n_eff_averaged"});
    for(std::size_t i = 0; i < n_nr.grid.n; ++i)
        t.add({n_nr.grid.x(i), n_nr.values[i], n_bq.values[i], n_bare.values[i], n_lo.values[i], n_av.values[i]});
    ctx.table("approx-compare", t);

    CsvTable d({"approximation", "delta_n"});
    d.add({std::string("bqm_dse"), observables::integrated_density_diff(n_nr, n_bq)});
    d.add({std::string("bare"), observables::integrated_density_diff(n_nr, n_bare)});
    d.add({std::string("eff_lowest"), observables::integrated_density_diff(n_nr, n_lo)});
    d.add({std::string("eff_averaged"), observables::integrated_density_diff(n_nr, n_av)});
    ctx.table("delta-n", d);
    const auto av = qed::effective_single_mode(modes, qed::EffectiveStrategy::averaged);
    ctx.manifest.metadata["omega_eff_averaged"] = av.frequency(0);
    ctx.manifest.metadata["lambda_eff_averaged"] = av.coupling(0);
}

// ---------------------------------------------------------------- H2

struct H2Setup
{
    matter::Grid1D grid;
    std::vector<double> R;
    molecular::PesScanOptions opt;
};

inline H2Setup h2_setup(RunContext& ctx, const std::string& label)
{
    const auto& c = ctx.cfg;
    H2Setup s{grid_for(c), molecular::separation_grid(c.r_max, c.r_step), {}};
    s.opt.threads = c.threads;
    s.opt.label = label;
    s.opt.krylov = ctx.krylov();
    return s;
}

inline molecular::PESCurve scan(RunContext& ctx, const std::string& label, const matter::H2Model& model,
                                const std::optional<photon::ModeContinuum>& modes, const qed::CouplingConfig& cc)
{
    auto s = h2_setup(ctx, label);
    const auto grid = s.grid;
    const std::size_t ns = ctx.cfg.n_states;
    matter::MatterSolveOptions mopt;
    mopt.krylov = ctx.krylov();
    s.opt.provider = [&ctx, grid, model, ns, mopt](double r) {
        return ctx.cache.h2(r, grid, model, ns, matter::ExchangeSectors::all, mopt);
    };
    auto curve = molecular::pes_scan(s.R, model, grid, ns, modes, cc, s.opt);
    for(double r : curve.residuals) ctx.manifest.note_residual(r);
    return curve;
}

inline void run_h2_popes(RunContext& ctx)
{
    const auto& c = ctx.cfg;
    const auto modes = modes_for(c, c.n_modes.front(), c.lambda.front());
    const matter::H2Model bare_model;
    const auto qm_model = molecular::renormalized_h2_model(modes, bare_model);
    const auto bare = scan(ctx, "bare", bare_model, std::nullopt, {});
    const auto nr = scan(ctx, "NRQED", bare_model, modes, c.coupling());
    const auto qm = scan(ctx, "QM", qm_model, std::nullopt, {});
    const auto bq = scan(ctx, "bQM+DSE", bare_model, modes, truncated(c, qed::CouplingConfig::bqm_dse()));
    const auto lo = scan(ctx, "effective-mode", bare_model, modes, truncated(c, qed::CouplingConfig::effective(qed::EffectiveStrategy::lowest)));
    const auto av = scan(ctx, "effective-mode", bare_model, modes, truncated(c, qed::CouplingConfig::effective(qed::EffectiveStrategy::averaged)));

    CsvTable t({"R", "E_bare", "E_nrqed", "E_qm", "E_bqm_dse", "E_eff_lowest", "E_eff_averaged"});
    double max_nr_bq = 0.0;
    for(std::size_t i = 0; i < bare.size(); ++i)
    {
        t.add({bare.R[i], bare.energies[i], nr.energies[i], qm.energies[i], bq.energies[i], lo.energies[i], av.energies[i]});
        max_nr_bq = std::max(max_nr_bq, std::abs(nr.energies[i] - bq.energies[i]));
    }
    ctx.table("h2-popes", t, "R", {"E_bare", "E_nrqed", "E_qm", "E_bqm_dse"});

    json curves = json::object();
    for(const auto* cv : {&bare, &nr, &qm, &bq})
        curves[cv->label] = {{"R_eq", cv->equilibrium()}, {"E_min", cv->minimum()}, {"D_e", molecular::dissociation_energy(*cv)},
                             {"plateau_drift", molecular::plateau_drift(*cv)}};
    ctx.manifest.metadata["curves"] = curves;
    ctx.manifest.metadata["max_abs_nrqed_minus_bqm_dse"] = max_nr_bq;
    ctx.manifest.metadata["qm_masses"] = {{"electron", qm_model.electron_mass}, {"proton", qm_model.nuclear_mass}};
    ctx.manifest.metadata["cache"] = {{"hits", ctx.cache.hits()}, {"misses", ctx.cache.misses()}};
}

/// NRQED and QM curves for every (lambda, N_p) point of the sweep.
struct H2Sweep
{
    struct Point
    {
        double lambda;
        std::size_t np;
        molecular::PESCurve nrqed, qm;
        matter::H2Model qm_model;
    };
    molecular::PESCurve bare;
    std::vector<Point> points;
};

inline H2Sweep h2_sweep(RunContext& ctx)
{
    const auto& c = ctx.cfg;
    H2Sweep s;
    const matter::H2Model bare_model;
    s.bare = scan(ctx, "bare", bare_model, std::nullopt, {});
    for(double lambda : c.lambda)
        for(std::size_t np : c.n_modes)
        {
            const auto modes = modes_for(c, np, lambda);
            const auto qm_model = molecular::renormalized_h2_model(modes, bare_model);
            s.points.push_back({lambda, np, scan(ctx, "NRQED", bare_model, modes, c.coupling()),
                                scan(ctx, "QM", qm_model, std::nullopt, {}), qm_model});
        }
    return s;
}

inline void run_dissociation_vs_np(RunContext& ctx)
{
    const auto s = h2_sweep(ctx);
    CsvTable t({"lambda", "n_modes", "De_nrqed", "De_qm"});
    for(const auto& p : s.points)
        t.add({p.lambda, static_cast<long long>(p.np), molecular::dissociation_energy(p.nrqed),
               molecular::dissociation_energy(p.qm)});
    ctx.table("dissociation-vs-Np", t, "n_modes", {"De_nrqed", "De_qm"});
    ctx.manifest.metadata["De_bare"] = molecular::dissociation_energy(s.bare);
    ctx.manifest.metadata["plateau_drift_bare"] = molecular::plateau_drift(s.bare);
}

inline void run_harmonic_vs_np(RunContext& ctx)
{
    const auto s = h2_sweep(ctx);
    const double mu_bare = matter::H2Model{}.mu_n();
    CsvTable t({"lambda", "n_modes", "a_nrqed", "omega_e_nrqed", "a_qm", "omega_e_qm", "De_nrqed", "De_qm"});
    const auto fb = molecular::morse_fit(s.bare, mu_bare);
    t.add({0.0, 0LL, fb.a, fb.omega_e, fb.a, fb.omega_e, fb.d_e, fb.d_e});
    json fits = json::array();
    for(const auto& p : s.points)
    {
        const auto fn = molecular::morse_fit(p.nrqed, mu_bare);
        const auto fq = molecular::morse_fit(p.qm, p.qm_model.mu_n());
        t.add({p.lambda, static_cast<long long>(p.np), fn.a, fn.omega_e, fq.a, fq.omega_e, fn.d_e, fq.d_e});
        fits.push_back({{"lambda", p.lambda}, {"n_modes", p.np}, {"residual_nrqed", fn.residual},
                        {"residual_qm", fq.residual}, {"mu_n_qm", p.qm_model.mu_n()}});
    }
    ctx.table("harmonic-vs-Np", t, "n_modes", {"omega_e_nrqed", "omega_e_qm"});
    ctx.manifest.metadata["fits"] = fits;
    ctx.manifest.metadata["bare"] = {{"R_eq", s.bare.equilibrium()}, {"E_min", s.bare.minimum()},
                                     {"vib0", molecular::vibrational_ground_level(s.bare, mu_bare)},
                                     {"morse_residual", fb.residual}};
}

/// Atom density differences against the smallest lambda, plus the H2
/// dissociation energy per lambda at fixed N_p.
inline void run_cavity_compare(RunContext& ctx)
{
    const auto& c = ctx.cfg;
    std::vector<double> lambdas = c.lambda;
    std::sort(lambdas.begin(), lambdas.end());

    // Atom part: standard atom grid, the preset's atom mode count.
    ScenarioConfig ac = c;
    ac.grid = {3000, 0.0707};
    ac.n_states = c.preset == Preset::desk ? 6 : 10;
    const std::size_t atom_np = c.preset == Preset::desk ? 50 : 200;
    RunContext actx{ac, ctx.out, ctx.manifest, ctx.cache};
    const auto bare = atom_matter(actx);
    std::vector<observables::DensityProfile> dens;
    for(double l : lambdas)
    {
        const auto gs = coupled_ground(actx, bare, modes_for(ac, atom_np, l), c.coupling());
        ctx.manifest.note_residual(gs.residual);
        dens.push_back(observables::density(gs));
    }
    CsvTable t = profile_table({"n_nrqed", "dn_vs_lowest_lambda"});
    json peaks = json::array();
    for(std::size_t k = 0; k < lambdas.size(); ++k)
    {
        const auto dn = observables::signed_density_diff(dens[k], dens[0]);
        add_profile_rows(t, lambdas[k], {&dens[k], &dn});
        peaks.push_back({{"lambda", lambdas[k]}, {"dn_max", dn.peak()}, {"peak", dens[k].peak()}, {"width", dens[k].width()}});
    }
    ctx.table("cavity-density", t);
    ctx.manifest.metadata["atom"] = {{"n_modes", atom_np}, {"n_states", ac.n_states}, {"profiles", peaks}};

    // H2 part.
    CsvTable d({"lambda", "De_nrqed"});
    const std::size_t np = c.n_modes.front();
    for(double l : lambdas)
    {
        const auto nr = scan(ctx, "NRQED", matter::H2Model{}, modes_for(c, np, l), c.coupling());
        d.add({l, molecular::dissociation_energy(nr)});
    }
    ctx.table("cavity-dissociation", d);
}

inline std::vector<std::size_t> range(std::size_t lo, std::size_t hi, std::size_t step)
{
    std::vector<std::size_t> v;
    for(std::size_t x = lo; x <= hi; x += step) v.push_back(x);
    return v;
}

} // namespace detail

inline const std::vector<ScenarioInfo>& catalog()
{
    using namespace detail;
    static const std::vector<ScenarioInfo> list = {
        {"free-dispersion", "Fig. 1", "free", "free-electron dispersion: closed form, renormalized mass, numeric diagonalization",
         "200 modes, 41 k points", "200 modes, 201 k points", run_free_dispersion},
        {"mass-vs-coupling-modes", "Fig. 2, Table I", "free", "multimode coupling g, S and observable mass over lambda and N_p",
         "N_p 10..200", "N_p 10..200", run_mass_vs_coupling_modes},
        {"atom-density", "Fig. 3", "atom", "atom ground-state density, NRQED vs renormalized mass vs bare",
         "N_p 50, N_s 6", "N_p 200, N_s 10", run_atom_density},
        {"photon-occupation", "Fig. 4", "atom", "velocity-gauge photon occupation per mode in the atom ground state",
         "N_p 50, N_s 6", "N_p 200, N_s 10", run_photon_occupation},
        {"density-saturation", "Fig. 5a-b", "atom", "integrated density difference NRQED vs QM against N_p, with g(N_p)",
         "N_p {10..200} (7 points), N_s 6", "N_p 10..200 step 10, 3 lambdas, N_s 10", run_density_saturation},
        {"absorption", "Fig. 5", "atom", "dipole strength function, fixed-width Lorentzian fit, renormalized-mass spectrum",
         "N_p 50, N_s 6", "N_p 200, N_s 10", run_absorption},
        {"h2-popes", "Fig. 6, Fig. 10", "h2", "H2 ground-state PES: bare, NRQED, QM, bQM+DSE, effective single mode",
         "100x0.35 grid, dR 0.2, N_s 6, N_p 50", "200x0.35 grid, dR 0.1, N_s 10, N_p 50", run_h2_popes},
        {"dissociation-vs-Np", "Fig. 7, Fig. 9b", "h2", "dissociation energy against N_p, NRQED vs QM",
         "N_p {10,30,50}", "N_p 10..70 step 10", run_dissociation_vs_np},
        {"harmonic-vs-Np", "Fig. 8, Table III", "h2", "Morse width and harmonic frequency against N_p",
         "N_p {10,30,50}", "N_p 10..70 step 10", run_harmonic_vs_np},
        {"cavity-compare", "Fig. 9", "h2", "enhanced coupling: atom density change and H2 dissociation energy per lambda",
         "atom N_p 50, H2 N_p 30 on the desk grid", "atom N_p 200, H2 N_p 30 on the full grid", run_cavity_compare},
        {"approx-compare", "Figs. 10-11", "atom", "atom density under bQM+DSE and effective single-mode reductions",
         "N_p 50, N_s 6", "N_p 200, N_s 10", run_approx_compare},
        {"ir-mismatch", "Fig. A3", "free", "dispersion flattening for the (0.001, 0.05) continuum", "200 modes", "200 modes",
         run_ir_mismatch},
        {"coupling-bounds", "Figs. A1-A2", "free", "perturbative vs exact multimode coupling", "N_p up to 100",
         "N_p up to 100", run_coupling_bounds},
    };
    return list;
}

inline const ScenarioInfo& find_scenario(const std::string& id)
{
    for(const auto& s : catalog())
        if(s.id == id) return s;
    throw InvalidArgument("unknown scenario id \"" + id + "\" (see list-scenarios)");
}

inline ScenarioConfig scenario_defaults(const std::string& id, Preset preset)
{
    const auto& info = find_scenario(id);
    const bool desk = preset == Preset::desk;
    ScenarioConfig c;
    c.scenario = id;
    c.preset = preset;
    c.system = info.system;
    c.output = "out/" + id;
    c.lambda = {0.0019};
    if(c.system == "atom")
    {
        c.grid = {3000, 0.0707};
        c.n_states = desk ? 6 : 10;
        c.n_modes = {desk ? std::size_t{50} : std::size_t{200}};
    }
    else if(c.system == "h2")
    {
        c.grid = {desk ? std::size_t{100} : std::size_t{200}, 0.35};
        c.n_states = desk ? 6 : 10;
        c.r_step = desk ? 0.2 : 0.1;
        c.n_modes = {50};
    }
    else
    {
        c.n_modes = {200};
    }

    if(id == "free-dispersion")
    {
        c.lambda = {0.0, 0.0009, 0.0012, 0.0019};
        c.k_points = desk ? 41 : 201;
    }
    else if(id == "mass-vs-coupling-modes")
    {
        c.lambda = {0.0009, 0.0012, 0.0019, 0.002};
        c.n_modes = detail::range(10, 200, 10);
    }
    else if(id == "atom-density" || id == "photon-occupation")
    {
        c.lambda = {0.0009, 0.0012, 0.0019};
    }
    else if(id == "density-saturation")
    {
        c.n_modes = desk ? std::vector<std::size_t>{10, 20, 40, 60, 100, 150, 200} : detail::range(10, 200, 10);
        c.lambda = desk ? std::vector<double>{0.0019} : std::vector<double>{0.0009, 0.0012, 0.0019};
    }
    else if(id == "dissociation-vs-Np" || id == "harmonic-vs-Np")
    {
        c.n_modes = desk ? std::vector<std::size_t>{10, 30, 50} : detail::range(10, 70, 10);
    }
    else if(id == "cavity-compare")
    {
        c.lambda = {0.0009, 0.0012, 0.0019};
        c.n_modes = {30};
    }
    else if(id == "ir-mismatch")
    {
        c.k_max = 1.0;
        c.k_points = 21;
    }
    else if(id == "coupling-bounds")
    {
        c.n_modes = {100};
    }
    return c;
}

/// Parse a config; keys absent from `j` keep the scenario preset defaults.
inline ScenarioConfig config_from_json(const json& j)
{
    try
    {
        pfqed::detail::require(j.is_object(), "config: top level must be an object");
        detail::reject_unknown(j,
                               {"scenario", "preset", "system", "modes", "lambda", "n_states", "grid", "separation",
                                "coupling", "k", "spectrum", "output", "seed", "threads", "svg"},
                               "the top level");
        pfqed::detail::require(j.contains("scenario"), "config: \"scenario\" is required");
        const Preset preset = parse_preset(j.value("preset", std::string("desk")));
        ScenarioConfig c = scenario_defaults(j.at("scenario").get<std::string>(), preset);
        if(j.contains("system")) c.system = j["system"].get<std::string>();
        if(j.contains("modes"))
        {
            const auto& m = j["modes"];
            detail::reject_unknown(m, {"omega_min", "omega_max", "sampling", "spacing", "n_modes"}, "modes");
            c.omega_min = m.value("omega_min", c.omega_min);
            c.omega_max = m.value("omega_max", c.omega_max);
            c.sampling = m.value("sampling", c.sampling);
            c.spacing = m.value("spacing", c.spacing);
            if(m.contains("n_modes")) c.n_modes = detail::scalar_or_list<std::size_t>(m["n_modes"], "modes.n_modes");
        }
        if(j.contains("lambda")) c.lambda = detail::scalar_or_list<double>(j["lambda"], "lambda");
        c.n_states = j.value("n_states", c.n_states);
        if(j.contains("grid"))
        {
            detail::reject_unknown(j["grid"], {"points", "dx"}, "grid");
            c.grid.points = j["grid"].value("points", c.grid.points);
            c.grid.dx = j["grid"].value("dx", c.grid.dx);
        }
        if(j.contains("separation"))
        {
            detail::reject_unknown(j["separation"], {"r_max", "step"}, "separation");
            c.r_max = j["separation"].value("r_max", c.r_max);
            c.r_step = j["separation"].value("step", c.r_step);
        }
        if(j.contains("coupling"))
        {
            detail::reject_unknown(j["coupling"], {"gauge", "strategy", "max_photons"}, "coupling");
            c.gauge = j["coupling"].value("gauge", c.gauge);
            c.strategy = j["coupling"].value("strategy", c.strategy);
            c.max_photons = j["coupling"].value("max_photons", c.max_photons);
        }
        if(j.contains("k"))
        {
            detail::reject_unknown(j["k"], {"max", "points"}, "k");
            c.k_max = j["k"].value("max", c.k_max);
            c.k_points = j["k"].value("points", c.k_points);
        }
        if(j.contains("spectrum"))
        {
            detail::reject_unknown(j["spectrum"], {"gamma", "lanczos_steps"}, "spectrum");
            c.gamma = j["spectrum"].value("gamma", c.gamma);
            c.lanczos_steps = j["spectrum"].value("lanczos_steps", c.lanczos_steps);
        }
        c.output = j.value("output", c.output);
        c.seed = j.value("seed", c.seed);
        c.threads = j.value("threads", c.threads);
        c.svg = j.value("svg", c.svg);
        c.validate();
        return c;
    }
    catch(const json::exception& e)
    {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
}

inline ScenarioConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if(!in) throw InvalidArgument("config: cannot open " + path);
    json j;
    try
    {
        in >> j;
    }
    catch(const json::exception& e)
    {
        throw InvalidArgument("config: " + path + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

} // namespace pfqed::scenario

#endif // PFQED_SCENARIO_SCENARIOS_HPP
