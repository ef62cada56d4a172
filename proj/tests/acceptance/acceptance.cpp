// Acceptance checks. Usage: acceptance <n> [--out DIR], or acceptance all.
// Each check prints one PASS/FAIL line and exits non-zero on failure.
// Reference values are recomputed here from closed forms where one exists;
// the library is only trusted for the quantity under test.

#include "pfqed/scenario/runner.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace pfqed;
using namespace pfqed::scenario;

namespace {

fs::path g_out = fs::temp_directory_path() / "pfqed-acceptance";

struct Outcome
{
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what)
    {
        pass = pass && ok;
        detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [fail]");
    }
};

std::string num(double v, int digits = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

struct Run
{
    RunManifest manifest;
    fs::path dir;

    CsvTable csv(const std::string& name) const { return parse_csv(read_file(dir / name)); }
};

Run run(const std::string& id, Preset preset, const std::function<void(ScenarioConfig&)>& edit = {})
{
    auto cfg = scenario_defaults(id, preset);
    if(edit) edit(cfg);
    RunOptions opt;
    opt.out_dir = g_out / (id + "-" + to_string(preset));
    opt.rethrow = true;
    return {run_scenario(cfg, opt), *opt.out_dir};
}

/// Rows of `t` whose `key` column equals `value`.
std::vector<std::size_t> rows_where(const CsvTable& t, const std::string& key, double value)
{
    const auto col = t.column(key);
    std::vector<std::size_t> r;
    for(std::size_t i = 0; i < col.size(); ++i)
        if(col[i] == value) r.push_back(i);
    return r;
}

double sum_over(const std::vector<double>& w, const std::vector<double>& l)
{
    long double s = 0.0L;
    for(std::size_t a = 0; a < w.size(); ++a) s += static_cast<long double>(l[a]) * l[a] / (static_cast<long double>(w[a]) * w[a]);
    return static_cast<double>(s);
}

/// Dressed frequencies of diag(w^2) + l l^T by dense diagonalization.
std::vector<double> dressed_dense(const std::vector<double>& w, const std::vector<double>& l)
{
    const auto n = static_cast<Eigen::Index>(w.size());
    Eigen::MatrixXd m(n, n);
    for(Eigen::Index i = 0; i < n; ++i)
        for(Eigen::Index j = 0; j < n; ++j) m(i, j) = l[i] * l[j] + (i == j ? w[i] * w[i] : 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    std::vector<double> out;
    for(Eigen::Index i = 0; i < n; ++i) out.push_back(std::sqrt(es.eigenvalues()[i]));
    return out;
}

// ---------------------------------------------------------------- criteria

void atom_levels(Outcome& o)
{
    const matter::AtomModel model;
    const auto mb = matter::atom_basis(matter::Grid1D::centered(3000, 0.0707), model, 10);
    // Bound levels of -v0 / cosh^2(k0 x).
    const double s = std::sqrt(1.0 + 8.0 * model.v0 / (model.k0 * model.k0));
    double worst = 0.0;
    for(std::size_t n = 0; n < 10; ++n)
    {
        const double t = s - 1.0 - 2.0 * static_cast<double>(n);
        const double exact = -model.k0 * model.k0 / 8.0 * t * t;
        worst = std::max(worst, std::abs(mb.energies[static_cast<Eigen::Index>(n)] / exact - 1.0));
    }
    o.check(worst <= 1e-6, "max rel dev over 10 levels " + num(worst, 3) + " (<= 1e-6)");
}

void rank_one_routes(Outcome& o)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> count(1, 500);
    double spread = 0.0, oracle = 0.0, g_max = 0.0;
    bool below_one = true;
    for(int trial = 0; trial < 100; ++trial)
    {
        const std::size_t n = count(rng);
        const double w0 = trial % 3 == 0 ? 1e-8 : std::pow(10.0, -8.0 + 8.0 * u(rng));
        std::vector<double> w(n), l(n);
        double x = w0;
        for(std::size_t a = 0; a < n; ++a)
        {
            w[a] = x;
            x += (0.01 + u(rng)) / static_cast<double>(n);
            l[a] = std::pow(10.0, -4.0 + 2.7 * u(rng));
        }
        const photon::ModeContinuum m(w, l);
        const auto r = photon::coupling_routes(m, photon::coupling_vector(m, photon::Species::electron()));
        const double S = sum_over(w, l);
        spread = std::max(spread, r.max_relative_spread());
        oracle = std::max(oracle, std::abs(r.sherman_morrison - S / (1.0 + S)) / (S / (1.0 + S)));
        below_one = below_one && r.sherman_morrison < 1.0 && r.normal_mode_sum < 1.0 && r.determinant < 1.0;
        g_max = std::max(g_max, r.sherman_morrison);
    }
    o.check(spread <= 1e-12, "route spread " + num(spread, 3) + " (<= 1e-12)");
    o.check(oracle <= 1e-12, "vs S/(1+S) " + num(oracle, 3));
    o.check(below_one, "g < 1 in all 100 (largest 1 - g = " + num(1.0 - g_max, 3) + ")");
}

void reference_masses(Outcome& o)
{
    const double quoted[3][2] = {{0.0009, 1.0336732282}, {0.0012, 1.0673464565}, {0.0019, 1.1683661411}};
    double identity = 0.0;
    std::vector<double> per_l2;
    std::ostringstream rows;
    for(const auto& q : quoted)
    {
        const auto modes = photon::sample_equidistant(0.01, 0.5, 200, q[0]);
        const double g = photon::multimode_coupling_g(modes, photon::coupling_vector(modes, photon::Species::electron()));
        const auto m = photon::renormalized_mass(1.0, g);
        const double S = sum_over(modes.frequencies(), modes.couplings());
        identity = std::max(identity, std::abs(m.observable - (1.0 + S)) / (1.0 + S));
        per_l2.push_back(m.shift / (q[0] * q[0]));
        const double dev = m.observable / q[1] - 1.0;
        rows << " lambda " << q[0] << ": m_e " << num(m.observable, 10) << " (" << num(100.0 * dev, 3) << "%)";
        if(q[0] == 0.0019) o.check(std::abs(dev) <= 0.02, "lambda 0.0019 within 2%");
    }
    o.check(identity <= 1e-12, "m_e = 1 + S to " + num(identity, 3));
    double prop = 0.0;
    for(double v : per_l2) prop = std::max(prop, std::abs(v / per_l2.front() - 1.0));
    o.check(prop <= 1e-12, "m_pt / lambda^2 spread " + num(prop, 3));
    o.detail << ";" << rows.str();
}

void gauge_equivalence(Outcome& o)
{
    const photon::Species e = photon::Species::electron();
    double lv = 0.0, lo = 0.0;
    for(const auto& [w, l] : std::vector<std::pair<double, double>>{{0.01, 0.0019}, {0.255, 0.05}, {0.5, 0.3}, {0.1, 1.0}})
    {
        const photon::ModeContinuum m({w}, {l});
        const auto nm = photon::normal_modes(m, photon::coupling_vector(m, e));
        for(int i = 0; i <= 80; ++i)
        {
            const double k = -2.0 + 0.05 * i;
            const double vel = photon::dispersion_analytic(k, nm, e).energy;
            const double len = photon::dispersion_length_gauge_single_mode(k, w, l, 1.0, 0);
            const double ref = 0.5 * k * k * w * w / (w * w + l * l) + 0.5 * std::sqrt(w * w + l * l);
            lv = std::max(lv, std::abs(len - vel) / std::abs(vel));
            lo = std::max(lo, std::abs(vel - ref) / std::abs(ref));
        }
    }
    o.check(lv <= 1e-12, "single mode length vs velocity " + num(lv, 3) + " (<= 1e-12)");
    o.check(lo <= 1e-12, "vs closed form " + num(lo, 3));

    double nv = 0.0;
    for(double lambda : {0.0019, 0.05})
    {
        const auto m = photon::sample_equidistant(0.01, 0.5, 5, lambda);
        const auto nm = photon::normal_modes(m, photon::coupling_vector(m, e));
        const auto dressed = dressed_dense(m.frequencies(), m.couplings());
        const double S = sum_over(m.frequencies(), m.couplings());
        double zp = 0.0;
        for(double x : dressed) zp += 0.5 * x;
        for(int i = 0; i <= 40; ++i)
        {
            const double k = -2.0 + 0.1 * i;
            const double numeric = qed::numeric_free_dispersion(k, m, e, 60);
            const double closed = photon::dispersion_analytic(k, nm, e).energy;
            const double oracle = 0.5 * k * k / (1.0 + S) + zp;
            nv = std::max({nv, std::abs(numeric - closed) / std::abs(closed), std::abs(numeric - oracle) / std::abs(oracle)});
        }
    }
    o.check(nv <= 1e-8, "5-mode numeric vs closed forms " + num(nv, 3) + " (<= 1e-8)");
}

void fock_dimensions(Outcome& o)
{
    const auto fb = qed::build_fock_basis(200, 2);
    o.check(fb.size() == 20301, "Fock(200) = " + std::to_string(fb.size()));
    const auto mb = std::make_shared<const matter::MatterBasis>(
        matter::atom_basis(matter::Grid1D::centered(3000, 0.0707), matter::AtomModel{}, 10));
    const auto p = qed::build_problem(mb, photon::sample_equidistant(0.01, 0.5, 200, 0.0019), qed::CouplingConfig::length());
    o.check(p.dimension() == 203010, "coupled atom = " + std::to_string(p.dimension()));
}

void perturbative_contrast(Outcome& o)
{
    double doubling = 0.0;
    for(double lo = 1e-1; lo >= 1e-7 * 0.999; lo *= 0.5)
    {
        const double r = photon::perturbative_g(0.5 * lo, photon::uv_converged, 1.0) /
                         photon::perturbative_g(lo, photon::uv_converged, 1.0);
        doubling = std::max(doubling, std::abs(r / 2.0 - 1.0));
    }
    o.check(doubling <= 1e-6, "halving Lambda_l doubles g_pert to " + num(doubling, 3));

    // Discrete continua on [Lambda_l, 1] with trapezoid weights of the same
    // integral; S tracks the perturbative value while g stays below 1.
    const double prefactor = 1e-3;
    double g_max = 0.0, pert_max = 0.0, s_dev = 0.0;
    for(int d = 1; d <= 7; ++d)
    {
        const double lo = std::pow(10.0, -d);
        const std::size_t n = 400;
        std::vector<double> w(n), l(n);
        for(std::size_t a = 0; a < n; ++a) w[a] = lo * std::pow(1.0 / lo, static_cast<double>(a) / (n - 1));
        for(std::size_t a = 0; a < n; ++a)
            l[a] = std::sqrt(prefactor * 0.5 * ((a > 0 ? w[a] - w[a - 1] : 0.0) + (a + 1 < n ? w[a + 1] - w[a] : 0.0)));
        const photon::ModeContinuum m(w, l);
        const double g = photon::multimode_coupling_g(m, l);
        const double pert = photon::perturbative_g(lo, 1.0, prefactor);
        g_max = std::max(g_max, g);
        pert_max = std::max(pert_max, pert);
        s_dev = std::max(s_dev, std::abs(sum_over(w, l) / pert - 1.0));
    }
    o.check(g_max < 1.0, "exact g <= " + num(g_max, 8) + " while g_pert reaches " + num(pert_max, 4));
    o.detail << "; S vs perturbative integral within " << num(100.0 * s_dev, 3) << "%";
}

void bqm_dse_fidelity(Outcome& o)
{
    const auto dn = [](const Run& r, const std::string& which) {
        const auto t = r.csv("delta-n.csv");
        const auto v = t.column("delta_n");
        const std::vector<std::string> names{"bqm_dse", "bare", "eff_lowest", "eff_averaged"};
        return v.at(static_cast<std::size_t>(std::find(names.begin(), names.end(), which) - names.begin()));
    };
    const auto full = run("approx-compare", Preset::full);
    // Recompute the integrated difference from the written profiles.
    const auto prof = full.csv("approx-compare.csv");
    const auto x = prof.column("x"), a = prof.column("n_nrqed"), b = prof.column("n_bqm_dse");
    double s = 0.0;
    for(std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    s *= x[1] - x[0];
    const double d_full = dn(full, "bqm_dse");
    o.check(std::abs(s - d_full) <= 1e-9 * std::max(d_full, 1e-30), "profile recomputation agrees");
    o.check(d_full <= 5e-5, "full N_p 200 N_s 10: dn(NRQED, bQM+DSE) " + num(d_full, 3) + " (<= 5e-5)");
    o.detail << "; full dn(NRQED, bare) " << num(dn(full, "bare"), 3);

    const auto desk = run("approx-compare", Preset::desk);
    const double bq = dn(desk, "bqm_dse"), bare = dn(desk, "bare");
    o.check(bq < 0.1 * bare, "desk ratio " + num(bq / bare, 3) + " (< 0.1; " + num(bq, 3) + " / " + num(bare, 3) + ")");
}

void occupation_and_saturation(Outcome& o)
{
    const auto occ = run("photon-occupation", Preset::desk).csv("photon-occupation.csv");
    for(double lambda : {0.0009, 0.0012, 0.0019})
    {
        const auto rows = rows_where(occ, "lambda", lambda);
        const auto n = occ.column("n_occ");
        std::size_t bad = 0;
        for(std::size_t i = 1; i < rows.size(); ++i)
            if(!(n[rows[i]] < n[rows[i - 1]])) ++bad;
        o.check(!rows.empty() && bad == 0, "lambda " + num(lambda) + ": n_a strictly decreasing (" +
                                               std::to_string(rows.size()) + " modes, " + std::to_string(bad) + " violations)");
    }

    const auto sat = run("density-saturation", Preset::desk).csv("density-saturation.csv");
    const auto np = sat.column("n_modes"), dn = sat.column("delta_n");
    bool monotone = true;
    for(std::size_t i = 1; i < dn.size(); ++i) monotone = monotone && np[i] > np[i - 1] && dn[i] > dn[i - 1];
    o.check(monotone, "dn(N_p) increasing");
    const auto at = [&](double n) { return dn.at(rows_where(sat, "n_modes", n).at(0)); };
    const double tail = at(200) - at(150), head = at(60) - at(10);
    o.check(tail < 0.25 * head, "dn(200)-dn(150) " + num(tail, 3) + " < 0.25 (dn(60)-dn(10)) " + num(0.25 * head, 3));
}

void red_shift(Outcome& o)
{
    const auto r = run("absorption", Preset::desk);
    const auto& fit = r.manifest.metadata.at("fit");
    const double center = fit.at("center"), qm = fit.at("qm_peak");
    o.check(qm < center, "QM lowest bright peak " + num(qm) + " < NRQED fitted peak " + num(center));
}

/// Shares scan settings (and so cache entries) with the full harmonic-vs-Np run.
molecular::PESCurve full_bare_curve()
{
    const auto cfg = scenario_defaults("harmonic-vs-Np", Preset::full);
    RunManifest m;
    OutputSink sink(g_out / "h2-bare-full", m);
    MatterCache cache;
    RunContext ctx{cfg, sink, m, cache};
    return scenario::detail::scan(ctx, "bare", matter::H2Model{}, std::nullopt, {});
}

void h2_anchors(Outcome& o)
{
    const auto curve = full_bare_curve();
    const double mu = matter::H2Model{}.mu_n();
    const double e0 = molecular::vibrational_ground_level(curve, mu);
    const auto fit = molecular::morse_fit(curve, mu);
    o.check(std::abs(curve.equilibrium() - 1.9) <= 0.05, "R_eq " + num(curve.equilibrium(), 4) + " (1.9 +- 0.05)");
    o.check(std::abs(e0 - (-1.4843)) <= 1e-3, "E_0 " + num(e0, 7) + " (-1.4843 +- 1e-3; PES minimum " +
                                                   num(curve.minimum(), 7) + ")");
    o.check(std::abs(fit.omega_e - 0.020455) <= 5e-4, "omega_e " + num(fit.omega_e, 6) + " (0.020455 +- 5e-4)");
}

void morse_widths(Outcome& o)
{
    const auto full = run("harmonic-vs-Np", Preset::full, [](ScenarioConfig& c) { c.n_modes = {50}; });
    const auto t = full.csv("harmonic-vs-Np.csv");
    const std::size_t row = rows_where(t, "n_modes", 50).at(0);
    const double a_nr = t.column("a_nrqed")[row], a_qm = t.column("a_qm")[row];
    o.check(std::abs(a_nr / 1.18811731 - 1.0) <= 0.05, "full N_p 50: a_NRQED " + num(a_nr, 6) + " (1.18811731 +- 5%)");
    o.check(std::abs(a_qm / 1.1306567 - 1.0) <= 0.05, "a_QM " + num(a_qm, 6) + " (1.1306567 +- 5%)");

    // omega_e = sqrt(2 D_e a^2 / mu_n) for every written fit.
    const double mu_bare = matter::H2Model{}.mu_n();
    const auto& fits = full.manifest.metadata.at("fits");
    double identity = 0.0;
    for(std::size_t i = 0; i < t.column("n_modes").size(); ++i)
    {
        const bool bare_row = t.column("n_modes")[i] == 0.0;
        const double mu_qm = bare_row ? mu_bare : fits.at(i - 1).at("mu_n_qm").get<double>();
        const auto dev = [](double w, double d, double a, double mu) { return std::abs(w / std::sqrt(2.0 * d * a * a / mu) - 1.0); };
        identity = std::max({identity, dev(t.column("omega_e_nrqed")[i], t.column("De_nrqed")[i], t.column("a_nrqed")[i], mu_bare),
                             dev(t.column("omega_e_qm")[i], t.column("De_qm")[i], t.column("a_qm")[i], mu_qm)});
    }
    o.check(identity <= 1e-12, "omega_e identity " + num(identity, 3));

    const auto desk = run("harmonic-vs-Np", Preset::desk).csv("harmonic-vs-Np.csv");
    std::vector<double> w_nr, w_qm;
    for(double n : {10.0, 30.0, 50.0})
    {
        const std::size_t r = rows_where(desk, "n_modes", n).at(0);
        w_nr.push_back(desk.column("omega_e_nrqed")[r]);
        w_qm.push_back(desk.column("omega_e_qm")[r]);
    }
    o.check(w_nr[0] < w_nr[1] && w_nr[1] < w_nr[2],
            "desk NRQED omega_e increasing: " + num(w_nr[0], 7) + ", " + num(w_nr[1], 7) + ", " + num(w_nr[2], 7));
    o.check(w_qm[0] > w_qm[1] && w_qm[1] > w_qm[2],
            "desk QM omega_e decreasing: " + num(w_qm[0], 7) + ", " + num(w_qm[1], 7) + ", " + num(w_qm[2], 7));
}

void cavity_enhancement(Outcome& o)
{
    const auto r = run("cavity-compare", Preset::desk);
    const auto d = r.csv("cavity-dissociation.csv");
    const auto l = d.column("lambda"), de = d.column("De_nrqed");
    const auto at = [&](double lambda) { return de.at(rows_where(d, "lambda", lambda).at(0)); };
    const double d9 = at(0.0009), d12 = at(0.0012), d19 = at(0.0019);
    o.check(d19 > d12 && d12 > d9, "D_e(0.0019) " + num(d19, 8) + " > D_e(0.0012) " + num(d12, 8) + " > D_e(0.0009) " + num(d9, 8));

    // delta n(x) against the weakest coupling, peak height per lambda.
    const auto p = r.csv("cavity-density.csv");
    const auto pl = p.column("lambda"), dn = p.column("dn_vs_lowest_lambda"), n = p.column("n_nrqed");
    std::map<double, double> dn_max, peak;
    for(std::size_t i = 0; i < pl.size(); ++i)
    {
        dn_max[pl[i]] = std::max(dn_max.count(pl[i]) ? dn_max[pl[i]] : -1e300, dn[i]);
        peak[pl[i]] = std::max(peak.count(pl[i]) ? peak[pl[i]] : -1e300, n[i]);
    }
    o.check(dn_max[0.0019] > dn_max[0.0012] && dn_max[0.0012] > 0.0,
            "max delta n " + num(dn_max[0.0012], 3) + " -> " + num(dn_max[0.0019], 3));
    o.check(peak[0.0019] > peak[0.0012] && peak[0.0012] > peak[0.0009], "peak density increasing with lambda");
}

void effective_mode(Outcome& o)
{
    const auto r = run("approx-compare", Preset::desk);
    const auto v = r.csv("delta-n.csv").column("delta_n");
    const double bq = v[0], lo = v[2], av = v[3];
    o.check(lo <= 2.0 * bq, "lowest " + num(lo, 3) + " <= 2 x " + num(bq, 3));
    o.check(av <= 2.0 * bq, "averaged " + num(av, 3) + " <= 2 x " + num(bq, 3));
    const auto eff = qed::effective_single_mode(photon::sample_equidistant(0.01, 0.5, 200, 0.0019), qed::EffectiveStrategy::averaged);
    o.check(std::abs(eff.frequency(0) - 0.255) <= 1e-14, "omega_eff " + num(eff.frequency(0), 17));
}

void ir_mismatch(Outcome& o)
{
    const auto r = run("ir-mismatch", Preset::desk);
    const auto c = r.csv("curvature.csv");
    const auto closed = c.column("curvature_closed"), numeric = c.column("curvature_numeric");
    const auto cfg = scenario_defaults("ir-mismatch", Preset::desk);
    const auto off = photon::sample_equidistant(0.001, 0.05, cfg.n_modes.front(), cfg.lambda.front());
    const double S = sum_over(off.frequencies(), off.couplings());
    const double expected = 1.0 - S / (1.0 + S);
    o.check(std::abs(numeric[1] / expected - 1.0) <= 1e-8,
            "off-continuum curvature " + num(numeric[1], 10) + " vs (1 - g_off) " + num(expected, 10));
    o.check(std::abs(closed[1] / expected - 1.0) <= 1e-12, "library g_off matches");
    o.check(numeric[1] < numeric[0], "flatter than matched " + num(numeric[0], 10));
}

struct Criterion
{
    int id;
    const char* name;
    double budget_s;
    void (*fn)(Outcome&);
};

const std::vector<Criterion> criteria = {
    {1, "atom-analytic-levels", 60, atom_levels},
    {2, "rank-one-routes", 60, rank_one_routes},
    {3, "reference-masses", 60, reference_masses},
    {4, "gauge-equivalence", 60, gauge_equivalence},
    {5, "fock-dimensions", 60, fock_dimensions},
    {6, "perturbative-contrast", 60, perturbative_contrast},
    {7, "bqm-dse-fidelity", 1800 + 120, bqm_dse_fidelity},
    {8, "occupation-saturation", 900, occupation_and_saturation},
    {9, "red-shift", 600, red_shift},
    {10, "h2-bare-anchors", 1800, h2_anchors},
    {11, "morse-widths", 10800 + 1200, morse_widths},
    {12, "cavity-enhancement", 1200, cavity_enhancement},
    {13, "effective-single-mode", 300, effective_mode},
    {14, "ir-mismatch", 120, ir_mismatch},
};

bool run_one(const Criterion& c)
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try
    {
        c.fn(o);
    }
    catch(const std::exception& e)
    {
        o.check(false, std::string("error: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(s <= c.budget_s, num(s, 3) + " s (budget " + num(c.budget_s, 5) + " s)");
    std::printf("criterion %2d %-22s %s  %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
    return o.pass;
}

} // namespace

int main(int argc, char** argv)
{
    std::string which = "all";
    for(int i = 1; i < argc; ++i)
    {
        const std::string a = argv[i];
        if(a == "--out" && i + 1 < argc) g_out = argv[++i];
        else which = a;
    }
    // Library warnings go to stderr; the verdict line is on stdout.
    set_warning_handler([](const std::string& w) { std::cerr << "warning: " << w << '\n'; });

    bool ok = true;
    bool found = false;
    for(const auto& c : criteria)
        if(which == "all" || which == std::to_string(c.id))
        {
            found = true;
            ok = run_one(c) && ok;
        }
    if(!found)
    {
        std::cerr << "usage: acceptance <1-" << criteria.size() << "|all> [--out DIR]\n";
        return 2;
    }
    return ok ? 0 : 1;
}
