#ifndef PFQED_MOLECULAR_POPES_HPP
#define PFQED_MOLECULAR_POPES_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/linalg/banded.hpp"
#include "pfqed/matter/grid.hpp"
#include "pfqed/matter/h2.hpp"
#include "pfqed/photon/continuum.hpp"
#include "pfqed/photon/dispersion.hpp"
#include "pfqed/photon/normal_modes.hpp"
#include "pfqed/qed/solve.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace pfqed::molecular {

/// Ground-state potential energy surface E(R).
struct PESCurve
{
    std::vector<double> R;
    std::vector<double> energies;
    std::string label;
    std::size_t n_modes = 0;
    double lambda = 0.0;
    /// Largest solver residual per R point.
    std::vector<double> residuals;

    std::size_t size() const noexcept { return R.size(); }

    std::size_t argmin() const
    {
        pfqed::detail::require(!energies.empty(), "PESCurve: empty curve");
        return static_cast<std::size_t>(std::min_element(energies.begin(), energies.end()) - energies.begin());
    }

    double equilibrium() const { return R[argmin()]; }
    double minimum() const { return energies[argmin()]; }

    /// Energy at the point nearest to r.
    double at(double r) const
    {
        std::size_t best = 0;
        for(std::size_t i = 1; i < R.size(); ++i)
            if(std::abs(R[i] - r) < std::abs(R[best] - r)) best = i;
        return energies[best];
    }
};

/// R = step, 2 step, ..., up to r_max inclusive.
inline std::vector<double> separation_grid(double r_max = 9.0, double step = 0.1)
{
    pfqed::detail::require(step > 0.0 && r_max > step, "separation_grid: need 0 < step < r_max");
    const auto n = static_cast<std::size_t>(std::llround(r_max / step));
    std::vector<double> r(n);
    for(std::size_t i = 0; i < n; ++i) r[i] = step * static_cast<double>(i + 1);
    return r;
}

/// Source of the per-R matter basis; lets callers insert a cache.
using MatterProvider = std::function<matter::MatterBasis(double R)>;

struct PesScanOptions
{
    std::size_t threads = 1;
    std::string label = "bare";
    /// Optional replacement for the direct h2_basis solve.
    MatterProvider provider;
    linalg::KrylovOptions krylov{};
};

/// Per-R ground energy with an optional photon continuum coupled per
/// `cfg`. With photons attached the vacuum energy 1/2 sum omega is
/// subtracted so curves are comparable to the bare one.
inline PESCurve pes_scan(const std::vector<double>& R, const matter::H2Model& model, const matter::Grid1D& grid,
                         std::size_t n_states, const std::optional<photon::ModeContinuum>& photons = std::nullopt,
                         const qed::CouplingConfig& cfg = {}, const PesScanOptions& opt = {})
{
    pfqed::detail::require(!R.empty(), "pes_scan: empty R grid");
    for(std::size_t i = 0; i < R.size(); ++i)
    {
        pfqed::detail::require(R[i] > 0.0, "pes_scan: R must be positive");
        if(i > 0) pfqed::detail::require(R[i] > R[i - 1], "pes_scan: R must be ascending");
    }

    PESCurve curve;
    curve.R = R;
    curve.label = opt.label;
    curve.energies.assign(R.size(), 0.0);
    curve.residuals.assign(R.size(), 0.0);
    if(photons)
    {
        curve.n_modes = photons->size();
        curve.lambda = photons->empty() ? 0.0 : photons->coupling(0);
    }

    matter::MatterSolveOptions mopt;
    mopt.krylov = opt.krylov;
    mopt.keep_vectors = false;
    auto solve_point = [&](std::size_t i) {
        const double r = R[i];
        const matter::MatterBasis mb =
            opt.provider ? opt.provider(r) : matter::h2_basis(r, grid, model, n_states, matter::ExchangeSectors::all, mopt);
        double residual = mb.residuals.empty() ? 0.0 : *std::max_element(mb.residuals.begin(), mb.residuals.end());
        if(!photons)
        {
            curve.energies[i] = mb.energies[0];
        }
        else
        {
            const auto p = qed::build_problem(mb.truncated(std::min(n_states, mb.size())), *photons, cfg);
            const auto gs = qed::ground_state(p, opt.krylov);
            curve.energies[i] = gs.energy - p.zero_point();
            residual = std::max(residual, gs.residual);
        }
        curve.residuals[i] = residual;
    };

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::string failed_at;
    std::mutex failure_mutex;
    auto worker = [&] {
        for(std::size_t i = next++; i < R.size(); i = next++)
        {
            try
            {
                solve_point(i);
            }
            catch(...)
            {
                std::lock_guard lock(failure_mutex);
                if(!failure)
                {
                    failure = std::current_exception();
                    failed_at = std::to_string(R[i]);
                }
                next = R.size();
            }
        }
    };
    const std::size_t nt = std::clamp<std::size_t>(opt.threads, 1, R.size());
    if(nt == 1) worker();
    else
    {
        std::vector<std::thread> pool;
        for(std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
        for(auto& th : pool) th.join();
    }
    if(failure)
    {
        try
        {
            std::rethrow_exception(failure);
        }
        catch(const ConvergenceError& e)
        {
            throw ConvergenceError("pes_scan: solve failed at R = " + failed_at + ": " + e.what(), e.residuals());
        }
        catch(const std::exception& e)
        {
            throw Error("pes_scan: solve failed at R = " + failed_at + ": " + e.what());
        }
    }
    return curve;
}

/// D_e = E(R_max) - min E. Rejects curves whose minimum sits on the boundary.
inline double dissociation_energy(const PESCurve& curve)
{
    pfqed::detail::require(curve.size() >= 3, "dissociation_energy: curve too short");
    const std::size_t i = curve.argmin();
    if(i == 0 || i + 1 == curve.size())
        throw InvalidArgument("dissociation_energy: curve has no interior minimum");
    return curve.energies.back() - curve.energies[i];
}

/// |E(R_max) - E(R_max - 1)|, the flatness of the dissociation plateau.
inline double plateau_drift(const PESCurve& curve)
{
    return std::abs(curve.energies.back() - curve.at(curve.R.back() - 1.0));
}

/// omega_e = sqrt(2 D_e a^2 / mu_n).
inline double harmonic_frequency(double d_e, double a, double mu_n)
{
    pfqed::detail::require(d_e > 0.0 && a > 0.0 && mu_n > 0.0, "harmonic_frequency: inputs must be positive");
    return std::sqrt(2.0 * d_e * a * a / mu_n);
}

/// Morse model D_e (exp(-a (R - R_eq)) - 1)^2 + C with k = 2 D_e a^2 = mu_n omega_e^2.
struct MorseFit
{
    double d_e = 0.0;
    double a = 0.0;
    double c = 0.0;
    double r_eq = 0.0;
    double omega_e = 0.0;
    double k = 0.0;
    /// Root-mean-square residual over the fitted points.
    double residual = 0.0;
    std::size_t points = 0;

    double operator()(double r) const
    {
        const double e = std::exp(-a * (r - r_eq)) - 1.0;
        return d_e * e * e + c;
    }
};

namespace detail {

struct MorseResidual : Eigen::DenseFunctor<double>
{
    const std::vector<double>& r;
    const std::vector<double>& e;
    double d_e, r_eq, c;

    MorseResidual(const std::vector<double>& r_, const std::vector<double>& e_, double d, double req, double c_)
        : DenseFunctor<double>(1, static_cast<int>(r_.size())), r(r_), e(e_), d_e(d), r_eq(req), c(c_)
    {}

    int operator()(const InputType& x, ValueType& f) const
    {
        for(std::size_t i = 0; i < r.size(); ++i)
        {
            const double u = std::exp(-x[0] * (r[i] - r_eq)) - 1.0;
            f[static_cast<Eigen::Index>(i)] = d_e * u * u + c - e[i];
        }
        return 0;
    }

    int df(const InputType& x, JacobianType& j) const
    {
        for(std::size_t i = 0; i < r.size(); ++i)
        {
            const double ex = std::exp(-x[0] * (r[i] - r_eq));
            j(static_cast<Eigen::Index>(i), 0) = -2.0 * d_e * (ex - 1.0) * ex * (r[i] - r_eq);
        }
        return 0;
    }
};

} // namespace detail

/// One-parameter least squares for the Morse width a with R_eq, D_e and
/// C held fixed. Points outside [window_lo, window_hi] are ignored.
inline MorseFit morse_fit(const PESCurve& curve, double r_eq, double d_e, double c, double mu_n,
                          double window_lo = -std::numeric_limits<double>::infinity(),
                          double window_hi = std::numeric_limits<double>::infinity())
{
    pfqed::detail::require(d_e > 0.0, "morse_fit: D_e must be positive");
    std::vector<double> r, e;
    for(std::size_t i = 0; i < curve.size(); ++i)
        if(curve.R[i] >= window_lo && curve.R[i] <= window_hi)
        {
            r.push_back(curve.R[i]);
            e.push_back(curve.energies[i]);
        }
    pfqed::detail::require(r.size() >= 3, "morse_fit: fewer than three points in the window");

    // Start from the discrete curvature at the minimum, k = 2 D_e a^2.
    double a0 = 1.0;
    const std::size_t m = curve.argmin();
    if(m > 0 && m + 1 < curve.size())
    {
        const double h = curve.R[m + 1] - curve.R[m];
        const double k = (curve.energies[m + 1] - 2.0 * curve.energies[m] + curve.energies[m - 1]) / (h * h);
        if(k > 0.0) a0 = std::sqrt(k / (2.0 * d_e));
    }

    detail::MorseResidual f(r, e, d_e, r_eq, c);
    Eigen::VectorXd x(1);
    x[0] = a0;
    Eigen::LevenbergMarquardt<detail::MorseResidual> lm(f);
    lm.setXtol(1e-15);
    lm.setFtol(1e-15);
    lm.setGtol(0.0);
    lm.setMaxfev(2000);
    const auto status = lm.minimize(x);
    Eigen::VectorXd res(static_cast<Eigen::Index>(r.size()));
    f(x, res);
    const double rms = res.norm() / std::sqrt(static_cast<double>(r.size()));
    if(status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters ||
       status == Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation || !(x[0] > 0.0))
        throw ConvergenceError("morse_fit: no convergence (status " + std::to_string(static_cast<int>(status)) +
                                   ", a = " + std::to_string(x[0]) + ", rms residual " + std::to_string(rms) + ")",
                               {rms});

    MorseFit out;
    out.d_e = d_e;
    out.a = x[0];
    out.c = c;
    out.r_eq = r_eq;
    out.omega_e = harmonic_frequency(d_e, out.a, mu_n);
    out.k = 2.0 * d_e * out.a * out.a;
    out.residual = rms;
    out.points = r.size();
    return out;
}

/// Morse fit with R_eq, C = min E and D_e = E(R_max) - min E read off the curve.
inline MorseFit morse_fit(const PESCurve& curve, double mu_n,
                          double window_lo = -std::numeric_limits<double>::infinity(),
                          double window_hi = std::numeric_limits<double>::infinity())
{
    return morse_fit(curve, curve.equilibrium(), dissociation_energy(curve), curve.minimum(), mu_n, window_lo,
                     window_hi);
}

/// Observable nuclear mass M / (1 - g_p) for a nucleus of the given species
/// coupled to the continuum.
inline double proton_renormalized_mass(const photon::ModeContinuum& modes,
                                       const photon::Species& proton = photon::Species::proton())
{
    if(modes.empty() || modes.coupling_norm2() == 0.0) return proton.mass;
    const double g = photon::multimode_coupling_g(modes, photon::coupling_vector(modes, proton));
    return photon::renormalized_mass(proton.mass, g).observable;
}

/// Renormalized-mass (QM setting) molecule: the observable electron mass
/// of a single electron and the observable proton mass.
inline matter::H2Model renormalized_h2_model(const photon::ModeContinuum& modes, matter::H2Model model = {})
{
    const photon::Species electron{model.electron_mass, 1.0, 1};
    if(!modes.empty() && modes.coupling_norm2() > 0.0)
    {
        const double g = photon::multimode_coupling_g(modes, photon::coupling_vector(modes, electron));
        model.electron_mass = photon::renormalized_mass(electron.mass, g).observable;
    }
    model.nuclear_mass = proton_renormalized_mass(modes, photon::Species::proton(model.nuclear_mass));
    return model;
}

/// Lowest vibrational level of the nuclear problem -1/(2 mu_n) d^2/dR^2 + E(R)
/// on the scan grid (uniform spacing required), 8th-order differences with
/// hard walls at the grid ends.
inline double vibrational_ground_level(const PESCurve& curve, double mu_n)
{
    pfqed::detail::require(curve.size() >= 9, "vibrational_ground_level: need at least 9 R points");
    const double h = curve.R[1] - curve.R[0];
    for(std::size_t i = 1; i < curve.size(); ++i)
        pfqed::detail::require(std::abs(curve.R[i] - curve.R[i - 1] - h) < 1e-9 * h,
                               "vibrational_ground_level: R grid must be uniform");
    const matter::Grid1D g(curve.R.front(), h, curve.size());
    const auto hn = matter::kinetic_plus_potential(g, mu_n, curve.energies);
    return linalg::banded_lowest(hn, 1).values[0];
}

} // namespace pfqed::molecular

#endif // PFQED_MOLECULAR_POPES_HPP
