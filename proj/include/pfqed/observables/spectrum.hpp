#ifndef PFQED_OBSERVABLES_SPECTRUM_HPP
#define PFQED_OBSERVABLES_SPECTRUM_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/linalg/dense.hpp"
#include "pfqed/qed/solve.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace pfqed::observables {

/// Unit-area Lorentzian with full width at half maximum gamma.
inline double lorentzian(double omega, double center, double gamma)
{
    const double d = omega - center;
    return 0.5 * gamma / std::numbers::pi / (d * d + 0.25 * gamma * gamma);
}

/// Dipole strength function: stick spectrum plus its Lorentzian curve.
struct SpectrumData
{
    std::vector<double> excitation; // omega_n = E_n - E_0
    std::vector<double> strengths;  // 2 omega_n |<0|mu|n>|^2
    double gamma = 0.0;
    std::vector<double> omega;
    std::vector<double> curve;

    double value(double w) const
    {
        double s = 0.0;
        for(std::size_t n = 0; n < excitation.size(); ++n) s += strengths[n] * lorentzian(w, excitation[n], gamma);
        return s;
    }

    /// Exact integral of the curve over [lo, hi].
    double area(double lo, double hi) const
    {
        double s = 0.0;
        for(std::size_t n = 0; n < excitation.size(); ++n)
            s += strengths[n] / std::numbers::pi *
                 (std::atan(2.0 * (hi - excitation[n]) / gamma) - std::atan(2.0 * (lo - excitation[n]) / gamma));
        return s;
    }

    double total_strength() const
    {
        double s = 0.0;
        for(double v : strengths) s += v;
        return s;
    }

    /// The stick with the largest strength.
    std::size_t brightest() const
    {
        pfqed::detail::require(!strengths.empty(), "SpectrumData: empty spectrum");
        return static_cast<std::size_t>(std::max_element(strengths.begin(), strengths.end()) - strengths.begin());
    }
};

/// `points` uniform frequencies on [0, 1.2 max omega_n].
inline std::vector<double> default_frequency_grid(const std::vector<double>& excitation, std::size_t points = 2000)
{
    pfqed::detail::require(!excitation.empty() && points >= 2, "default_frequency_grid: no excitations");
    const double top = 1.2 * *std::max_element(excitation.begin(), excitation.end());
    std::vector<double> w(points);
    for(std::size_t i = 0; i < points; ++i) w[i] = top * static_cast<double>(i) / static_cast<double>(points - 1);
    return w;
}

inline void evaluate_curve(SpectrumData& s, std::vector<double> omega)
{
    s.omega = omega.empty() ? default_frequency_grid(s.excitation) : std::move(omega);
    s.curve.resize(s.omega.size());
    for(std::size_t i = 0; i < s.omega.size(); ++i) s.curve[i] = s.value(s.omega[i]);
}

/// <a| mu |b> for coupled states sharing one problem; mu acts on matter.
inline double transition_dipole(const qed::CoupledState& a, const qed::CoupledState& b)
{
    pfqed::detail::require(a.amplitudes.size() == b.amplitudes.size(), "transition_dipole: states from different problems");
    const auto ns = static_cast<Eigen::Index>(a.n_states());
    const auto nf = a.amplitudes.size() / ns;
    const Eigen::Map<const Eigen::MatrixXd> ca(a.amplitudes.data(), ns, nf), cb(b.amplitudes.data(), ns, nf);
    return (ca.array() * (a.matter->dipole * cb).array()).sum();
}

/// S(omega) = sum_n 2 omega_n |<0|mu|n>|^2 L(omega - omega_n) from
/// explicit eigenstates.
inline SpectrumData dipole_strength(const qed::CoupledState& ground, const std::vector<qed::CoupledState>& excited,
                                    double gamma, std::vector<double> omega = {})
{
    pfqed::detail::require(gamma > 0.0, "dipole_strength: gamma must be positive");
    pfqed::detail::require(!excited.empty(), "dipole_strength: no excited states");
    SpectrumData s;
    s.gamma = gamma;
    for(const auto& e : excited)
    {
        const double w = e.energy - ground.energy;
        const double d = transition_dipole(ground, e);
        s.excitation.push_back(w);
        s.strengths.push_back(2.0 * w * d * d);
    }
    evaluate_curve(s, std::move(omega));
    return s;
}

/// Dipole strength from a Lanczos recursion started at mu|Psi_0> (the
/// Haydock continued-fraction construction). The Ritz values and the
/// squared first components of the tridiagonal eigenvectors form a Gauss
/// quadrature of the spectral measure of mu|Psi_0>, so the bright part of
/// the spectrum converges long before individual dark states do.
inline SpectrumData dipole_strength_lanczos(const qed::CoupledProblem& p, const qed::CoupledState& ground, double gamma,
                                            std::size_t steps = 300, std::vector<double> omega = {})
{
    pfqed::detail::require(gamma > 0.0, "dipole_strength_lanczos: gamma must be positive");
    const auto ns = static_cast<Eigen::Index>(ground.n_states());
    const auto dim = ground.amplitudes.size();
    const Eigen::Map<const Eigen::MatrixXd> c0(ground.amplitudes.data(), ns, dim / ns);
    Eigen::VectorXd v(dim);
    Eigen::Map<Eigen::MatrixXd>(v.data(), ns, dim / ns) = ground.matter->dipole * c0;
    // Drop the elastic part along the ground state.
    v -= ground.amplitudes.dot(v) * ground.amplitudes;
    const double beta0 = v.norm();
    pfqed::detail::require(beta0 > 0.0, "dipole_strength_lanczos: mu|Psi_0> vanishes");

    const auto m = static_cast<Eigen::Index>(std::min<std::size_t>(steps, static_cast<std::size_t>(dim) - 1));
    Eigen::MatrixXd q(dim, m);
    std::vector<double> alpha, beta;
    q.col(0) = v / beta0;
    Eigen::VectorXd w(dim);
    Eigen::Index used = 0;
    for(Eigen::Index j = 0; j < m; ++j)
    {
        used = j + 1;
        p.hamiltonian.apply(std::span<const double>(q.col(j).data(), static_cast<std::size_t>(dim)),
                            std::span<double>(w.data(), static_cast<std::size_t>(dim)));
        alpha.push_back(q.col(j).dot(w));
        w -= alpha.back() * q.col(j);
        if(j > 0) w -= beta.back() * q.col(j - 1);
        for(int pass = 0; pass < 2; ++pass)
        {
            const Eigen::VectorXd h = q.leftCols(j + 1).transpose() * w;
            w.noalias() -= q.leftCols(j + 1) * h;
            w -= ground.amplitudes.dot(w) * ground.amplitudes;
        }
        const double b = w.norm();
        if(j + 1 == m || b < 1e-12 * std::abs(alpha.back())) break;
        beta.push_back(b);
        q.col(j + 1) = w / b;
    }

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
    for(Eigen::Index j = 0; j < used; ++j)
    {
        t(j, j) = alpha[static_cast<std::size_t>(j)];
        if(j + 1 < used) t(j, j + 1) = t(j + 1, j) = beta[static_cast<std::size_t>(j)];
    }
    const auto r = linalg::dense_sym_eig(linalg::SymmetricDense(t));

    SpectrumData s;
    s.gamma = gamma;
    for(Eigen::Index k = 0; k < used; ++k)
    {
        const double wn = r.values[k] - ground.energy;
        const double weight = beta0 * beta0 * r.vectors(0, k) * r.vectors(0, k);
        if(wn <= 0.0) continue;
        s.excitation.push_back(wn);
        s.strengths.push_back(2.0 * wn * weight);
    }
    evaluate_curve(s, std::move(omega));
    return s;
}

struct LorentzianFit
{
    double center = 0.0;
    double gamma = 0.0;
    double amplitude = 0.0;
    /// Root-mean-square residual over the window.
    double residual = 0.0;
};

namespace detail {

struct LorentzianResidual : Eigen::DenseFunctor<double>
{
    const std::vector<double>& w;
    const std::vector<double>& y;
    std::optional<double> fixed_gamma;

    LorentzianResidual(const std::vector<double>& w_, const std::vector<double>& y_, std::optional<double> g)
        : DenseFunctor<double>(g ? 2 : 3, static_cast<int>(w_.size())), w(w_), y(y_), fixed_gamma(g)
    {}

    double gamma(const InputType& x) const { return fixed_gamma ? *fixed_gamma : x[2]; }

    int operator()(const InputType& x, ValueType& f) const
    {
        for(std::size_t i = 0; i < w.size(); ++i)
            f[static_cast<Eigen::Index>(i)] = x[1] * lorentzian(w[i], x[0], gamma(x)) - y[i];
        return 0;
    }

    int df(const InputType& x, JacobianType& j) const
    {
        const double c = x[0], a = x[1], g = gamma(x);
        for(std::size_t i = 0; i < w.size(); ++i)
        {
            const auto I = static_cast<Eigen::Index>(i);
            const double d = w[i] - c;
            const double den = d * d + 0.25 * g * g;
            j(I, 0) = a * g / std::numbers::pi * d / (den * den);
            j(I, 1) = lorentzian(w[i], c, g);
            if(!fixed_gamma) j(I, 2) = a / (2.0 * std::numbers::pi) * (1.0 / den - 0.5 * g * g / (den * den));
        }
        return 0;
    }
};

} // namespace detail

/// Least-squares fit of one Lorentzian A L(omega; center, gamma) to the
/// curve samples inside [lo, hi]. With `fixed_gamma` only centre and
/// amplitude are free.
inline LorentzianFit lorentzian_fit(const SpectrumData& s, double lo, double hi,
                                    std::optional<double> fixed_gamma = std::nullopt)
{
    std::vector<double> w, y;
    for(std::size_t i = 0; i < s.omega.size(); ++i)
        if(s.omega[i] >= lo && s.omega[i] <= hi)
        {
            w.push_back(s.omega[i]);
            y.push_back(s.curve[i]);
        }
    pfqed::detail::require(w.size() >= 4, "lorentzian_fit: fewer than four samples in the window");
    if(fixed_gamma) pfqed::detail::require(*fixed_gamma > 0.0, "lorentzian_fit: gamma must be positive");

    // Start from the window maximum and its half-maximum width.
    const std::size_t top = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    std::size_t left = top, right = top;
    while(left > 0 && y[left] > 0.5 * y[top]) --left;
    while(right + 1 < y.size() && y[right] > 0.5 * y[top]) ++right;
    const double g0 = fixed_gamma ? *fixed_gamma : std::max(w[right] - w[left], 2.0 * (w[1] - w[0]));

    detail::LorentzianResidual f(w, y, fixed_gamma);
    Eigen::VectorXd x(fixed_gamma ? 2 : 3);
    x[0] = w[top];
    x[1] = y[top] * std::numbers::pi * g0 / 2.0;
    if(!fixed_gamma) x[2] = g0;

    Eigen::LevenbergMarquardt<detail::LorentzianResidual> lm(f);
    lm.setXtol(1e-15);
    lm.setFtol(1e-15);
    lm.setGtol(0.0);
    lm.setMaxfev(4000);
    const auto status = lm.minimize(x);

    Eigen::VectorXd res(static_cast<Eigen::Index>(w.size()));
    f(x, res);
    const double rms = res.norm() / std::sqrt(static_cast<double>(w.size()));
    if(status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters ||
       status == Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation || !x.allFinite() ||
       f.gamma(x) <= 0.0)
        throw ConvergenceError("lorentzian_fit: no convergence (status " + std::to_string(static_cast<int>(status)) +
                                   ", rms residual " + std::to_string(rms) + ")",
                               {rms});
    return {x[0], std::abs(f.gamma(x)), x[1], rms};
}

} // namespace pfqed::observables

#endif // PFQED_OBSERVABLES_SPECTRUM_HPP
