#ifndef PFQED_QED_FREE_PARTICLE_HPP
#define PFQED_QED_FREE_PARTICLE_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/core/log.hpp"
#include "pfqed/linalg/dense.hpp"
#include "pfqed/photon/continuum.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

namespace pfqed::qed {

namespace detail {

/// Lowest eigenvalue of Omega (n + 1/2) - f (a + a^dagger) / sqrt(2 Omega)
/// in the oscillator basis n = 0 .. n_max-1.
inline double shifted_oscillator_ground(double omega, double force, std::size_t n_max)
{
    const auto n = static_cast<Eigen::Index>(n_max);
    Eigen::VectorXd diag(n), off(std::max<Eigen::Index>(n - 1, 0));
    const double c = -force / std::sqrt(2.0 * omega);
    for(Eigen::Index i = 0; i < n; ++i)
    {
        diag[i] = omega * (static_cast<double>(i) + 0.5);
        if(i + 1 < n) off[i] = c * std::sqrt(static_cast<double>(i + 1));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

/// Basis size for a coherent shift |alpha| = f / sqrt(2 Omega^3): the
/// number distribution is Poisson with mean |alpha|^2, so cover the mean
/// plus many standard deviations.
inline std::size_t oscillator_basis(double omega, double force, std::size_t n_min)
{
    const double alpha = std::abs(force) / std::sqrt(2.0 * omega * omega * omega);
    return std::max(n_min, static_cast<std::size_t>(std::ceil(alpha * alpha + 12.0 * alpha + 30.0)));
}

struct FreeParticleModes
{
    std::vector<double> omega; // normal-mode frequencies
    std::vector<double> force; // (O^T Z lambda)_b per unit k/m
};

/// Normal modes of the velocity-gauge photon field from a dense
/// diagonalization of diag(omega^2) + (N Z^2 / m) lambda lambda^T.
inline FreeParticleModes free_particle_modes(const photon::ModeContinuum& modes, const photon::Species& species)
{
    const auto n = static_cast<Eigen::Index>(modes.size());
    Eigen::VectorXd c(n);
    for(Eigen::Index a = 0; a < n; ++a)
        c[a] = species.charge * std::sqrt(static_cast<double>(species.count)) * modes.coupling(static_cast<std::size_t>(a));
    Eigen::MatrixXd w = c * c.transpose() / species.mass;
    for(Eigen::Index a = 0; a < n; ++a) w(a, a) += std::pow(modes.frequency(static_cast<std::size_t>(a)), 2);
    const auto r = linalg::dense_sym_eig(linalg::SymmetricDense(w));
    const Eigen::VectorXd proj = r.vectors.transpose() * c;
    FreeParticleModes out;
    for(Eigen::Index b = 0; b < n; ++b)
    {
        out.omega.push_back(std::sqrt(r.values[b]));
        out.force.push_back(proj[b]);
    }
    return out;
}

inline double free_energy(double k, const FreeParticleModes& fm, double mass, std::size_t n_max, std::size_t widen = 1)
{
    double e = k * k / (2.0 * mass);
    for(std::size_t b = 0; b < fm.omega.size(); ++b)
    {
        const double f = k / mass * fm.force[b];
        e += shifted_oscillator_ground(fm.omega[b], f, widen * oscillator_basis(fm.omega[b], f, n_max));
    }
    return e;
}

} // namespace detail

/// Lowest energy at conserved momentum k of a free charged particle in
/// the velocity-gauge Pauli-Fierz Hamiltonian. The photon field is
/// rotated to numerical normal modes; the p.A term then shifts each of
/// them, and every shifted oscillator is diagonalized in a truncated
/// number basis of at least n_max states, widened to cover its coherent
/// displacement. Warns when doubling the bases moves the result by more
/// than 1e-8.
inline double numeric_free_dispersion(double k, const photon::ModeContinuum& modes, const photon::Species& species,
                                      std::size_t n_max = 40)
{
    species.validate();
    pfqed::detail::require(n_max >= 2, "numeric_free_dispersion: n_max must be >= 2");
    if(modes.empty()) return k * k / (2.0 * species.mass);
    const auto fm = detail::free_particle_modes(modes, species);
    const double e = detail::free_energy(k, fm, species.mass, n_max);
    const double check = detail::free_energy(k, fm, species.mass, n_max, 2);
    if(std::abs(check - e) > 1e-8)
        warn("numeric_free_dispersion: oscillator truncation n_max=" + std::to_string(n_max) +
             " not converged (change " + std::to_string(std::abs(check - e)) + " on doubling)");
    return e;
}

} // namespace pfqed::qed

#endif // PFQED_QED_FREE_PARTICLE_HPP
