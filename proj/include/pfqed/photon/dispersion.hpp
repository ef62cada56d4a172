#ifndef PFQED_PHOTON_DISPERSION_HPP
#define PFQED_PHOTON_DISPERSION_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/photon/continuum.hpp"
#include "pfqed/photon/normal_modes.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace pfqed::photon {

struct RenormalizedMass
{
    double observable = 1.0; ///< m_e = m / (1 - g)
    double shift = 0.0;      ///< m_pt = m_e - m
};

inline RenormalizedMass renormalized_mass(double m, double g)
{
    pfqed::detail::require(m > 0.0 && std::isfinite(m), "renormalized_mass: mass must be positive");
    pfqed::detail::require(g >= 0.0, "renormalized_mass: g must be non-negative");
    pfqed::detail::require(g < 1.0, "renormalized_mass: g >= 1 is outside the non-perturbative bound g < 1");
    const double me = m / (1.0 - g);
    return {me, me - m};
}

/// Bare mass that yields the observable mass `m_e` for coupling `g`.
inline double bare_mass(double m_e, double g)
{
    pfqed::detail::require(m_e > 0.0, "bare_mass: mass must be positive");
    pfqed::detail::require(g >= 0.0 && g < 1.0, "bare_mass: need 0 <= g < 1");
    return m_e * (1.0 - g);
}

struct DispersionPoint
{
    double k = 0.0;
    std::vector<int> occupations;
    double energy = 0.0;
};

/// Free-particle energy E = k^2 (1 - g) / 2m + sum_a Omega_a (n_a + 1/2).
/// An empty occupation list means the photon vacuum.
inline DispersionPoint dispersion_analytic(double k, const NormalModeSet& nm, const Species& species,
                                           std::vector<int> occupations = {}, bool subtract_zero_point = false)
{
    species.validate();
    if(occupations.empty()) occupations.assign(nm.size(), 0);
    pfqed::detail::require(occupations.size() == nm.size(), "dispersion_analytic: one occupation per mode required");
    double photons = 0.0;
    for(std::size_t a = 0; a < nm.size(); ++a)
    {
        pfqed::detail::require(occupations[a] >= 0, "dispersion_analytic: occupations must be non-negative");
        photons += nm.dressed[a] * (occupations[a] + (subtract_zero_point ? 0.0 : 0.5));
    }
    const double kinetic = k * k / (2.0 * species.mass) * (1.0 - nm.g);
    return {k, std::move(occupations), kinetic + photons};
}

/// Length-gauge single-mode free-particle energy for a unit charge. The
/// scaled coordinates x' = lambda x / omega, m' = m omega^2 / lambda^2
/// separate into a free polariton along w with mass m' + 1 and momentum
/// k_w = (omega / lambda) k, and an oscillator of frequency
/// omega sqrt(1 + 1/m').
inline double dispersion_length_gauge_single_mode(double k, double omega, double lambda, double m, int n)
{
    pfqed::detail::require(omega > 0.0 && m > 0.0 && lambda >= 0.0 && n >= 0,
                           "dispersion_length_gauge_single_mode: invalid inputs");
    if(lambda == 0.0) return k * k / (2.0 * m) + omega * (n + 0.5);
    const double mbar = m * omega * omega / (lambda * lambda);
    const double kw = omega / lambda * k;
    const double wtilde = omega * std::sqrt(1.0 + 1.0 / mbar);
    return kw * kw / (2.0 * (mbar + 1.0)) + wtilde * (n + 0.5);
}

/// Marks an infinite upper cutoff for perturbative_g.
inline constexpr double uv_converged = std::numeric_limits<double>::infinity();

/// Second-order coupling prefactor * (1/Lambda_l - 1/Lambda_u).
inline double perturbative_g(double lambda_l, double lambda_u, double prefactor)
{
    if(!(lambda_l > 0.0))
        throw InvalidArgument("perturbative_g: Lambda_l must be positive; the perturbative coupling diverges in the "
                              "infrared limit Lambda_l -> 0");
    pfqed::detail::require(lambda_u >= lambda_l, "perturbative_g: need Lambda_l <= Lambda_u");
    const double upper = std::isinf(lambda_u) ? 0.0 : 1.0 / lambda_u;
    return prefactor * (1.0 / lambda_l - upper);
}

} // namespace pfqed::photon

#endif // PFQED_PHOTON_DISPERSION_HPP
