#ifndef PFQED_PHOTON_CONTINUUM_HPP
#define PFQED_PHOTON_CONTINUUM_HPP

#include "pfqed/core/error.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

// All quantities use adapted units: e = 4 pi eps0 = hbar = 1 and the bare
// electron mass is 1.

namespace pfqed::photon {

/// Sampled photon modes: ascending positive frequencies and one coupling
/// strength lambda per mode.
class ModeContinuum
{
public:
    ModeContinuum() = default;

    ModeContinuum(std::vector<double> frequencies, std::vector<double> couplings)
        : m_frequencies(std::move(frequencies)), m_couplings(std::move(couplings))
    {
        detail::require(m_frequencies.size() == m_couplings.size(), "ModeContinuum: one coupling per mode required");
        for(std::size_t a = 0; a < m_frequencies.size(); ++a)
        {
            detail::require(std::isfinite(m_frequencies[a]) && m_frequencies[a] > 0.0,
                            "ModeContinuum: frequencies must be positive");
            detail::require(a == 0 || m_frequencies[a] > m_frequencies[a - 1],
                            "ModeContinuum: frequencies must be strictly ascending");
            detail::require(std::isfinite(m_couplings[a]) && m_couplings[a] >= 0.0,
                            "ModeContinuum: couplings must be non-negative");
        }
    }

    std::size_t size() const noexcept { return m_frequencies.size(); }
    bool empty() const noexcept { return m_frequencies.empty(); }

    const std::vector<double>& frequencies() const noexcept { return m_frequencies; }
    const std::vector<double>& couplings() const noexcept { return m_couplings; }
    double frequency(std::size_t a) const { return m_frequencies.at(a); }
    double coupling(std::size_t a) const { return m_couplings.at(a); }

    /// Vacuum energy sum_a omega_a / 2.
    double zero_point() const { return 0.5 * std::accumulate(m_frequencies.begin(), m_frequencies.end(), 0.0); }

    /// sum_a lambda_a^2, the prefactor of the dipole self-energy.
    double coupling_norm2() const
    {
        return std::inner_product(m_couplings.begin(), m_couplings.end(), m_couplings.begin(), 0.0);
    }

    /// The lowest `n` modes.
    ModeContinuum lowest(std::size_t n) const
    {
        detail::require(n <= size(), "ModeContinuum::lowest: not enough modes");
        return {std::vector<double>(m_frequencies.begin(), m_frequencies.begin() + static_cast<std::ptrdiff_t>(n)),
                std::vector<double>(m_couplings.begin(), m_couplings.begin() + static_cast<std::ptrdiff_t>(n))};
    }

    /// Same frequencies, every coupling replaced by `lambda`.
    ModeContinuum with_uniform_coupling(double lambda) const
    {
        return {m_frequencies, std::vector<double>(size(), lambda)};
    }

private:
    std::vector<double> m_frequencies;
    std::vector<double> m_couplings;
};

/// Endpoints-inclusive equidistant grid on [omega_min, omega_max] with a
/// uniform coupling. A single mode sits at omega_min.
inline ModeContinuum sample_equidistant(double omega_min, double omega_max, std::size_t count, double lambda = 0.0)
{
    detail::require(omega_min > 0.0, "sample_equidistant: the infrared endpoint must be positive (omega_min > 0)");
    detail::require(omega_max >= omega_min, "sample_equidistant: omega_max < omega_min");
    detail::require(count >= 1, "sample_equidistant: need at least one mode");
    detail::require(count == 1 || omega_max > omega_min, "sample_equidistant: several modes need omega_max > omega_min");

    std::vector<double> w(count);
    if(count == 1)
    {
        w[0] = omega_min;
    }
    else
    {
        const double step = (omega_max - omega_min) / static_cast<double>(count - 1);
        for(std::size_t a = 0; a < count; ++a) w[a] = omega_min + static_cast<double>(a) * step;
        w.back() = omega_max;
    }
    return {std::move(w), std::vector<double>(count, lambda)};
}

/// Fixed spacing starting at omega_min (sensitivity variant of the grid).
inline ModeContinuum sample_fixed_spacing(double omega_min, double spacing, std::size_t count, double lambda = 0.0)
{
    detail::require(omega_min > 0.0, "sample_fixed_spacing: the infrared endpoint must be positive");
    detail::require(spacing > 0.0 && count >= 1, "sample_fixed_spacing: need spacing > 0 and count >= 1");
    std::vector<double> w(count);
    for(std::size_t a = 0; a < count; ++a) w[a] = omega_min + static_cast<double>(a) * spacing;
    return {std::move(w), std::vector<double>(count, lambda)};
}

/// A species of identical charged particles.
struct Species
{
    double mass = 1.0;   ///< bare mass
    double charge = 1.0; ///< |Z| in units of e
    int count = 1;       ///< number of particles

    static Species electron() { return {1.0, 1.0, 1}; }
    static Species proton(double mass = 1836.0) { return {mass, 1.0, 1}; }

    void validate() const
    {
        detail::require(mass > 0.0 && std::isfinite(mass), "Species: mass must be positive");
        detail::require(charge > 0.0 && std::isfinite(charge), "Species: charge must be positive");
        detail::require(count >= 1, "Species: count must be >= 1");
    }
};

/// Per-mode diamagnetic coupling d_a = Z lambda_a sqrt(N / m). Squared, it
/// is the rank-one update the A^2 term adds to diag(omega_a^2).
inline std::vector<double> coupling_vector(const ModeContinuum& modes, const Species& species)
{
    species.validate();
    const double scale = species.charge * std::sqrt(static_cast<double>(species.count) / species.mass);
    std::vector<double> d(modes.size());
    for(std::size_t a = 0; a < d.size(); ++a) d[a] = scale * modes.coupling(a);
    return d;
}

} // namespace pfqed::photon

#endif // PFQED_PHOTON_CONTINUUM_HPP
