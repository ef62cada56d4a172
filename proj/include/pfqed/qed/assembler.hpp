#ifndef PFQED_QED_ASSEMBLER_HPP
#define PFQED_QED_ASSEMBLER_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/linalg/sparse.hpp"
#include "pfqed/matter/basis.hpp"
#include "pfqed/photon/continuum.hpp"
#include "pfqed/qed/fock.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace pfqed::qed {

enum class Gauge
{
    length,          ///< full length-gauge Pauli-Fierz Hamiltonian
    bqm_dse,         ///< matter only plus the dipole self-energy
    effective_single ///< length gauge with the continuum reduced to one mode
};

enum class EffectiveStrategy
{
    lowest,  ///< keep the lowest mode and its coupling
    averaged ///< one mode at the mean frequency with the mean coupling
};

/// Coupling selection. Per-mode lambda values live in the ModeContinuum.
struct CouplingConfig
{
    Gauge gauge = Gauge::length;
    EffectiveStrategy strategy = EffectiveStrategy::lowest;
    bool include_bilinear = true;
    bool include_dse = true;
    /// Total photon number kept in the Fock space (1 or 2).
    int max_photons = 2;
    /// Guard on the coupled dimension N_s * dim(Fock).
    std::size_t max_dimension = 5'000'000;

    static CouplingConfig length() { return {}; }
    static CouplingConfig bqm_dse()
    {
        CouplingConfig c;
        c.gauge = Gauge::bqm_dse;
        c.include_bilinear = false;
        return c;
    }
    static CouplingConfig effective(EffectiveStrategy s)
    {
        CouplingConfig c;
        c.gauge = Gauge::effective_single;
        c.strategy = s;
        return c;
    }

    void validate() const
    {
        pfqed::detail::require(max_photons == 1 || max_photons == 2, "CouplingConfig: max_photons must be 1 or 2");
        if(gauge == Gauge::bqm_dse)
            pfqed::detail::require(!include_bilinear && include_dse,
                                   "CouplingConfig: bqm_dse requires the bilinear term off and the self-energy on");
    }
};

/// Reduce a continuum to one effective mode.
inline photon::ModeContinuum effective_single_mode(const photon::ModeContinuum& modes, EffectiveStrategy strategy)
{
    pfqed::detail::require(!modes.empty(), "effective_single_mode: empty continuum");
    if(modes.size() == 1) return modes;
    if(strategy == EffectiveStrategy::lowest) return modes.lowest(1);
    const double n = static_cast<double>(modes.size());
    const double w = std::accumulate(modes.frequencies().begin(), modes.frequencies().end(), 0.0) / n;
    const double l = std::accumulate(modes.couplings().begin(), modes.couplings().end(), 0.0) / n;
    return {{w}, {l}};
}

/// Index of (matter state i, Fock state F) in the coupled space.
inline std::size_t coupled_index(std::size_t fock, std::size_t matter, std::size_t n_states)
{
    return fock * n_states + matter;
}

/// Length-gauge Hamiltonian on MatterBasis x FockBasis:
///   sum_i E_i |i><i| + sum_a omega_a (n_a + 1/2)
///   - sum_a lambda_a sqrt(omega_a / 2) (b_a + b_a^dagger) mu
///   + 1/2 sum_a lambda_a^2 mu.mu
/// with mu.mu the square of the projected dipole matrix. Ladder
/// elements leaving the truncated Fock space are dropped.
inline linalg::SparseSymmetric assemble_length_gauge(const matter::MatterBasis& mb, const photon::ModeContinuum& modes,
                                                     const FockBasis& fb, const CouplingConfig& cfg = {})
{
    cfg.validate();
    pfqed::detail::require(fb.modes() == modes.size(), "assemble_length_gauge: Fock basis and continuum disagree on N_p");
    const std::size_t ns = mb.size();
    const std::size_t nf = fb.size();
    const std::size_t dim = ns * nf;
    if(dim > cfg.max_dimension)
        throw InvalidArgument("assemble_length_gauge: coupled dimension " + std::to_string(dim) + " exceeds the limit " +
                              std::to_string(cfg.max_dimension));

    const Eigen::MatrixXd& mu = mb.dipole;
    const Eigen::MatrixXd mu2 = mu * mu;
    const double dse = cfg.include_dse ? 0.5 * modes.coupling_norm2() : 0.0;
    const double zero_point = modes.zero_point();

    linalg::SparseBuilder b(dim);
    {
        std::size_t est = nf * ns * (ns + 1) / 2;
        if(cfg.include_bilinear)
            for(std::size_t f = 0; f < nf; ++f)
                if(fb.state(f).photons() < fb.max_photons()) est += modes.size() * ns * ns;
        b.reserve(est);
    }

    for(std::size_t f = 0; f < nf; ++f)
    {
        const FockState& s = fb.state(f);
        double photon_energy = zero_point;
        if(s.first >= 0) photon_energy += modes.frequency(static_cast<std::size_t>(s.first));
        if(s.second >= 0) photon_energy += modes.frequency(static_cast<std::size_t>(s.second));
        for(std::size_t i = 0; i < ns; ++i)
        {
            const auto I = static_cast<Eigen::Index>(i);
            b.add(coupled_index(f, i, ns), coupled_index(f, i, ns), mb.energies[I] + photon_energy + dse * mu2(I, I));
            if(dse != 0.0)
                for(std::size_t j = i + 1; j < ns; ++j)
                    b.add(coupled_index(f, i, ns), coupled_index(f, j, ns), dse * mu2(I, static_cast<Eigen::Index>(j)));
        }
        if(!cfg.include_bilinear) continue;
        for(std::size_t a = 0; a < modes.size(); ++a)
        {
            const double lambda = modes.coupling(a);
            if(lambda == 0.0) continue;
            const auto up = fb.raise(f, static_cast<int>(a));
            if(!up) continue;
            const double g = -lambda * std::sqrt(0.5 * modes.frequency(a)) * up->second;
            for(std::size_t i = 0; i < ns; ++i)
                for(std::size_t j = 0; j < ns; ++j)
                    b.add(coupled_index(up->first, j, ns), coupled_index(f, i, ns),
                          g * mu(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
        }
    }
    return std::move(b).build();
}

/// Matter-only bQM+DSE operator sum_i E_i |i><i| + 1/2 sum_a lambda_a^2 mu.mu.
inline linalg::SparseSymmetric assemble_bqm_dse(const matter::MatterBasis& mb, const photon::ModeContinuum& modes)
{
    const std::size_t ns = mb.size();
    const Eigen::MatrixXd mu2 = mb.dipole * mb.dipole;
    const double dse = 0.5 * modes.coupling_norm2();
    linalg::SparseBuilder b(ns);
    for(std::size_t i = 0; i < ns; ++i)
    {
        const auto I = static_cast<Eigen::Index>(i);
        b.add(i, i, mb.energies[I] + dse * mu2(I, I));
        for(std::size_t j = i + 1; j < ns; ++j) b.add(i, j, dse * mu2(I, static_cast<Eigen::Index>(j)));
    }
    return std::move(b).build();
}

} // namespace pfqed::qed

#endif // PFQED_QED_ASSEMBLER_HPP
