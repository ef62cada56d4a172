#ifndef PFQED_QED_SOLVE_HPP
#define PFQED_QED_SOLVE_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/linalg/krylov.hpp"
#include "pfqed/matter/basis.hpp"
#include "pfqed/photon/continuum.hpp"
#include "pfqed/qed/assembler.hpp"
#include "pfqed/qed/fock.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace pfqed::qed {

/// An assembled coupled Hamiltonian together with the bases it acts on.
/// For bqm_dse the Fock space is the vacuum alone and `modes` is empty.
struct CoupledProblem
{
    linalg::SparseSymmetric hamiltonian;
    std::shared_ptr<const matter::MatterBasis> matter;
    std::shared_ptr<const FockBasis> fock;
    photon::ModeContinuum modes;
    CouplingConfig config;

    std::size_t dimension() const { return hamiltonian.order(); }
    /// Photon vacuum energy contained in the eigenvalues.
    double zero_point() const { return modes.zero_point(); }
};

/// Assemble the Hamiltonian selected by `cfg`.
inline CoupledProblem build_problem(std::shared_ptr<const matter::MatterBasis> mb, const photon::ModeContinuum& modes,
                                    const CouplingConfig& cfg = {})
{
    cfg.validate();
    pfqed::detail::require(mb != nullptr && mb->size() >= 1, "build_problem: empty matter basis");
    CoupledProblem p;
    p.matter = std::move(mb);
    p.config = cfg;
    switch(cfg.gauge)
    {
    case Gauge::bqm_dse:
        p.fock = std::make_shared<FockBasis>(0, 0);
        p.hamiltonian = assemble_bqm_dse(*p.matter, modes);
        break;
    case Gauge::effective_single:
        p.modes = effective_single_mode(modes, cfg.strategy);
        p.fock = std::make_shared<FockBasis>(p.modes.size(), cfg.max_photons);
        p.hamiltonian = assemble_length_gauge(*p.matter, p.modes, *p.fock, cfg);
        break;
    case Gauge::length:
        p.modes = modes;
        p.fock = std::make_shared<FockBasis>(modes.size(), cfg.max_photons);
        p.hamiltonian = assemble_length_gauge(*p.matter, p.modes, *p.fock, cfg);
        break;
    }
    return p;
}

inline CoupledProblem build_problem(const matter::MatterBasis& mb, const photon::ModeContinuum& modes,
                                    const CouplingConfig& cfg = {})
{
    return build_problem(std::make_shared<const matter::MatterBasis>(mb), modes, cfg);
}

/// Eigenstate of a coupled Hamiltonian with amplitudes c[F * N_s + i].
struct CoupledState
{
    double energy = 0.0;
    Eigen::VectorXd amplitudes;
    std::shared_ptr<const matter::MatterBasis> matter;
    std::shared_ptr<const FockBasis> fock;
    photon::ModeContinuum modes;
    double residual = 0.0;

    std::size_t n_states() const { return matter->size(); }

    /// Amplitudes of Fock state F as a matter-space vector.
    Eigen::Map<const Eigen::VectorXd> fock_block(std::size_t f) const
    {
        const auto ns = static_cast<Eigen::Index>(n_states());
        return {amplitudes.data() + static_cast<Eigen::Index>(f) * ns, ns};
    }

    /// Reduced matter density matrix rho_ij = sum_F c_iF c_jF.
    Eigen::MatrixXd matter_density_matrix() const
    {
        const auto ns = static_cast<Eigen::Index>(n_states());
        const Eigen::Map<const Eigen::MatrixXd> c(amplitudes.data(), ns, amplitudes.size() / ns);
        return c * c.transpose();
    }
};

namespace detail {

inline std::vector<CoupledState> to_states(const CoupledProblem& p, const linalg::EigenResult& r)
{
    std::vector<CoupledState> out;
    for(Eigen::Index j = 0; j < r.values.size(); ++j)
    {
        CoupledState s;
        s.energy = r.values[j];
        s.amplitudes = r.vectors.col(j);
        s.amplitudes /= s.amplitudes.norm();
        s.matter = p.matter;
        s.fock = p.fock;
        s.modes = p.modes;
        s.residual = r.residuals[static_cast<std::size_t>(j)];
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace detail

/// The `k` lowest eigenstates, ground state first.
inline std::vector<CoupledState> lowest_states(const CoupledProblem& p, std::size_t k,
                                               const linalg::KrylovOptions& opt = {})
{
    return detail::to_states(p, linalg::krylov_lowest(p.hamiltonian, k, opt));
}

inline CoupledState ground_state(const CoupledProblem& p, const linalg::KrylovOptions& opt = {})
{
    return std::move(lowest_states(p, 1, opt).front());
}

/// The `k` lowest eigenstates above the ground state.
inline std::vector<CoupledState> excited_states(const CoupledProblem& p, std::size_t k,
                                                const linalg::KrylovOptions& opt = {})
{
    auto all = lowest_states(p, k + 1, opt);
    all.erase(all.begin());
    return all;
}

enum class OccupationGauge
{
    length,  ///< <b_a^dagger b_a> of the length-gauge ladder operators
    velocity ///< occupation of the displaced operators b_a - kappa_a mu
};

/// Displacement relating length- and velocity-gauge photon operators,
/// kappa_a = lambda_a / sqrt(2 omega_a). The length-gauge bilinear term
/// -omega_a q_a lambda_a mu shifts the oscillator centre by
/// lambda_a mu / omega_a, i.e. <b_a> by kappa_a mu; the velocity-gauge
/// quanta count excitations about that centre.
inline double velocity_displacement(double omega, double lambda) { return lambda / std::sqrt(2.0 * omega); }

/// Mean photon number per mode.
inline std::vector<double> photon_occupation(const CoupledState& s, OccupationGauge gauge = OccupationGauge::velocity)
{
    const FockBasis& fb = *s.fock;
    const std::size_t np = fb.modes();
    std::vector<double> n(np, 0.0);
    if(np == 0) return n;

    std::vector<double> weight(fb.size());
    for(std::size_t f = 0; f < fb.size(); ++f) weight[f] = s.fock_block(f).squaredNorm();
    for(std::size_t f = 0; f < fb.size(); ++f)
    {
        const FockState& st = fb.state(f);
        if(st.first >= 0) n[static_cast<std::size_t>(st.first)] += weight[f];
        if(st.second >= 0) n[static_cast<std::size_t>(st.second)] += weight[f];
    }
    if(gauge == OccupationGauge::length) return n;

    // n_V = <b^dag b> - 2 kappa <mu b> + kappa^2 <mu^2> for real states.
    const Eigen::MatrixXd& mu = s.matter->dipole;
    const Eigen::MatrixXd mu2 = mu * mu;
    double mu2_expect = 0.0;
    std::vector<double> mu_b(np, 0.0);
    for(std::size_t f = 0; f < fb.size(); ++f)
    {
        const auto cf = s.fock_block(f);
        mu2_expect += cf.dot(mu2 * cf);
        const Eigen::VectorXd mc = mu * cf;
        for(std::size_t a = 0; a < np; ++a)
        {
            const auto up = fb.raise(f, static_cast<int>(a));
            if(!up) continue;
            // <F| b_a |F'> = sqrt(n_a(F) + 1) for F' = b_a^dagger F.
            mu_b[a] += up->second * mc.dot(s.fock_block(up->first));
        }
    }
    for(std::size_t a = 0; a < np; ++a)
    {
        const double kappa = velocity_displacement(s.modes.frequency(a), s.modes.coupling(a));
        n[a] += -2.0 * kappa * mu_b[a] + kappa * kappa * mu2_expect;
    }
    return n;
}

/// <mu> in the state.
inline double dipole_expectation(const CoupledState& s)
{
    const Eigen::MatrixXd rho = s.matter_density_matrix();
    return (rho.array() * s.matter->dipole.array()).sum();
}

/// <q_a> = sqrt(2 / omega_a) <b_a> per mode.
inline std::vector<double> displacement_expectation(const CoupledState& s)
{
    const FockBasis& fb = *s.fock;
    std::vector<double> q(fb.modes(), 0.0);
    for(std::size_t f = 0; f < fb.size(); ++f)
        for(std::size_t a = 0; a < fb.modes(); ++a)
        {
            const auto up = fb.raise(f, static_cast<int>(a));
            if(!up) continue;
            q[a] += up->second * s.fock_block(f).dot(s.fock_block(up->first));
        }
    for(std::size_t a = 0; a < q.size(); ++a) q[a] *= std::sqrt(2.0 / s.modes.frequency(a));
    return q;
}

} // namespace pfqed::qed

#endif // PFQED_QED_SOLVE_HPP
