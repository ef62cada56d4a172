#ifndef PFQED_MATTER_ATOM_HPP
#define PFQED_MATTER_ATOM_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/core/log.hpp"
#include "pfqed/matter/basis.hpp"
#include "pfqed/matter/grid.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace pfqed::matter {

/// Single electron in V(x) = -v0 / cosh^2(k0 x).
struct AtomModel
{
    double v0 = 10.0;
    double k0 = 0.05;
    double mass = 1.0;

    void validate() const
    {
        pfqed::detail::require(v0 > 0.0 && k0 > 0.0, "AtomModel: v0 and k0 must be positive");
        pfqed::detail::require(mass > 0.0, "AtomModel: mass must be positive");
    }

    double potential(double x) const
    {
        const double c = std::cosh(k0 * x);
        return -v0 / (c * c);
    }

    /// Number of bound levels n with sqrt(1 + 8 m v0 / k0^2) - (1 + 2n) > 0.
    std::size_t bound_count() const
    {
        const double s = std::sqrt(1.0 + 8.0 * mass * v0 / (k0 * k0));
        return static_cast<std::size_t>(std::ceil((s - 1.0) / 2.0));
    }
};

/// Standard atom grid: 3000 points, dx = 0.0707, centered.
inline Grid1D atom_grid(std::size_t n = 3000, double dx = 0.0707) { return Grid1D::centered(n, dx); }

inline linalg::SparseSymmetric atom_hamiltonian(const Grid1D& grid, const AtomModel& model)
{
    model.validate();
    grid.validate();
    const double edge = std::max(std::abs(model.potential(grid.x(0))), std::abs(model.potential(grid.x(grid.n - 1))));
    if(edge >= 1e-8 * model.v0)
        warn("atom_hamiltonian: grid may be too narrow, |V(edge)| = " + std::to_string(edge) + " exceeds 1e-8 v0");
    std::vector<double> v(grid.n);
    for(std::size_t i = 0; i < grid.n; ++i) v[i] = model.potential(grid.x(i));
    return kinetic_plus_potential(grid, model.mass, v);
}

/// Closed-form levels E_n = -(k0^2 / 8m)(sqrt(1 + 8 m v0 / k0^2) - (1 + 2n))^2
/// for n = 0 .. count-1.
inline std::vector<double> atom_analytic_levels(const AtomModel& model, std::size_t count)
{
    model.validate();
    if(count > model.bound_count())
        throw InvalidArgument("atom_analytic_levels: requested " + std::to_string(count) + " levels but the well binds only " +
                              std::to_string(model.bound_count()));
    const double s = std::sqrt(1.0 + 8.0 * model.mass * model.v0 / (model.k0 * model.k0));
    std::vector<double> e(count);
    for(std::size_t n = 0; n < count; ++n)
    {
        const double t = s - (1.0 + 2.0 * static_cast<double>(n));
        e[n] = -model.k0 * model.k0 / (8.0 * model.mass) * t * t;
    }
    return e;
}

/// MatterBasis of the atom with dipole -x.
inline MatterBasis atom_basis(const Grid1D& grid, const AtomModel& model, std::size_t n_states,
                              const MatterSolveOptions& opt = {})
{
    return eigensolve_matter(atom_hamiltonian(grid, model), grid, n_states, single_electron_dipole(grid), 1, opt);
}

} // namespace pfqed::matter

#endif // PFQED_MATTER_ATOM_HPP
