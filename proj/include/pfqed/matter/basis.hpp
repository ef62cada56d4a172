#ifndef PFQED_MATTER_BASIS_HPP
#define PFQED_MATTER_BASIS_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/linalg/banded.hpp"
#include "pfqed/linalg/krylov.hpp"
#include "pfqed/linalg/sparse.hpp"
#include "pfqed/matter/grid.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace pfqed::matter {

/// The N_s lowest matter eigenstates with their dipole matrix.
///
/// `vectors` holds unit-norm columns over the grid (the product grid for
/// two electrons); the physical wavefunction is vectors / sqrt(weight()).
struct MatterBasis
{
    Grid1D grid;
    int electrons = 1;
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
    Eigen::MatrixXd dipole;
    std::vector<double> residuals;

    std::size_t size() const noexcept { return static_cast<std::size_t>(energies.size()); }

    /// Quadrature weight of one grid cell: dx per electron coordinate.
    double weight() const { return std::pow(grid.dx, electrons); }

    bool has_vectors() const noexcept { return vectors.cols() > 0; }

    /// psi_i sampled on the grid, normalized so that weight() * sum psi^2 = 1.
    Eigen::VectorXd wavefunction(std::size_t i) const
    {
        pfqed::detail::require(has_vectors(), "MatterBasis: wavefunctions were not retained");
        return vectors.col(static_cast<Eigen::Index>(i)) / std::sqrt(weight());
    }

    /// The lowest `count` states.
    MatterBasis truncated(std::size_t count) const
    {
        pfqed::detail::require(count >= 1 && count <= size(), "MatterBasis::truncated: invalid state count");
        const auto c = static_cast<Eigen::Index>(count);
        MatterBasis out;
        out.grid = grid;
        out.electrons = electrons;
        out.energies = energies.head(c);
        if(has_vectors()) out.vectors = vectors.leftCols(c);
        out.dipole = dipole.topLeftCorner(c, c);
        out.residuals.assign(residuals.begin(), residuals.begin() + std::min<std::ptrdiff_t>(c, static_cast<std::ptrdiff_t>(residuals.size())));
        return out;
    }

    /// Same states with every energy shifted by `shift`.
    MatterBasis shifted(double shift) const
    {
        MatterBasis out = *this;
        out.energies.array() += shift;
        return out;
    }
};

struct MatterSolveOptions
{
    /// Operators with bandwidth up to this value go through the banded
    /// LAPACK path; wider ones through Krylov.
    std::size_t banded_limit = 64;
    linalg::KrylovOptions krylov{};
    bool keep_vectors = true;
};

/// mu_ij = <psi_i| mu |psi_j> for unit-norm grid vectors and a diagonal
/// dipole operator.
inline Eigen::MatrixXd dipole_matrix(const Eigen::MatrixXd& vectors, const std::vector<double>& dipole_values)
{
    pfqed::detail::require(static_cast<std::size_t>(vectors.rows()) == dipole_values.size(),
                           "dipole_matrix: dipole operator length must equal the grid size");
    const Eigen::Map<const Eigen::VectorXd> mu(dipole_values.data(), static_cast<Eigen::Index>(dipole_values.size()));
    Eigen::MatrixXd m = vectors.transpose() * (mu.asDiagonal() * vectors);
    return 0.5 * (m + m.transpose());
}

/// Lowest `n_states` eigenpairs of a grid Hamiltonian and their dipole
/// matrix. `dipole_values` is the diagonal dipole operator on the grid.
inline MatterBasis eigensolve_matter(const linalg::SparseSymmetric& h, const Grid1D& grid, std::size_t n_states,
                                     const std::vector<double>& dipole_values, int electrons = 1,
                                     const MatterSolveOptions& opt = {})
{
    pfqed::detail::require(electrons == 1 || electrons == 2, "eigensolve_matter: one or two electrons supported");
    const std::size_t points = electrons == 1 ? grid.n : grid.n * grid.n;
    pfqed::detail::require(h.order() == points, "eigensolve_matter: Hamiltonian order does not match the grid");
    pfqed::detail::require(n_states >= 1 && 4 * n_states <= points,
                           "eigensolve_matter: N_s must be at most a quarter of the grid size");

    linalg::EigenResult r = h.bandwidth() <= opt.banded_limit ? linalg::banded_lowest(h, n_states)
                                                             : linalg::krylov_lowest(h, n_states, opt.krylov);
    MatterBasis mb;
    mb.grid = grid;
    mb.electrons = electrons;
    mb.energies = r.values;
    mb.dipole = dipole_matrix(r.vectors, dipole_values);
    mb.residuals = r.residuals;
    if(opt.keep_vectors) mb.vectors = std::move(r.vectors);
    return mb;
}

/// mu = -x for a single electron.
inline std::vector<double> single_electron_dipole(const Grid1D& grid)
{
    std::vector<double> mu(grid.n);
    for(std::size_t i = 0; i < grid.n; ++i) mu[i] = -grid.x(i);
    return mu;
}

/// Thomas-Reiche-Kuhn sum sum_j 2 (E_j - E_0) |mu_0j|^2; approaches
/// N_e / m as the basis grows.
inline double trk_sum(const MatterBasis& mb)
{
    double s = 0.0;
    for(Eigen::Index j = 1; j < mb.energies.size(); ++j)
        s += 2.0 * (mb.energies[j] - mb.energies[0]) * mb.dipole(0, j) * mb.dipole(0, j);
    return s;
}

} // namespace pfqed::matter

#endif // PFQED_MATTER_BASIS_HPP
