#ifndef PFQED_OBSERVABLES_DENSITY_HPP
#define PFQED_OBSERVABLES_DENSITY_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/matter/basis.hpp"
#include "pfqed/matter/grid.hpp"
#include "pfqed/qed/solve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace pfqed::observables {

/// One-body electron density n(x) on a grid; dx * sum n = number of electrons.
struct DensityProfile
{
    matter::Grid1D grid;
    std::vector<double> values;

    double integral() const
    {
        double s = 0.0;
        for(double v : values) s += v;
        return grid.dx * s;
    }

    double peak() const { return *std::max_element(values.begin(), values.end()); }

    /// Standard deviation of x under n(x) / integral().
    double width() const
    {
        double m0 = 0.0, m1 = 0.0, m2 = 0.0;
        for(std::size_t i = 0; i < values.size(); ++i)
        {
            const double x = grid.x(i);
            m0 += values[i];
            m1 += values[i] * x;
            m2 += values[i] * x * x;
        }
        const double mean = m1 / m0;
        return std::sqrt(std::max(0.0, m2 / m0 - mean * mean));
    }
};

/// n(x) for the mixed matter state rho_ij over the basis functions. For two
/// electrons the second coordinate is integrated out and the result is
/// normalized to 2.
inline DensityProfile density(const matter::MatterBasis& mb, const Eigen::MatrixXd& rho)
{
    pfqed::detail::require(mb.has_vectors(), "density: matter basis has no wavefunctions");
    const auto ns = static_cast<Eigen::Index>(mb.size());
    pfqed::detail::require(rho.rows() == ns && rho.cols() == ns, "density: density matrix does not match the basis");

    const std::size_t n = mb.grid.n;
    DensityProfile out{mb.grid, std::vector<double>(n, 0.0)};
    // Unit-norm columns: psi = v / sqrt(dx^electrons).
    if(mb.electrons == 1)
    {
        const Eigen::MatrixXd vr = mb.vectors * rho;
        for(std::size_t i = 0; i < n; ++i)
        {
            const auto I = static_cast<Eigen::Index>(i);
            out.values[i] = mb.vectors.row(I).dot(vr.row(I)) / mb.grid.dx;
        }
    }
    else
    {
        const Eigen::MatrixXd vr = mb.vectors * rho;
        for(std::size_t i1 = 0; i1 < n; ++i1)
        {
            const auto rows = static_cast<Eigen::Index>(i1 * n);
            const auto len = static_cast<Eigen::Index>(n);
            const double s = (mb.vectors.middleRows(rows, len).array() * vr.middleRows(rows, len).array()).sum();
            out.values[i1] = 2.0 * s / mb.grid.dx;
        }
    }
    return out;
}

/// Density of matter eigenstate i.
inline DensityProfile density(const matter::MatterBasis& mb, std::size_t i)
{
    pfqed::detail::require(i < mb.size(), "density: state index out of range");
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(mb.size()), static_cast<Eigen::Index>(mb.size()));
    rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    return density(mb, rho);
}

/// Density of a coupled eigenstate, photons traced out.
inline DensityProfile density(const qed::CoupledState& s)
{
    return density(*s.matter, s.matter_density_matrix());
}

/// Density of a matter-space eigenvector c (for instance a bQM+DSE state).
inline DensityProfile density(const matter::MatterBasis& mb, const Eigen::VectorXd& c)
{
    return density(mb, Eigen::MatrixXd(c * c.transpose()));
}

inline void require_same_grid(const DensityProfile& a, const DensityProfile& b)
{
    if(!(a.grid == b.grid) || a.values.size() != b.values.size())
        throw InvalidArgument("density comparison: profiles live on different grids");
}

/// Delta n = dx * sum |n_a - n_b|.
inline double integrated_density_diff(const DensityProfile& a, const DensityProfile& b)
{
    require_same_grid(a, b);
    double s = 0.0;
    for(std::size_t i = 0; i < a.values.size(); ++i) s += std::abs(a.values[i] - b.values[i]);
    return a.grid.dx * s;
}

/// Signed difference delta n(x) = n_a(x) - n_b(x).
inline DensityProfile signed_density_diff(const DensityProfile& a, const DensityProfile& b)
{
    require_same_grid(a, b);
    DensityProfile out{a.grid, a.values};
    for(std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
    return out;
}

} // namespace pfqed::observables

#endif // PFQED_OBSERVABLES_DENSITY_HPP
