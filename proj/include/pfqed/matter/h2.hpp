#ifndef PFQED_MATTER_H2_HPP
#define PFQED_MATTER_H2_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/matter/basis.hpp"
#include "pfqed/matter/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace pfqed::matter {

/// 1D H2 with soft-Coulomb interactions and the nuclear centre of mass
/// separated off. `electron_mass` is the electron mass entering mu_e
/// (1 for the bare problem, m_e for the renormalized-mass setting).
struct H2Model
{
    double a_ee = 2.0;
    double a_en = 1.0;
    double nuclear_mass = 1836.0;
    double electron_mass = 1.0;

    void validate() const
    {
        pfqed::detail::require(a_ee > 0.0 && a_en > 0.0, "H2Model: softening parameters must be positive");
        pfqed::detail::require(nuclear_mass > 0.0 && electron_mass > 0.0, "H2Model: masses must be positive");
    }

    /// mu_e = 2 M m / (2 M + m); equals 2M / (2M + 1) for m = 1.
    double mu_e() const { return 2.0 * nuclear_mass * electron_mass / (2.0 * nuclear_mass + electron_mass); }
    /// mu_n = M / 2.
    double mu_n() const { return 0.5 * nuclear_mass; }

    /// Electronic potential at (x1, x2) without the nuclear repulsion.
    double potential(double x1, double x2, double R) const
    {
        const double h = 0.5 * R;
        auto en = [&](double x) {
            return -1.0 / std::sqrt((x - h) * (x - h) + a_en) - 1.0 / std::sqrt((x + h) * (x + h) + a_en);
        };
        return 1.0 / std::sqrt((x1 - x2) * (x1 - x2) + a_ee) + en(x1) + en(x2);
    }
};

/// Standard electron grid: 200 points, dx = 0.35, centered.
inline Grid1D h2_grid(std::size_t n = 200, double dx = 0.35) { return Grid1D::centered(n, dx); }

namespace detail {

/// Calls emit(q, value) for every nonzero of row p = i1 * n + i2 of the
/// clamped-nuclei electronic Hamiltonian (nuclear repulsion included).
template <class Emit>
void h2_row(const Grid1D& grid, const H2Model& model, double R, std::size_t p, Emit&& emit)
{
    const std::size_t n = grid.n;
    const std::size_t i1 = p / n, i2 = p % n;
    const double mu = model.mu_e();
    double diag = model.potential(grid.x(i1), grid.x(i2), R) + 1.0 / R;
    kinetic_row(grid, mu, i1, [&](std::size_t j, double v) {
        if(j == i1) diag += v;
        else emit(j * n + i2, v);
    });
    kinetic_row(grid, mu, i2, [&](std::size_t j, double v) {
        if(j == i2) diag += v;
        else emit(i1 * n + j, v);
    });
    emit(p, diag);
}

/// Exchange sector (sigma = +1 symmetric, -1 antisymmetric) of the
/// two-electron product grid: canonical pairs a <= b (a < b when
/// antisymmetric) with combinations c_ab (|ab> + sigma |ba>).
struct ExchangeSector
{
    int sigma = 1;
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::ptrdiff_t> index; // n*n -> sector index of canonical pair, -1 otherwise

    ExchangeSector(std::size_t n_, int sigma_) : sigma(sigma_), n(n_), index(n_ * n_, -1)
    {
        for(std::size_t a = 0; a < n; ++a)
            for(std::size_t b = sigma > 0 ? a : a + 1; b < n; ++b)
            {
                index[a * n + b] = static_cast<std::ptrdiff_t>(pairs.size());
                pairs.emplace_back(a, b);
            }
    }

    std::size_t size() const noexcept { return pairs.size(); }

    double coefficient(std::size_t a, std::size_t b) const { return a == b ? 0.5 : std::sqrt(0.5); }

    Eigen::MatrixXd expand(const Eigen::MatrixXd& v) const
    {
        Eigen::MatrixXd full = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n * n), v.cols());
        for(std::size_t t = 0; t < pairs.size(); ++t)
        {
            const auto [a, b] = pairs[t];
            const double c = coefficient(a, b);
            full.row(static_cast<Eigen::Index>(a * n + b)) += c * v.row(static_cast<Eigen::Index>(t));
            full.row(static_cast<Eigen::Index>(b * n + a)) += sigma * c * v.row(static_cast<Eigen::Index>(t));
        }
        return full;
    }
};

inline linalg::SparseSymmetric h2_sector_hamiltonian(double R, const Grid1D& grid, const H2Model& model,
                                                     const ExchangeSector& sector)
{
    const std::size_t n = grid.n;
    linalg::SparseBuilder b(sector.size());
    b.reserve(17 * sector.size());
    for(std::size_t s = 0; s < sector.size(); ++s)
    {
        const auto [a1, a2] = sector.pairs[s];
        const double cs = sector.coefficient(a1, a2);
        h2_row(grid, model, R, a1 * n + a2, [&](std::size_t q, double v) {
            std::size_t c = q / n, d = q % n;
            double sign = 1.0;
            if(c > d)
            {
                std::swap(c, d);
                sign = sector.sigma;
            }
            const std::ptrdiff_t t = sector.index[c * n + d];
            if(t < 0 || static_cast<std::size_t>(t) < s) return;
            const double w = 2.0 * cs * sector.coefficient(c, d) * sign * (c == d ? 2.0 : 1.0);
            b.add(s, static_cast<std::size_t>(t), w * v);
        });
    }
    return std::move(b).build();
}

} // namespace detail

/// Clamped-nuclei two-electron Hamiltonian on the full product grid,
/// row index i1 * n + i2, with the nuclear repulsion 1/R as a scalar shift.
inline linalg::SparseSymmetric h2_electronic_hamiltonian(double R, const Grid1D& grid, const H2Model& model)
{
    pfqed::detail::require(R > 0.0, "h2_electronic_hamiltonian: R must be positive");
    model.validate();
    grid.validate();
    const std::size_t dim = grid.n * grid.n;
    linalg::SparseBuilder b(dim);
    b.reserve(17 * dim);
    for(std::size_t p = 0; p < dim; ++p)
        detail::h2_row(grid, model, R, p, [&](std::size_t q, double v) {
            if(q >= p) b.add(p, q, v);
        });
    return std::move(b).build();
}

/// mu = -(x1 + x2) on the product grid.
inline std::vector<double> two_electron_dipole(const Grid1D& grid)
{
    std::vector<double> mu(grid.n * grid.n);
    for(std::size_t i1 = 0; i1 < grid.n; ++i1)
        for(std::size_t i2 = 0; i2 < grid.n; ++i2) mu[i1 * grid.n + i2] = -(grid.x(i1) + grid.x(i2));
    return mu;
}

enum class ExchangeSectors
{
    all,      ///< both spatial exchange sectors, as the full product grid
    symmetric ///< spatially symmetric states only
};

/// Lowest `n_states` clamped-nuclei H2 states at separation R.
///
/// The product-grid Hamiltonian commutes with electron exchange, so the
/// symmetric and antisymmetric sectors are solved separately and merged;
/// the result equals the lowest states of the full product grid.
inline MatterBasis h2_basis(double R, const Grid1D& grid, const H2Model& model, std::size_t n_states,
                            ExchangeSectors sectors = ExchangeSectors::all, const MatterSolveOptions& opt = {})
{
    pfqed::detail::require(R > 0.0, "h2_basis: R must be positive");
    model.validate();
    grid.validate();
    pfqed::detail::require(n_states >= 1 && 8 * n_states <= grid.n * grid.n, "h2_basis: too many states for the grid");

    struct Part
    {
        Eigen::VectorXd values;
        Eigen::MatrixXd vectors;
        std::vector<double> residuals;
    };
    std::vector<Part> parts;
    for(int sigma : {1, -1})
    {
        if(sigma < 0 && sectors == ExchangeSectors::symmetric) continue;
        const detail::ExchangeSector sector(grid.n, sigma);
        const auto h = detail::h2_sector_hamiltonian(R, grid, model, sector);
        const std::size_t k = std::min(n_states, sector.size());
        linalg::EigenResult r = linalg::krylov_lowest(h, k, opt.krylov);
        parts.push_back({r.values, sector.expand(r.vectors), r.residuals});
    }

    std::vector<std::pair<std::size_t, Eigen::Index>> all;
    for(std::size_t s = 0; s < parts.size(); ++s)
        for(Eigen::Index j = 0; j < parts[s].values.size(); ++j) all.emplace_back(s, j);
    std::stable_sort(all.begin(), all.end(), [&](const auto& x, const auto& y) {
        return parts[x.first].values[x.second] < parts[y.first].values[y.second];
    });
    all.resize(n_states);

    const auto N = static_cast<Eigen::Index>(grid.n * grid.n);
    Eigen::MatrixXd vectors(N, static_cast<Eigen::Index>(n_states));
    MatterBasis mb;
    mb.grid = grid;
    mb.electrons = 2;
    mb.energies.resize(static_cast<Eigen::Index>(n_states));
    for(std::size_t i = 0; i < n_states; ++i)
    {
        const auto [s, j] = all[i];
        mb.energies[static_cast<Eigen::Index>(i)] = parts[s].values[j];
        vectors.col(static_cast<Eigen::Index>(i)) = parts[s].vectors.col(j);
        mb.residuals.push_back(parts[s].residuals[static_cast<std::size_t>(j)]);
    }
    linalg::fix_signs(vectors);
    mb.dipole = dipole_matrix(vectors, two_electron_dipole(grid));
    if(opt.keep_vectors) mb.vectors = std::move(vectors);
    return mb;
}

} // namespace pfqed::matter

#endif // PFQED_MATTER_H2_HPP
