#ifndef PFQED_MATTER_GRID_HPP
#define PFQED_MATTER_GRID_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/linalg/sparse.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace pfqed::matter {

enum class Boundary
{
    hard_wall,
    periodic
};

/// Uniform 1D grid x_i = x_min + i dx, i = 0..n-1.
struct Grid1D
{
    double x_min = 0.0;
    double dx = 1.0;
    std::size_t n = 9;
    Boundary boundary = Boundary::hard_wall;

    Grid1D() = default;
    Grid1D(double x_min_, double dx_, std::size_t n_, Boundary b = Boundary::hard_wall)
        : x_min(x_min_), dx(dx_), n(n_), boundary(b)
    {
        validate();
    }

    /// Grid symmetric about x = 0.
    static Grid1D centered(std::size_t n, double dx, Boundary b = Boundary::hard_wall)
    {
        return {-0.5 * static_cast<double>(n - 1) * dx, dx, n, b};
    }

    void validate() const
    {
        pfqed::detail::require(n >= 9, "Grid1D: at least 9 points are needed for the 8th-order stencil");
        pfqed::detail::require(dx > 0.0 && std::isfinite(dx), "Grid1D: dx must be positive");
        pfqed::detail::require(std::isfinite(x_min), "Grid1D: x_min must be finite");
    }

    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx; }
    double length() const { return static_cast<double>(n) * dx; }

    std::vector<double> points() const
    {
        std::vector<double> p(n);
        for(std::size_t i = 0; i < n; ++i) p[i] = x(i);
        return p;
    }

    bool operator==(const Grid1D&) const = default;
};

/// Central 8th-order second-derivative weights c_0..c_4 (times 1/dx^2).
inline constexpr std::array<double, 5> second_derivative_8th = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0,
                                                                 -1.0 / 560.0};

/// Calls emit(j, value) for every stencil neighbour j of row i, with
/// value the kinetic matrix element; hard walls drop neighbours outside
/// the grid, periodic grids wrap them.
template <class Emit>
void kinetic_row(const Grid1D& grid, double mass, std::size_t i, Emit&& emit)
{
    const double scale = -1.0 / (2.0 * mass * grid.dx * grid.dx);
    emit(i, scale * second_derivative_8th[0]);
    const auto n = static_cast<std::ptrdiff_t>(grid.n);
    for(std::ptrdiff_t s = 1; s <= 4; ++s)
        for(std::ptrdiff_t sign : {-1, 1})
        {
            std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + sign * s;
            if(grid.boundary == Boundary::periodic) j = ((j % n) + n) % n;
            else if(j < 0 || j >= n) continue;
            emit(static_cast<std::size_t>(j), scale * second_derivative_8th[static_cast<std::size_t>(s)]);
        }
}

/// -(1/2m) d^2/dx^2 with the 8th-order central stencil.
inline linalg::SparseSymmetric fd_kinetic(const Grid1D& grid, double mass)
{
    grid.validate();
    pfqed::detail::require(mass > 0.0, "fd_kinetic: mass must be positive");
    linalg::SparseBuilder b(grid.n);
    b.reserve(9 * grid.n);
    for(std::size_t i = 0; i < grid.n; ++i)
        kinetic_row(grid, mass, i, [&](std::size_t j, double v) {
            if(j >= i) b.add(i, j, v);
        });
    return std::move(b).build();
}

/// fd_kinetic plus a diagonal potential sampled on the grid.
inline linalg::SparseSymmetric kinetic_plus_potential(const Grid1D& grid, double mass, const std::vector<double>& v)
{
    pfqed::detail::require(v.size() == grid.n, "kinetic_plus_potential: potential length must equal grid size");
    linalg::SparseBuilder b(grid.n);
    b.reserve(10 * grid.n);
    for(std::size_t i = 0; i < grid.n; ++i)
    {
        kinetic_row(grid, mass, i, [&](std::size_t j, double val) {
            if(j >= i) b.add(i, j, val);
        });
        b.add(i, i, v[i]);
    }
    return std::move(b).build();
}

} // namespace pfqed::matter

#endif // PFQED_MATTER_GRID_HPP
