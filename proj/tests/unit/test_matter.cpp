#include "pfqed/linalg/dense.hpp"
#include "pfqed/matter/atom.hpp"
#include "pfqed/matter/basis.hpp"
#include "pfqed/matter/grid.hpp"
#include "pfqed/matter/h2.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace pfqed;
using namespace pfqed::matter;

namespace {

// Central second-derivative weights from the Taylor conditions
// c0 + 2 sum c_s = 0, 2 sum c_s s^2 = 2, 2 sum c_s s^(2j) = 0 (j = 2..4).
Eigen::VectorXd taylor_weights()
{
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(5, 5);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(5);
    a(0, 0) = 1.0;
    for(int s = 1; s <= 4; ++s) a(0, s) = 2.0;
    for(int j = 1; j <= 4; ++j)
        for(int s = 1; s <= 4; ++s) a(j, s) = 2.0 * std::pow(static_cast<double>(s), 2 * j);
    rhs[1] = 2.0;
    return a.fullPivLu().solve(rhs);
}

} // namespace

TEST(Stencil, MatchesTaylorOracle)
{
    const Eigen::VectorXd w = taylor_weights();
    for(int s = 0; s <= 4; ++s) EXPECT_NEAR(second_derivative_8th[static_cast<std::size_t>(s)], w[s], 1e-13);
    EXPECT_NEAR(w[0], -205.0 / 72.0, 1e-13);
    EXPECT_NEAR(w[4], -1.0 / 560.0, 1e-15);
}

TEST(Kinetic, ConstantVectorInInterior)
{
    const Grid1D g(0.0, 0.1, 50);
    const auto t = fd_kinetic(g, 1.0);
    std::vector<double> x(50, 1.0), y(50);
    t.apply(x, y);
    for(std::size_t i = 4; i < 46; ++i) EXPECT_NEAR(y[i], 0.0, 1e-10);
}

TEST(Kinetic, PeriodicPlaneWave)
{
    const std::size_t n = 64;
    const double dx = 0.1;
    const Grid1D g(0.0, dx, n, Boundary::periodic);
    const auto t = fd_kinetic(g, 1.0);
    const double k = 2.0 * std::numbers::pi * 3.0 / (static_cast<double>(n) * dx);
    std::vector<double> x(n), y(n);
    for(std::size_t i = 0; i < n; ++i) x[i] = std::sin(k * g.x(i));
    t.apply(x, y);
    const double expected = 0.5 * k * k;
    double worst = 0.0;
    for(std::size_t i = 0; i < n; ++i)
        if(std::abs(x[i]) > 0.5) worst = std::max(worst, std::abs(y[i] / x[i] - expected));
    EXPECT_LE(worst / expected, std::pow(k * dx, 8));
    EXPECT_GT(worst, 0.0);
}

TEST(Kinetic, PeriodicIsSymmetricAndWraps)
{
    const Grid1D g(0.0, 0.2, 12, Boundary::periodic);
    const auto t = fd_kinetic(g, 2.0);
    EXPECT_NE(t.at(0, 11), 0.0);
    EXPECT_NE(t.at(0, 8), 0.0);
    EXPECT_EQ(t.at(0, 6), 0.0);
}

TEST(Atom, PotentialAtOrigin)
{
    const AtomModel m;
    EXPECT_DOUBLE_EQ(m.potential(0.0), -10.0);
}

TEST(Atom, AnalyticLevels)
{
    const AtomModel m;
    const auto e = atom_analytic_levels(m, 10);
    EXPECT_NEAR(e[0], -9.8888, 1e-4);
    EXPECT_NEAR(e[1], -9.6677, 1e-4);
    for(std::size_t i = 1; i < e.size(); ++i) EXPECT_GT(e[i], e[i - 1]);
    EXPECT_THROW(atom_analytic_levels(m, m.bound_count() + 1), InvalidArgument);
    const auto shallow = atom_analytic_levels({1e-6, 0.05, 1.0}, 1);
    EXPECT_LT(shallow[0], 0.0);
    EXPECT_GT(shallow[0], -1e-5);
}

TEST(Atom, LargeGridMatchesAnalyticLevels)
{
    const auto previous = set_warning_handler([](const std::string&) {});
    const AtomModel m;
    const auto mb = atom_basis(atom_grid(), m, 10);
    set_warning_handler(previous);
    const auto e = atom_analytic_levels(m, 10);
    for(std::size_t i = 0; i < 10; ++i)
        EXPECT_LE(std::abs(mb.energies[static_cast<Eigen::Index>(i)] / e[i] - 1.0), 1e-6) << "level " << i;
    EXPECT_NEAR(mb.dipole(0, 0), 0.0, 1e-10);
    EXPECT_LE((mb.vectors.transpose() * mb.vectors - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-8);
    const Eigen::VectorXd psi = mb.wavefunction(0);
    EXPECT_NEAR(psi.squaredNorm() * mb.grid.dx, 1.0, 1e-10);
    for(std::size_t i = 0; i < mb.grid.n; ++i) EXPECT_NEAR(psi[static_cast<Eigen::Index>(i)], psi[static_cast<Eigen::Index>(mb.grid.n - 1 - i)], 1e-8);
}

TEST(Atom, HeavierMassLowersLevels)
{
    const auto previous = set_warning_handler([](const std::string&) {});
    const auto grid = atom_grid();
    const auto light = atom_basis(grid, {10.0, 0.05, 1.0}, 10);
    const auto heavy = atom_basis(grid, {10.0, 0.05, 1.1683661411}, 10);
    set_warning_handler(previous);
    for(Eigen::Index i = 0; i < 10; ++i) EXPECT_LT(heavy.energies[i], light.energies[i]);
}

TEST(Atom, NarrowGridWarns)
{
    std::string message;
    const auto previous = set_warning_handler([&](const std::string& m) { message = m; });
    atom_hamiltonian(Grid1D::centered(100, 0.1), AtomModel{});
    set_warning_handler(previous);
    EXPECT_NE(message.find("too narrow"), std::string::npos);
}

TEST(Atom, GridConvergence)
{
    const auto previous = set_warning_handler([](const std::string&) {});
    const AtomModel m;
    const double exact = atom_analytic_levels(m, 1)[0];
    const double coarse = atom_basis(Grid1D::centered(750, 0.2828), m, 1).energies[0];
    const double fine = atom_basis(Grid1D::centered(1500, 0.1414), m, 1).energies[0];
    set_warning_handler(previous);
    EXPECT_LT(std::abs(fine - exact), std::abs(coarse - exact) / 64.0);
}

TEST(Basis, HarmonicSelectionRule)
{
    const Grid1D g = Grid1D::centered(401, 0.05);
    std::vector<double> v(g.n);
    for(std::size_t i = 0; i < g.n; ++i) v[i] = 0.5 * g.x(i) * g.x(i);
    const auto mb = eigensolve_matter(kinetic_plus_potential(g, 1.0, v), g, 6, single_electron_dipole(g));
    for(Eigen::Index i = 0; i < 6; ++i)
    {
        EXPECT_NEAR(mb.energies[i], i + 0.5, 1e-8);
        for(Eigen::Index j = 0; j < 6; ++j)
            if(std::abs(i - j) != 1)
            {
                EXPECT_NEAR(mb.dipole(i, j), 0.0, 1e-8);
            }
    }
    EXPECT_NEAR(std::abs(mb.dipole(0, 1)), std::sqrt(0.5), 1e-8);
    EXPECT_NEAR(trk_sum(mb), 1.0, 1e-8);
}

TEST(Basis, TruncationAndShift)
{
    const Grid1D g = Grid1D::centered(101, 0.1);
    std::vector<double> v(g.n);
    for(std::size_t i = 0; i < g.n; ++i) v[i] = 0.5 * g.x(i) * g.x(i);
    const auto mb = eigensolve_matter(kinetic_plus_potential(g, 1.0, v), g, 5, single_electron_dipole(g));
    const auto t = mb.truncated(3);
    EXPECT_EQ(t.size(), 3u);
    EXPECT_EQ(t.dipole.rows(), 3);
    EXPECT_DOUBLE_EQ(mb.shifted(1.0).energies[0], mb.energies[0] + 1.0);
}

TEST(H2, ModelMasses)
{
    const H2Model m;
    EXPECT_DOUBLE_EQ(m.mu_e(), 2.0 * 1836.0 / (2.0 * 1836.0 + 1.0));
    EXPECT_DOUBLE_EQ(m.mu_n(), 918.0);
}

TEST(H2, ExchangeAndParitySymmetry)
{
    const Grid1D g = Grid1D::centered(20, 0.5);
    const auto h = h2_electronic_hamiltonian(1.6, g, H2Model{});
    const std::size_t n = g.n;
    auto swap = [&](std::size_t p) { return (p % n) * n + p / n; };
    auto mirror = [&](std::size_t p) { return (n - 1 - p / n) * n + (n - 1 - p % n); };
    for(std::size_t p = 0; p < n * n; p += 7)
        for(std::size_t q = 0; q < n * n; q += 3)
        {
            EXPECT_DOUBLE_EQ(h.at(p, q), h.at(swap(p), swap(q)));
            EXPECT_NEAR(h.at(p, q), h.at(mirror(p), mirror(q)), 1e-14);
        }
}

TEST(H2, SectorSolveMatchesFullGrid)
{
    const Grid1D g = Grid1D::centered(24, 0.6);
    const H2Model model;
    const double R = 1.9;
    const auto dense = linalg::dense_sym_eig(h2_electronic_hamiltonian(R, g, model).to_dense());
    const auto mb = h2_basis(R, g, model, 8);
    for(Eigen::Index i = 0; i < 8; ++i) EXPECT_NEAR(mb.energies[i], dense.values[i], 1e-9);
    EXPECT_LE((mb.vectors.transpose() * mb.vectors - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-8);
    // Ground state is exchange symmetric.
    const std::size_t n = g.n;
    for(std::size_t a = 0; a < n; ++a)
        for(std::size_t b = 0; b < n; ++b)
            EXPECT_NEAR(mb.vectors(static_cast<Eigen::Index>(a * n + b), 0), mb.vectors(static_cast<Eigen::Index>(b * n + a), 0), 1e-12);
    // Dipole matrix equals the direct product-grid evaluation.
    const auto direct = dipole_matrix(mb.vectors, two_electron_dipole(g));
    EXPECT_LE((direct - mb.dipole).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(H2, SymmetricSectorOnly)
{
    const Grid1D g = Grid1D::centered(24, 0.6);
    const auto all = h2_basis(1.9, g, H2Model{}, 4);
    const auto sym = h2_basis(1.9, g, H2Model{}, 4, ExchangeSectors::symmetric);
    EXPECT_NEAR(sym.energies[0], all.energies[0], 1e-10);
    for(Eigen::Index i = 1; i < 4; ++i) EXPECT_GE(sym.energies[i], all.energies[i] - 1e-10);
}

TEST(H2, DissociationApproachesTwoAtoms)
{
    const Grid1D g = Grid1D::centered(80, 0.4);
    const H2Model model;
    // Single electron in one soft-Coulomb well.
    std::vector<double> v(g.n);
    for(std::size_t i = 0; i < g.n; ++i) v[i] = -1.0 / std::sqrt(g.x(i) * g.x(i) + model.a_en);
    const double atom = linalg::dense_sym_eig(kinetic_plus_potential(g, model.mu_e(), v).to_dense()).values[0];
    const double e6 = h2_basis(6.0, g, model, 1).energies[0];
    const double e12 = h2_basis(12.0, g, model, 1).energies[0];
    EXPECT_LT(std::abs(e12 - 2.0 * atom), std::abs(e6 - 2.0 * atom));
    EXPECT_LT(std::abs(e12 - 2.0 * atom), 0.02);
}
