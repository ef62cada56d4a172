#include "pfqed/molecular/popes.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pfqed;
using namespace pfqed::molecular;

namespace {

PESCurve morse_curve(double d_e, double a, double r_eq, double c, double step = 0.1)
{
    PESCurve curve;
    curve.R = separation_grid(9.0, step);
    for(double r : curve.R)
    {
        const double u = std::exp(-a * (r - r_eq)) - 1.0;
        curve.energies.push_back(d_e * u * u + c);
    }
    return curve;
}

const matter::Grid1D& small_grid()
{
    static const matter::Grid1D g = matter::h2_grid(36, 0.5);
    return g;
}

} // namespace

TEST(SeparationGrid, DefaultRange)
{
    const auto r = separation_grid();
    ASSERT_EQ(r.size(), 90u);
    EXPECT_DOUBLE_EQ(r.front(), 0.1);
    EXPECT_NEAR(r.back(), 9.0, 1e-12);
}

TEST(Dissociation, PerfectMorse)
{
    // Steep well: the plateau at R = 9 equals D_e + C to rounding.
    const auto curve = morse_curve(0.15, 5.0, 1.9, -1.5);
    EXPECT_NEAR(dissociation_energy(curve), 0.15, 1e-14);
    EXPECT_NEAR(curve.equilibrium(), 1.9, 1e-12);
}

TEST(Dissociation, RejectsMonotoneCurve)
{
    PESCurve c;
    c.R = {1, 2, 3, 4};
    c.energies = {-1.0, -0.8, -0.6, -0.5};
    EXPECT_THROW(dissociation_energy(c), InvalidArgument);
}

TEST(MorseFit, SelfFit)
{
    const auto curve = morse_curve(0.153, 1.2, 1.9, -1.49);
    const auto f = morse_fit(curve, 1.9, 0.153, -1.49, 918.0);
    EXPECT_NEAR(f.a, 1.2, 1e-8);
    EXPECT_LT(f.residual, 1e-12);
    EXPECT_DOUBLE_EQ(f.omega_e, harmonic_frequency(0.153, f.a, 918.0));
    EXPECT_DOUBLE_EQ(f.k, 2.0 * 0.153 * f.a * f.a);
    EXPECT_NEAR(f(1.9), -1.49, 1e-15);
}

TEST(MorseFit, WindowRestrictsPoints)
{
    const auto curve = morse_curve(0.153, 1.2, 1.9, -1.49);
    const auto f = morse_fit(curve, 1.9, 0.153, -1.49, 918.0, 1.35, 3.95);
    EXPECT_EQ(f.points, 26u);
    EXPECT_NEAR(f.a, 1.2, 1e-8);
}

TEST(MorseFit, AnharmonicDataPrefersNarrowWindow)
{
    // Morse plus a long-range tail the model cannot represent.
    auto curve = morse_curve(0.153, 1.2, 1.9, -1.49);
    for(std::size_t i = 0; i < curve.size(); ++i) curve.energies[i] -= 0.01 * std::exp(-0.3 * curve.R[i]);
    const auto wide = morse_fit(curve, 918.0);
    const auto narrow = morse_fit(curve, 918.0, wide.r_eq - 0.5, wide.r_eq + 2.0);
    EXPECT_LT(narrow.residual, wide.residual);
}

TEST(Harmonic, TableRoundTripAndScaling)
{
    const double a = 1.1306567, w = 0.0202009, mu = 918.0;
    const double d_e = mu * w * w / (2.0 * a * a);
    EXPECT_NEAR(d_e, 0.14652, 1e-5);
    EXPECT_NEAR(harmonic_frequency(d_e, a, mu), w, 1e-15);
    EXPECT_NEAR(harmonic_frequency(d_e, a, 2.0 * mu), w / std::sqrt(2.0), 1e-15);
    EXPECT_THROW(harmonic_frequency(-1.0, a, mu), InvalidArgument);
}

TEST(ProtonMass, Limits)
{
    const auto none = photon::sample_equidistant(0.01, 0.5, 200, 0.0);
    EXPECT_EQ(proton_renormalized_mass(none), 1836.0);
    const auto modes = none.with_uniform_coupling(0.0019);
    const auto se = photon::coupling_routes(modes, photon::coupling_vector(modes, photon::Species::electron())).S;
    const auto sp = photon::coupling_routes(modes, photon::coupling_vector(modes, photon::Species::proton())).S;
    EXPECT_NEAR(sp / se, 1.0 / 1836.0, 1e-12 / 1836.0);
    // m_p = M (1 + S_p) = M + S_e.
    EXPECT_NEAR(proton_renormalized_mass(modes), 1836.0 + se, 1e-9);
}

TEST(RenormalizedModel, BothSpecies)
{
    const auto modes = photon::sample_equidistant(0.01, 0.5, 200, 0.0019);
    const auto m = renormalized_h2_model(modes);
    EXPECT_NEAR(m.electron_mass, 1.1683661411, 0.02 * 1.1683661411);
    EXPECT_GT(m.nuclear_mass, 1836.0);
    const auto bare = renormalized_h2_model(modes.with_uniform_coupling(0.0));
    EXPECT_EQ(bare.electron_mass, 1.0);
    EXPECT_EQ(bare.nuclear_mass, 1836.0);
}

TEST(Vibration, HarmonicWell)
{
    PESCurve c;
    const double k = 0.4, mu = 918.0, r0 = 2.0;
    for(int i = 0; i < 120; ++i)
    {
        const double r = 0.5 + 0.025 * i;
        c.R.push_back(r);
        c.energies.push_back(0.5 * k * (r - r0) * (r - r0) - 1.0);
    }
    EXPECT_NEAR(vibrational_ground_level(c, mu), -1.0 + 0.5 * std::sqrt(k / mu), 1e-8);
}

TEST(PesScan, ZeroCouplingMatchesBare)
{
    const std::vector<double> r = {1.0, 1.6, 2.4};
    const auto bare = pes_scan(r, matter::H2Model{}, small_grid(), 4);
    const auto dressed = pes_scan(r, matter::H2Model{}, small_grid(), 4, photon::sample_equidistant(0.01, 0.5, 6, 0.0));
    for(std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(dressed.energies[i], bare.energies[i], 1e-10);
    EXPECT_EQ(dressed.n_modes, 6u);
}

TEST(PesScan, ThreadCountDoesNotChangeResult)
{
    const std::vector<double> r = {1.2, 1.8, 2.2, 3.0};
    PesScanOptions one, two;
    two.threads = 2;
    const auto modes = photon::sample_equidistant(0.01, 0.5, 5, 0.01);
    const auto a = pes_scan(r, matter::H2Model{}, small_grid(), 4, modes, {}, one);
    const auto b = pes_scan(r, matter::H2Model{}, small_grid(), 4, modes, {}, two);
    EXPECT_EQ(a.energies, b.energies);
}

TEST(PesScan, CouplingLowersBqmAboveNrqed)
{
    const std::vector<double> r = {1.9};
    const auto modes = photon::sample_equidistant(0.01, 0.5, 8, 0.02);
    const auto bare = pes_scan(r, matter::H2Model{}, small_grid(), 5);
    const auto nrqed = pes_scan(r, matter::H2Model{}, small_grid(), 5, modes);
    const auto bqm = pes_scan(r, matter::H2Model{}, small_grid(), 5, modes, qed::CouplingConfig::bqm_dse());
    EXPECT_GT(bqm.energies[0], bare.energies[0]);
    EXPECT_LT(nrqed.energies[0], bqm.energies[0]);
}

TEST(PesScan, FailureNamesSeparation)
{
    PesScanOptions opt;
    opt.provider = [](double r) -> matter::MatterBasis {
        if(r > 2.0) throw ConvergenceError("synthetic", {1.0});
        return matter::h2_basis(r, small_grid(), matter::H2Model{}, 3);
    };
    try
    {
        pes_scan({1.0, 2.5}, matter::H2Model{}, small_grid(), 3, std::nullopt, {}, opt);
        FAIL() << "expected an exception";
    }
    catch(const ConvergenceError& e)
    {
        EXPECT_NE(std::string(e.what()).find("R = 2.5"), std::string::npos);
    }
}
