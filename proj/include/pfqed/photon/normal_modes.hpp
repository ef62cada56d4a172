#ifndef PFQED_PHOTON_NORMAL_MODES_HPP
#define PFQED_PHOTON_NORMAL_MODES_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/photon/continuum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

extern "C" void dlaed4_(const int* n, const int* i, const double* d, const double* z, double* delta, const double* rho,
                        double* dlam, int* info);

namespace pfqed::photon {

/// Dressed photon modes after diagonalizing W = diag(omega^2) + d d^T.
struct NormalModeSet
{
    std::vector<double> bare;        ///< omega_a
    std::vector<double> dressed;     ///< Omega_a, ascending
    Eigen::MatrixXd rotation;        ///< O, column a is the mode-space vector of Omega_a
    std::vector<double> coupling;    ///< d_a
    std::vector<double> diamagnetic; ///< omega_d,a (equal to d_a)
    double g = 0.0;

    std::size_t size() const noexcept { return dressed.size(); }
    double zero_point() const { return 0.5 * std::accumulate(dressed.begin(), dressed.end(), 0.0); }

    /// (O^T d)_a
    Eigen::VectorXd projected_coupling() const
    {
        const Eigen::Map<const Eigen::VectorXd> dv(coupling.data(), static_cast<Eigen::Index>(coupling.size()));
        return rotation.transpose() * dv;
    }
};

/// The three independent evaluations of g.
struct CouplingRoutes
{
    double normal_mode_sum = 0.0; ///< sum_a (O^T d)_a^2 / Omega_a^2
    double sherman_morrison = 0.0; ///< S / (1 + S), S = sum d^2 / omega^2
    double determinant = 0.0;      ///< 1 - prod omega^2 / prod Omega^2
    double S = 0.0;

    double max_relative_spread() const
    {
        const double ref = std::max(std::abs(sherman_morrison), std::numeric_limits<double>::min());
        return std::max(std::abs(normal_mode_sum - sherman_morrison), std::abs(determinant - sherman_morrison)) / ref;
    }
};

inline constexpr double route_tolerance = 1e-12;

namespace detail {

/// Rank-one eigen-decomposition without the consistency check.
struct RankOne
{
    NormalModeSet set;
    std::vector<double> shift; ///< Omega_k^2 - omega_k^2 in pairing order
    std::vector<double> pole;  ///< omega_k^2 paired with shift
};

/// Secular roots and the differences D_j - lambda_i for the rank-one
/// problem diag(D) + rho z z^T, ||z|| = 1, D strictly ascending.
/// delta(j, i) = D_j - lambda_i.
inline void secular_solve(const std::vector<double>& D, const std::vector<double>& z, double rho,
                          std::vector<double>& lambda, Eigen::MatrixXd& delta)
{
    const int n = static_cast<int>(D.size());
    lambda.assign(D.size(), 0.0);
    delta.resize(n, n);
    if(n == 1)
    {
        lambda[0] = D[0] + rho;
        delta(0, 0) = -rho;
        return;
    }
    if(n == 2)
    {
        // lambda = D_0 + tau; tau^2 - b tau + c = 0 with b = gap + rho, c = rho z_0^2 gap.
        const double gap = D[1] - D[0];
        const double b = gap + rho;
        const double c = rho * z[0] * z[0] * gap;
        const double root = std::sqrt(std::max(b * b - 4.0 * c, 0.0));
        const double t1 = 2.0 * c / (b + root);
        const double t2 = 0.5 * (b + root);
        lambda[0] = D[0] + t1;
        lambda[1] = D[0] + t2;
        delta(0, 0) = -t1;
        delta(1, 0) = gap - t1;
        delta(0, 1) = -t2;
        // (gap - t1)(gap - t2) = -rho z_1^2 gap
        delta(1, 1) = -rho * z[1] * z[1] * gap / (gap - t1);
        return;
    }
    std::vector<double> work(D.size());
    for(int i = 0; i < n; ++i)
    {
        const int index = i + 1;
        int info = 0;
        double dlam = 0.0;
        dlaed4_(&n, &index, D.data(), z.data(), work.data(), &rho, &dlam, &info);
        if(info != 0) throw Error("normal_modes: secular equation solver failed for root " + std::to_string(i));
        lambda[static_cast<std::size_t>(i)] = dlam;
        for(int j = 0; j < n; ++j) delta(j, i) = work[static_cast<std::size_t>(j)];
    }
}

inline RankOne rank_one(const ModeContinuum& modes, const std::vector<double>& d)
{
    pfqed::detail::require(d.size() == modes.size(), "normal_modes: coupling vector length must equal the mode count");
    pfqed::detail::require(!modes.empty(), "normal_modes: empty mode set");
    for(double v : d) pfqed::detail::require(std::isfinite(v), "normal_modes: non-finite coupling");

    const std::size_t n = modes.size();
    RankOne out;
    out.set.bare = modes.frequencies();
    out.set.coupling = d;
    out.set.diamagnetic.resize(n);
    for(std::size_t a = 0; a < n; ++a) out.set.diamagnetic[a] = std::abs(d[a]);

    // Modes with d_a = 0 decouple exactly.
    std::vector<std::size_t> active;
    double rho = 0.0;
    for(std::size_t a = 0; a < n; ++a)
        if(d[a] != 0.0)
        {
            active.push_back(a);
            rho += d[a] * d[a];
        }

    std::vector<double> eig(n);
    Eigen::MatrixXd vec = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<double> shift(n, 0.0);
    for(std::size_t a = 0; a < n; ++a)
    {
        const double w = modes.frequency(a);
        eig[a] = w * w;
        vec(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) = 1.0;
    }

    if(!active.empty())
    {
        const std::size_t m = active.size();
        const double norm = std::sqrt(rho);
        std::vector<double> D(m), z(m);
        for(std::size_t k = 0; k < m; ++k)
        {
            const double w = modes.frequency(active[k]);
            D[k] = w * w;
            z[k] = d[active[k]] / norm;
        }
        std::vector<double> lambda;
        Eigen::MatrixXd delta;
        secular_solve(D, z, rho, lambda, delta);

        // Recompute the update vector from the computed roots so that the
        // eigenvectors come out numerically orthogonal.
        std::vector<double> zhat(m);
        for(std::size_t i = 0; i < m; ++i)
        {
            const auto I = static_cast<Eigen::Index>(i);
            double w = delta(I, I);
            for(std::size_t j = 0; j < m; ++j)
                if(j != i) w *= delta(I, static_cast<Eigen::Index>(j)) / (D[i] - D[j]);
            zhat[i] = std::copysign(std::sqrt(std::max(-w, 0.0)), z[i]);
        }
        for(std::size_t j = 0; j < m; ++j)
        {
            const auto J = static_cast<Eigen::Index>(j);
            Eigen::VectorXd s(static_cast<Eigen::Index>(m));
            for(std::size_t i = 0; i < m; ++i) s[static_cast<Eigen::Index>(i)] = zhat[i] / delta(static_cast<Eigen::Index>(i), J);
            s /= s.norm();
            const std::size_t a = active[j];
            auto col = vec.col(static_cast<Eigen::Index>(a));
            col.setZero();
            for(std::size_t i = 0; i < m; ++i) col[static_cast<Eigen::Index>(active[i])] = s[static_cast<Eigen::Index>(i)];
            eig[a] = lambda[j];
            shift[a] = -delta(J, J);
        }
    }

    // Root j of the active set lies in (D_j, D_{j+1}); inactive poles keep
    // their place, so a stable sort restores ascending order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return eig[a] < eig[b]; });

    out.set.dressed.resize(n);
    out.set.rotation.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for(std::size_t k = 0; k < n; ++k)
    {
        out.set.dressed[k] = std::sqrt(eig[order[k]]);
        out.set.rotation.col(static_cast<Eigen::Index>(k)) = vec.col(static_cast<Eigen::Index>(order[k]));
    }
    out.shift = shift;
    out.pole.resize(n);
    for(std::size_t a = 0; a < n; ++a) out.pole[a] = modes.frequency(a) * modes.frequency(a);
    return out;
}

inline CouplingRoutes routes_from(const RankOne& r)
{
    CouplingRoutes c;
    const auto& d = r.set.coupling;
    for(std::size_t a = 0; a < d.size(); ++a) c.S += d[a] * d[a] / r.pole[a];
    c.sherman_morrison = c.S / (1.0 + c.S);

    double log_ratio = 0.0;
    for(std::size_t a = 0; a < d.size(); ++a) log_ratio += std::log1p(r.shift[a] / r.pole[a]);
    c.determinant = -std::expm1(-log_ratio);

    const Eigen::VectorXd p = r.set.projected_coupling();
    for(std::size_t k = 0; k < r.set.size(); ++k)
        c.normal_mode_sum += p[static_cast<Eigen::Index>(k)] * p[static_cast<Eigen::Index>(k)] /
                             (r.set.dressed[k] * r.set.dressed[k]);
    return c;
}

inline void check_routes(const CouplingRoutes& c)
{
    if(c.S == 0.0) return;
    if(c.max_relative_spread() > route_tolerance)
        throw ConsistencyError("multimode_coupling_g: routes disagree (normal-mode sum " + std::to_string(c.normal_mode_sum) +
                               ", Sherman-Morrison " + std::to_string(c.sherman_morrison) + ", determinant " +
                               std::to_string(c.determinant) + ")");
}

} // namespace detail

/// All three g evaluations, unchecked.
inline CouplingRoutes coupling_routes(const ModeContinuum& modes, const std::vector<double>& d)
{
    return detail::routes_from(detail::rank_one(modes, d));
}

/// Multimode coupling g(N_p), in [0, 1). Three routes are evaluated and
/// must agree to 1e-12 relative; the Sherman-Morrison value is returned.
inline double multimode_coupling_g(const ModeContinuum& modes, const std::vector<double>& d)
{
    const CouplingRoutes c = coupling_routes(modes, d);
    detail::check_routes(c);
    return c.sherman_morrison;
}

/// Normal modes of the photon field with the diamagnetic term included.
inline NormalModeSet normal_modes(const ModeContinuum& modes, const std::vector<double>& d)
{
    detail::RankOne r = detail::rank_one(modes, d);
    const CouplingRoutes c = detail::routes_from(r);
    detail::check_routes(c);
    r.set.g = c.sherman_morrison;
    return std::move(r.set);
}

/// Closed-form S/(1+S) without the normal-mode cross checks; O(N_p).
inline double coupling_g_fast(const ModeContinuum& modes, const std::vector<double>& d)
{
    pfqed::detail::require(d.size() == modes.size(), "coupling_g_fast: length mismatch");
    double S = 0.0;
    for(std::size_t a = 0; a < d.size(); ++a) S += d[a] * d[a] / (modes.frequency(a) * modes.frequency(a));
    return S / (1.0 + S);
}

} // namespace pfqed::photon

#endif // PFQED_PHOTON_NORMAL_MODES_HPP
