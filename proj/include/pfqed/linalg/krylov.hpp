#ifndef PFQED_LINALG_KRYLOV_HPP
#define PFQED_LINALG_KRYLOV_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/linalg/dense.hpp"
#include "pfqed/linalg/eigen_result.hpp"
#include "pfqed/linalg/sparse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>

namespace pfqed::linalg {

struct KrylovOptions
{
    /// Absolute tolerance on ||A v - lambda v|| for every returned pair.
    double tol = 1e-9;
    std::uint64_t seed = 20240601;
    std::size_t max_restarts = 2000;
    /// Krylov basis size; 0 picks max(2k + 24, 48).
    std::size_t subspace = 0;
    /// After convergence, search the orthogonal complement of the converged
    /// vectors for eigenvalues the single start vector could not see
    /// (exact degeneracies).
    bool verify_degeneracy = true;
    /// Operators up to this order are solved densely.
    std::size_t dense_threshold = 64;
};

/// Relative width within which eigenvalues are treated as one cluster.
inline constexpr double cluster_tolerance = 1e-10;

namespace detail {

inline Eigen::VectorXd random_unit(std::size_t n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for(Eigen::Index i = 0; i < v.size(); ++i) v[i] = dist(rng);
    return v / v.norm();
}

inline void project_out(Eigen::Ref<Eigen::VectorXd> w, const Eigen::MatrixXd& basis, Eigen::Index cols)
{
    if(cols == 0) return;
    for(int pass = 0; pass < 2; ++pass)
    {
        const Eigen::VectorXd h = basis.leftCols(cols).transpose() * w;
        w.noalias() -= basis.leftCols(cols) * h;
    }
}

template <class Apply>
void apply_to(Apply& apply, const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Ref<Eigen::VectorXd> y)
{
    apply(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
          std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
}

/// Thick-restart Lanczos with full reorthogonalization for the `want`
/// lowest eigenpairs of A restricted to the orthogonal complement of the
/// columns of `locked`.
template <class Apply>
EigenResult lanczos_core(Apply& apply, std::size_t n, std::size_t want, const Eigen::MatrixXd& locked,
                         std::mt19937_64& rng, const KrylovOptions& opt)
{
    const auto n_locked = static_cast<std::size_t>(locked.cols());
    const std::size_t space = n - n_locked;
    if(want > space) throw InvalidArgument("krylov_lowest: more eigenpairs requested than the space admits");

    std::size_t m = opt.subspace ? opt.subspace : std::max<std::size_t>(2 * want + 24, 48);
    m = std::clamp<std::size_t>(m, std::min(want + 2, space), space);

    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd V(N, static_cast<Eigen::Index>(m + 1));
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m + 1), static_cast<Eigen::Index>(m + 1));
    Eigen::VectorXd w(N);

    auto fresh_direction = [&](Eigen::Index filled) {
        Eigen::VectorXd v = random_unit(n, rng);
        project_out(v, locked, locked.cols());
        project_out(v, V, filled);
        return Eigen::VectorXd(v / v.norm());
    };

    V.col(0) = fresh_direction(0);
    std::size_t start = 0;
    std::size_t m_eff = m;
    double beta_last = 0.0;
    double anorm = 0.0;
    std::vector<double> best(want, std::numeric_limits<double>::infinity());

    for(std::size_t restart = 0;; ++restart)
    {
        m_eff = m;
        for(std::size_t j = start; j < m; ++j)
        {
            const auto J = static_cast<Eigen::Index>(j);
            apply_to(apply, V.col(J), w);
            project_out(w, locked, locked.cols());

            Eigen::VectorXd h = V.leftCols(J + 1).transpose() * w;
            w.noalias() -= V.leftCols(J + 1) * h;
            const Eigen::VectorXd h2 = V.leftCols(J + 1).transpose() * w;
            w.noalias() -= V.leftCols(J + 1) * h2;
            h += h2;
            project_out(w, locked, locked.cols());

            T.block(0, J, J + 1, 1) = h;
            T.block(J, 0, 1, J + 1) = h.transpose();
            anorm = std::max(anorm, std::abs(h[J]));

            double beta = w.norm();
            anorm = std::max(anorm, beta);
            if(j + 1 == space)
            {
                // The Krylov space spans the whole admissible space.
                m_eff = j + 1;
                beta = 0.0;
                beta_last = 0.0;
                break;
            }
            if(beta <= 1e-12 * std::max(1.0, anorm))
            {
                V.col(J + 1) = fresh_direction(J + 1);
                beta = 0.0;
            }
            else
            {
                V.col(J + 1) = w / beta;
            }
            T(J + 1, J) = beta;
            T(J, J + 1) = beta;
            beta_last = beta;
        }

        const auto M = static_cast<Eigen::Index>(m_eff);
        const Eigen::MatrixXd Tm = 0.5 * (T.topLeftCorner(M, M) + T.topLeftCorner(M, M).transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(Tm);
        if(ritz.info() != Eigen::Success) throw Error("krylov_lowest: projected eigenproblem failed");
        const Eigen::VectorXd& theta = ritz.eigenvalues();
        const Eigen::MatrixXd& Y = ritz.eigenvectors();

        bool converged = true;
        for(std::size_t i = 0; i < want; ++i)
        {
            const double r = beta_last * std::abs(Y(M - 1, static_cast<Eigen::Index>(i)));
            best[i] = std::min(best[i], r);
            if(r > opt.tol) converged = false;
        }

        if(converged || m_eff == space)
        {
            EigenResult out;
            const auto W = static_cast<Eigen::Index>(want);
            out.values = theta.head(W);
            out.vectors = V.leftCols(M) * Y.leftCols(W);
            return out;
        }

        if(restart >= opt.max_restarts)
            throw ConvergenceError("krylov_lowest: no convergence after " + std::to_string(opt.max_restarts) + " restarts",
                                   best);

        // Keep the lowest `keep` Ritz vectors plus the residual direction.
        const std::size_t keep = std::min(m_eff - 1, want + (m_eff - want) / 2);
        const auto K = static_cast<Eigen::Index>(keep);
        const Eigen::VectorXd residual_dir = V.col(M);
        const Eigen::MatrixXd kept = V.leftCols(M) * Y.leftCols(K);
        V.leftCols(K) = kept;
        V.col(K) = residual_dir;
        T.setZero();
        for(Eigen::Index i = 0; i < K; ++i) T(i, i) = theta[i];
        start = keep;
    }
}

} // namespace detail

/// Lowest `k` eigenpairs of the symmetric operator `apply` (called as
/// apply(span<const double> x, span<double> y) to form y = A x).
///
/// Thick-restart Lanczos with full reorthogonalization. Runs are
/// deterministic for a fixed seed. Exactly degenerate eigenvalues are
/// recovered by a complement search after the first convergence.
template <class Apply>
EigenResult krylov_lowest(Apply&& apply, std::size_t order, std::size_t k, const KrylovOptions& opt = {})
{
    pfqed::detail::require(order >= 1, "krylov_lowest: order must be >= 1");
    pfqed::detail::require(k >= 1 && k <= order, "krylov_lowest: need 1 <= k <= order");
    const auto N = static_cast<Eigen::Index>(order);

    auto finish = [&](EigenResult r) {
        fix_signs(r.vectors);
        r.residuals.resize(static_cast<std::size_t>(r.values.size()));
        Eigen::VectorXd av(N);
        for(Eigen::Index j = 0; j < r.values.size(); ++j)
        {
            detail::apply_to(apply, r.vectors.col(j), av);
            r.residuals[static_cast<std::size_t>(j)] = (av - r.values[j] * r.vectors.col(j)).norm();
        }
        return r;
    };

    if(order <= opt.dense_threshold)
    {
        Eigen::MatrixXd a(N, N);
        Eigen::VectorXd e = Eigen::VectorXd::Zero(N), col(N);
        for(Eigen::Index j = 0; j < N; ++j)
        {
            e.setZero();
            e[j] = 1.0;
            detail::apply_to(apply, e, col);
            a.col(j) = col;
        }
        EigenResult full = dense_sym_eig(SymmetricDense(a));
        EigenResult out;
        out.values = full.values.head(static_cast<Eigen::Index>(k));
        out.vectors = full.vectors.leftCols(static_cast<Eigen::Index>(k));
        return finish(std::move(out));
    }

    std::mt19937_64 rng(opt.seed);
    EigenResult res = detail::lanczos_core(apply, order, k, Eigen::MatrixXd(N, 0), rng, opt);

    if(opt.verify_degeneracy && k < order)
    {
        for(std::size_t pass = 0; pass <= k; ++pass)
        {
            const EigenResult extra = detail::lanczos_core(apply, order, 1, res.vectors, rng, opt);
            const double top = res.values[res.values.size() - 1];
            if(extra.values[0] >= top - cluster_tolerance * std::max(1.0, std::abs(top))) break;

            // A missed eigenvalue lies below the current top: swap it in.
            Eigen::VectorXd values(res.values.size() + 1);
            values << res.values, extra.values[0];
            Eigen::MatrixXd vectors(N, res.vectors.cols() + 1);
            vectors << res.vectors, extra.vectors.col(0);
            std::vector<Eigen::Index> idx(static_cast<std::size_t>(values.size()));
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });
            for(std::size_t i = 0; i < k; ++i)
            {
                res.values[static_cast<Eigen::Index>(i)] = values[idx[i]];
                res.vectors.col(static_cast<Eigen::Index>(i)) = vectors.col(idx[i]);
            }
        }
    }
    return finish(std::move(res));
}

/// Convenience overload for an assembled sparse operator.
inline EigenResult krylov_lowest(const SparseSymmetric& a, std::size_t k, const KrylovOptions& opt = {})
{
    return krylov_lowest([&a](std::span<const double> x, std::span<double> y) { a.apply(x, y); }, a.order(), k, opt);
}

} // namespace pfqed::linalg

#endif // PFQED_LINALG_KRYLOV_HPP
