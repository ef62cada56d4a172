#ifndef PFQED_LINALG_BANDED_HPP
#define PFQED_LINALG_BANDED_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/linalg/eigen_result.hpp"
#include "pfqed/linalg/sparse.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace pfqed::linalg {

/// Lowest `k` eigenpairs of a banded symmetric matrix. Eigenvalues come
/// from LAPACK's band reduction and bisection (dsbevx without vectors);
/// eigenvectors from inverse iteration with a banded LU factorization
/// (dgbtrf/dgbtrs), orthogonalized against earlier vectors of the same
/// cluster.
inline EigenResult banded_lowest(const SparseSymmetric& a, std::size_t k)
{
    const std::size_t n = a.order();
    pfqed::detail::require(k >= 1 && k <= n, "banded_lowest: need 1 <= k <= order");
    const std::size_t kd = a.bandwidth();
    const std::size_t ldab = kd + 1;
    const auto N = static_cast<lapack_int>(n);
    const auto KD = static_cast<lapack_int>(kd);

    // Upper band storage, column-major: ab[(kd + i - j) + j * ldab] = A(i, j).
    std::vector<double> ab(ldab * n, 0.0);
    const auto offsets = a.row_offsets();
    const auto cols = a.columns();
    const auto vals = a.values();
    for(std::size_t i = 0; i < n; ++i)
        for(std::size_t p = offsets[i]; p < offsets[i + 1]; ++p)
        {
            const std::size_t j = cols[p];
            ab[(kd + i - j) + j * ldab] = vals[p];
        }

    std::vector<double> w(n);
    std::vector<lapack_int> ifail(n);
    lapack_int found = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    {
        std::vector<double> work_ab = ab;
        double unused_q = 0.0, unused_z = 0.0;
        const lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'U', N, KD, work_ab.data(),
                                               static_cast<lapack_int>(ldab), &unused_q, 1, 0.0, 0.0, 1,
                                               static_cast<lapack_int>(k), abstol, &found, w.data(), &unused_z, 1,
                                               ifail.data());
        if(info != 0 || static_cast<std::size_t>(found) != k)
            throw Error("banded_lowest: dsbevx failed (info=" + std::to_string(info) + ")");
    }

    // General band storage for dgbtrf: kl = ku = kd, ldgb = 3 kd + 1,
    // gb[(2kd + i - j) + j * ldgb] = A(i, j).
    const std::size_t ldgb = 3 * kd + 1;
    const double scale = std::max(std::abs(w[0]), std::abs(w[k - 1])) + 1.0;
    Eigen::MatrixXd vectors(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    std::vector<double> gb(ldgb * n);
    std::vector<lapack_int> ipiv(n);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for(std::size_t e = 0; e < k; ++e)
    {
        // Perturb the shift slightly so the factorization stays regular.
        const double shift = w[e] + 1e-13 * scale;
        std::fill(gb.begin(), gb.end(), 0.0);
        for(std::size_t j = 0; j < n; ++j)
            for(std::size_t i = (j >= kd ? j - kd : 0); i <= std::min(n - 1, j + kd); ++i)
            {
                const std::size_t r = std::min(i, j), c = std::max(i, j);
                double v = ab[(kd + r - c) + c * ldab];
                if(i == j) v -= shift;
                gb[(2 * kd + i - j) + j * ldgb] = v;
            }
        lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, N, N, KD, KD, gb.data(), static_cast<lapack_int>(ldgb), ipiv.data());
        if(info < 0) throw Error("banded_lowest: dgbtrf failed (info=" + std::to_string(info) + ")");
        if(info > 0) gb[(2 * kd) + static_cast<std::size_t>(info - 1) * ldgb] = 1e-300;

        // Earlier eigenvalues in the same cluster.
        std::size_t cluster_begin = e;
        while(cluster_begin > 0 && std::abs(w[cluster_begin - 1] - w[e]) <= 1e-7 * scale) --cluster_begin;

        Eigen::VectorXd v(static_cast<Eigen::Index>(n));
        for(Eigen::Index i = 0; i < v.size(); ++i) v[i] = dist(rng);
        for(int it = 0; it < 4; ++it)
        {
            for(std::size_t c = cluster_begin; c < e; ++c)
                v -= vectors.col(static_cast<Eigen::Index>(c)).dot(v) * vectors.col(static_cast<Eigen::Index>(c));
            v /= v.norm();
            info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', N, KD, KD, 1, gb.data(), static_cast<lapack_int>(ldgb),
                                  ipiv.data(), v.data(), N);
            if(info != 0) throw Error("banded_lowest: dgbtrs failed");
        }
        for(std::size_t c = cluster_begin; c < e; ++c)
            v -= vectors.col(static_cast<Eigen::Index>(c)).dot(v) * vectors.col(static_cast<Eigen::Index>(c));
        vectors.col(static_cast<Eigen::Index>(e)) = v / v.norm();
    }

    EigenResult out;
    out.values = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(k));
    out.vectors = std::move(vectors);
    fix_signs(out.vectors);
    out.residuals.resize(k);
    Eigen::VectorXd av(static_cast<Eigen::Index>(n));
    for(std::size_t j = 0; j < k; ++j)
    {
        const auto J = static_cast<Eigen::Index>(j);
        a.apply(std::span<const double>(out.vectors.col(J).data(), n), std::span<double>(av.data(), n));
        out.residuals[j] = (av - out.values[J] * out.vectors.col(J)).norm();
    }
    return out;
}

} // namespace pfqed::linalg

#endif // PFQED_LINALG_BANDED_HPP
