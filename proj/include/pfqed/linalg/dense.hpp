#ifndef PFQED_LINALG_DENSE_HPP
#define PFQED_LINALG_DENSE_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/linalg/eigen_result.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace pfqed::linalg {

/// Square real symmetric matrix. Symmetry is enforced exactly at
/// construction: the lower triangle is overwritten by the upper one.
class SymmetricDense
{
public:
    explicit SymmetricDense(Eigen::Index order) : m_data(Eigen::MatrixXd::Zero(order, order))
    {
        detail::require(order >= 1, "SymmetricDense: order must be >= 1");
    }

    explicit SymmetricDense(Eigen::MatrixXd m) : m_data(std::move(m))
    {
        detail::require(m_data.rows() >= 1 && m_data.rows() == m_data.cols(),
                        "SymmetricDense: matrix must be square and non-empty");
        m_data.triangularView<Eigen::StrictlyLower>() = m_data.transpose().triangularView<Eigen::StrictlyLower>();
    }

    Eigen::Index order() const noexcept { return m_data.rows(); }

    double operator()(Eigen::Index i, Eigen::Index j) const { return m_data(i, j); }

    /// Sets both (i,j) and (j,i).
    void set(Eigen::Index i, Eigen::Index j, double value)
    {
        m_data(i, j) = value;
        m_data(j, i) = value;
    }

    const Eigen::MatrixXd& matrix() const noexcept { return m_data; }

private:
    Eigen::MatrixXd m_data;
};

/// Full spectrum of a dense symmetric matrix, ascending.
inline EigenResult dense_sym_eig(const SymmetricDense& a)
{
    if(!a.matrix().allFinite()) throw InvalidArgument("dense_sym_eig: matrix contains non-finite entries");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix());
    if(solver.info() != Eigen::Success) throw Error("dense_sym_eig: Eigen solver failed");

    EigenResult out;
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
    fix_signs(out.vectors);
    out.residuals.resize(static_cast<std::size_t>(out.values.size()));
    const Eigen::MatrixXd r = a.matrix() * out.vectors - out.vectors * out.values.asDiagonal();
    for(Eigen::Index j = 0; j < r.cols(); ++j) out.residuals[static_cast<std::size_t>(j)] = r.col(j).norm();
    return out;
}

} // namespace pfqed::linalg

#endif // PFQED_LINALG_DENSE_HPP
