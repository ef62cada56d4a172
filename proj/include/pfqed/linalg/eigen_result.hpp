#ifndef PFQED_LINALG_EIGEN_RESULT_HPP
#define PFQED_LINALG_EIGEN_RESULT_HPP

#include <Eigen/Dense>

#include <vector>

namespace pfqed::linalg {

/// Eigenpairs in ascending order. Column j of `vectors` belongs to
/// `values[j]`; `residuals[j]` is the measured norm ||A v - lambda v||.
struct EigenResult
{
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    std::vector<double> residuals;

    Eigen::Index size() const noexcept { return values.size(); }
};

/// Flips each column so that its largest-magnitude entry is positive.
/// Eigenvectors are only defined up to sign; this pins one choice.
inline void fix_signs(Eigen::MatrixXd& vectors)
{
    for(Eigen::Index j = 0; j < vectors.cols(); ++j)
    {
        Eigen::Index imax = 0;
        vectors.col(j).cwiseAbs().maxCoeff(&imax);
        if(vectors(imax, j) < 0.0) vectors.col(j) *= -1.0;
    }
}

} // namespace pfqed::linalg

#endif // PFQED_LINALG_EIGEN_RESULT_HPP
