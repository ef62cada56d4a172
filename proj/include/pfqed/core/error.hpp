#ifndef PFQED_CORE_ERROR_HPP
#define PFQED_CORE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace pfqed {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error
{
public:
    using Error::Error;
};

/// An iterative method did not reach its tolerance. Carries the best
/// residual norms seen so far, one per requested eigenpair.
class ConvergenceError : public Error
{
public:
    ConvergenceError(const std::string& what, std::vector<double> residuals)
        : Error(what), m_residuals(std::move(residuals))
    {}

    const std::vector<double>& residuals() const noexcept { return m_residuals; }

private:
    std::vector<double> m_residuals;
};

/// Two independent evaluations of the same quantity disagree.
class ConsistencyError : public Error
{
public:
    using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message)
{
    if(!condition) throw InvalidArgument(message);
}

} // namespace detail
} // namespace pfqed

#endif // PFQED_CORE_ERROR_HPP
