#ifndef NEUROCHOICE_ERRORS_HPP
#define NEUROCHOICE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace neurochoice
{

/// An argument violates the documented precondition of an operation.
class PreconditionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed (non-finite state, bracket not found, no convergence).
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// The maximum of a value list is attained more than once where a unique maximum is required.
class TieError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace detail
{
inline void require(bool condition, const std::string& message)
{
    if (!condition)
        throw PreconditionError(message);
}
} // namespace detail

} // namespace neurochoice

#endif // NEUROCHOICE_ERRORS_HPP
