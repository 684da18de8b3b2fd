#pragma once

#include <stdexcept>
#include <string>

namespace kolmo
{

/// Argument outside the mathematical domain of an operation (negative node,
/// nonpositive tolerance, exponent above the order, ...).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Operation called on input that violates its documented precondition
/// (e.g. a principal representation requested for a non-interior vector).
class PreconditionError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// Moment classification is only implemented for power systems with k_1 = 0.
class UnsupportedSystem : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative solver did not reach the requested residual.
class NumericalFailure : public std::runtime_error
{
public:
    NumericalFailure(const std::string& what, double best_residual)
        : std::runtime_error(what), best_residual_(best_residual)
    {
    }

    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

/// A Newton iterate left the positive orthant (weights or free nodes). Signals
/// that the requested representation shape does not fit the target.
class DomainExit : public NumericalFailure
{
public:
    using NumericalFailure::NumericalFailure;
};

/// Pinned canonical root coincides with a node of the principal representation.
class CoincidenceError : public std::runtime_error
{
public:
    CoincidenceError(const std::string& what, double node)
        : std::runtime_error(what), node_(node)
    {
    }

    double node() const noexcept { return node_; }

private:
    double node_;
};

/// Results of two solvers contradict each other (e.g. the oracle reports cone
/// membership but no representation up to the maximal index was found).
class InconsistencyError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// interior_spline was asked for a norm vector that is not interior to its
/// admissible set.
class NotInterior : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// boundary_spline found no structure with at most [(d-1)/2] knots.
class NotBoundary : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace kolmo
