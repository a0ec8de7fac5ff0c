#pragma once

#include <stdexcept>
#include <string>

namespace permbound {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of the operation (negative entry,
// entry above one where a probability is required, value outside [0,1], ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Shapes do not fit the operation (non-square where square is required).
class DimensionError : public DomainError {
public:
    using DomainError::DomainError;
};

// The bipartite support of the matrix admits no perfect matching.
class ZeroPermanentError : public DomainError {
public:
    using DomainError::DomainError;
};

// Exact enumeration was requested beyond its hard size cap.
class SizeLimitError : public Error {
public:
    using Error::Error;
};

// An iterative solver ran out of iterations. `best` is the best value of the
// solver's own progress measure (residual, or objective) reached.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, double best)
        : Error(what), best_(best) {}
    double best() const noexcept { return best_; }

private:
    double best_;
};

}  // namespace permbound
