#pragma once

#include <stdexcept>
#include <string>

namespace horse {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical or physical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Iterative scheme (series, continued fraction, quadrature, root search) failed.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Energy within the guard band of an eigenvalue of a truncated Hamiltonian.
class PoleError : public Error {
public:
    PoleError(int index, double eigenvalue, double energy);
    int index() const { return index_; }
    double eigenvalue() const { return eigenvalue_; }
    double energy() const { return energy_; }

private:
    int index_;
    double eigenvalue_;
    double energy_;
};

// Inconsistent problem definition (window violations, closed channels, bad config).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace horse
