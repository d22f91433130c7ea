#pragma once

#include <stdexcept>
#include <string>

namespace photodev {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A scalar parameter is non-finite or violates a hard model constraint.
class invalid_parameter_error : public error {
public:
    using error::error;
};

// An argument is outside the mathematical domain of an operation.
class domain_error : public error {
public:
    using error::error;
};

// Malformed configuration input (file, key, grid, CLI override).
class config_error : public error {
public:
    using error::error;
};

// I/O failure (unreadable config, unwritable output path).
class io_error : public error {
public:
    using error::error;
};

// The Liouvillian / rate-matrix kernel is not one-dimensional.
class non_unique_steady_state_error : public error {
public:
    non_unique_steady_state_error(int kernel_dimension, const std::string& what)
        : error(what), kernel_dimension_(kernel_dimension) {}
    int kernel_dimension() const { return kernel_dimension_; }

private:
    int kernel_dimension_;
};

// Coefficient of performance requested where |J_Q^gamma| is below threshold.
class undefined_performance_error : public error {
public:
    using error::error;
};

// Spectral gap of the Liouvillian too small for the quadrature horizon.
class slow_mixing_error : public error {
public:
    using error::error;
};

// Noise D <= 0 passed where a positive noise is required.
class invalid_noise_error : public error {
public:
    using error::error;
};

// Gillespie trajectory entered a state with zero total exit rate.
class absorbing_state_error : public error {
public:
    using error::error;
};

// A solver certificate (residual, trace, positivity) failed its bound.
class numerical_error : public error {
public:
    using error::error;
};

}  // namespace photodev
