#pragma once

#include <stdexcept>
#include <string>

namespace grushin {

// Bad argument: outside the documented domain of an operation.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Iteration or quadrature did not reach its tolerance.
struct numerical_error : std::runtime_error {
    double achieved = 0.0;
    numerical_error(const std::string& what, double achieved_estimate)
        : std::runtime_error(what), achieved(achieved_estimate) {}
};

// Rejected configuration (unknown key, bad value, out of range).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace grushin
