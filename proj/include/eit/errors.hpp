#pragma once

#include <stdexcept>
#include <string>

namespace eit {

/// Evaluation outside the domain of the forward model: a point on or beyond
/// the boundary, coincident electrodes, or an ellipse that leaves the disk.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Invalid user-supplied configuration.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Non-convergence or a failed bracket in an iterative numerical procedure.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace eit
