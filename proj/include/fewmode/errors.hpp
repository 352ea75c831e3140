#pragma once

#include <stdexcept>
#include <string>

namespace fewmode {

// Bad run configuration (unknown keys, invalid field values). CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure (ill-conditioned system, singular matrix, accuracy loss).
// CLI exit code 2.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fewmode
