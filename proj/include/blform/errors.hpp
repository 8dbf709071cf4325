#pragma once

#include <stdexcept>
#include <string>

namespace blform {

// Domain-level failure: the input is well formed but the requested quantity
// does not exist (rank-deficient ground set, margin off the hyperplane, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A verified mathematical property failed to hold. Raised only by the
// verification sweeps; distinguishes a falsified claim from an input problem.
class PropertyViolation : public std::runtime_error {
public:
    explicit PropertyViolation(const std::string& what) : std::runtime_error(what) {}
};

// Malformed external input (JSON schema mismatch, unparsable rational, ...).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace blform
