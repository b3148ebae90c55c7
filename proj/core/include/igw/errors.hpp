#pragma once

#include <stdexcept>
#include <string>

namespace igw {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration: bad model spec, bad weights, malformed input.
/// The CLI maps these to the usage exit code.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Valid inputs for which the requested quantity does not exist.
/// The CLI maps these to the domain-error exit code.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// The weighted normal-equation matrix is singular or near-singular
/// (condition number above 1e12), e.g. for a constant path.
class DegenerateDesignError : public DomainError {
public:
    explicit DegenerateDesignError(const std::string& what) : DomainError(what) {}
};

/// A path without the variation needed for nuisance estimation (all zeros).
class DegeneratePathError : public DomainError {
public:
    explicit DegeneratePathError(const std::string& what) : DomainError(what) {}
};

/// tau = 2*mu/sigma^2 is undefined because sigma^2 estimated as zero.
class TauUndefinedError : public DomainError {
public:
    explicit TauUndefinedError(const std::string& what) : DomainError(what) {}
};

} // namespace igw
