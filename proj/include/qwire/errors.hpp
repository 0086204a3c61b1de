#pragma once

#include <stdexcept>
#include <string>

namespace qwire {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed graph or channel. Maps to the CLI config-error exit code.
class InvalidGraph : public Error {
public:
    using Error::Error;
};

/// Bad input file or run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Failure of the physics computation itself (exit code 1 in the CLI).
class DomainError : public Error {
public:
    using Error::Error;
};

class SolverDegeneracy : public DomainError {
public:
    SolverDegeneracy(double energy, double condition);
    double energy() const { return energy_; }
    double condition() const { return condition_; }

private:
    double energy_;
    double condition_;
};

/// Adaptive refinement ran out of budget; [lower, upper] brackets the trouble.
class ResolutionError : public DomainError {
public:
    ResolutionError(const std::string& what, double lower, double upper);
    double lower() const { return lower_; }
    double upper() const { return upper_; }

private:
    double lower_;
    double upper_;
};

/// Amplitude too small for its phase to be meaningful.
class PhaseUndefined : public DomainError {
public:
    PhaseUndefined(double parameter, double magnitude);
    double parameter() const { return parameter_; }

private:
    double parameter_;
};

class SingularContour : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace qwire
