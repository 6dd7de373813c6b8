#pragma once

#include <stdexcept>
#include <string>

namespace tenreg {

/// Input lies outside the domain of a transform or benchmark function.
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A requested dense materialization would exceed the size cap.
class SizeError : public std::runtime_error {
public:
  explicit SizeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Linear solve failed even after a jitter retry.
class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Adaptive sampling could not produce the requested batch.
class SamplerError : public std::runtime_error {
public:
  explicit SamplerError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Sobol indices requested on a model with zero output variance.
class ZeroVariance : public std::runtime_error {
public:
  explicit ZeroVariance(const std::string& msg) : std::runtime_error(msg) {}
};

/// Relative error against a reference with zero norm.
class ZeroNorm : public std::runtime_error {
public:
  explicit ZeroNorm(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed run configuration or input file.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// External simulator failed or produced malformed output.
class SimulatorError : public std::runtime_error {
public:
  explicit SimulatorError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tenreg
