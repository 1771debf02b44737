#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace xdyn {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter or input lies outside the domain of an operation.
class DomainError : public Error {
 public:
  DomainError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A caller broke a documented precondition of an operation (e.g. an
// improper or impulsive Laplace transform handed to the inverter).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Closed right half-plane poles where a limit at t -> infinity is requested.
class StabilityError : public Error {
 public:
  using Error::Error;
};

// Near-coincident poles whose multiplicity could not be resolved.
class ClusteredRootsError : public Error {
 public:
  ClusteredRootsError(const std::string& message, std::vector<std::complex<double>> cluster)
      : Error(message), cluster_(std::move(cluster)) {}

  const std::vector<std::complex<double>>& cluster() const noexcept { return cluster_; }

 private:
  std::vector<std::complex<double>> cluster_;
};

// A signal that must be real evaluated with a large imaginary part.
class ConjugatePairingError : public Error {
 public:
  using Error::Error;
};

// An internal identity (trace, reconstruction) failed; signals a mis-encoded formula.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// An initial state could not be expressed in the superposition basis.
class SpanError : public Error {
 public:
  using Error::Error;
};

// A sampled trajectory is too coarse for reliable event detection.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

// Generic numerical breakdown (non-convergence, complex eigenvalues where real expected).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace xdyn
