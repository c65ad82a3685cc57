#pragma once

#include <stdexcept>
#include <string>

namespace socsec {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Series, quadrature or integral failed to converge (or diverges).
class NonConvergent : public Error {
 public:
  using Error::Error;
};

/// Invalid region or decomposition geometry.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Moment pair cannot be matched by a Gamma law (nonpositive mean or variance).
class DegenerateFit : public Error {
 public:
  using Error::Error;
};

/// Invalid scenario or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace socsec
