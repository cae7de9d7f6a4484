#pragma once

#include <stdexcept>
#include <string>

namespace sigdet {

/// The (weighted) squared sequence does not have a finite sum for the given
/// family parameters.
class NonSummable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class LengthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidAlpha : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when C_min cannot be evaluated because C_{alpha,1} is too small for
/// the requested beta.
class ConstantTooSmall : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConstraintUnsatisfiable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sigdet
