#pragma once

#include <stdexcept>
#include <string>

namespace pucci {

/// Malformed or non-finite input data (asymmetric matrices, bad files, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operand shapes that do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters outside the admissible range of a formula (e.g. b*delta >= lambda*p).
class ParameterError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A potential or kernel evaluated on its singular set.
class BlowUpError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace pucci
