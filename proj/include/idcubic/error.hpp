#pragma once

#include <stdexcept>
#include <string>

namespace idc {

// Malformed external input (JSON, rational literals, flags).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands whose lengths or shapes do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A precondition on values failed (zero coordinate, wrong corank, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace idc
