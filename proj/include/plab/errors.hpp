#pragma once

#include <stdexcept>
#include <string>

namespace plab {

/// Thrown when an operation's precondition on its arguments is violated.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace plab
