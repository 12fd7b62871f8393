#pragma once

#include <stdexcept>
#include <string>

namespace minq {

/// Invalid user input: bad dimensions, unphysical states, malformed files.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation produced a non-finite value or otherwise broke down.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace minq
