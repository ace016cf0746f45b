#pragma once

#include <stdexcept>
#include <string>

namespace featprop {

// Bad user input (malformed file, out-of-range index, inconsistent flags).
// The CLI maps this to exit code 2; everything else to 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

class SolveError : public std::runtime_error {
 public:
  explicit SolveError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace featprop
