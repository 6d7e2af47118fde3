#pragma once

#include <stdexcept>
#include <string>

namespace bougerol {

/// Raised when an operation is called outside its documented domain
/// (non-positive horizon, negative variance, zero level, ...).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace bougerol
