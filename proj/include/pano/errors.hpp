#pragma once

#include <stdexcept>

namespace pano {

/// Raised when an input is well-formed but violates an operation's
/// precondition (e.g. too little valid depth for pose estimation).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File-system and parse failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pano
