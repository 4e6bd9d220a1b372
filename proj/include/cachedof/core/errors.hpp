#pragma once

#include <stdexcept>
#include <string>

namespace cachedof {

/// Raised when two artifacts that must agree (a scheme and its payloads, a
/// plan and its channel) do not.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A random draw hit a measure-zero event (zero or repeated coefficient).
/// The caller is expected to advance the seed and draw again.
class RegenerationRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cachedof
