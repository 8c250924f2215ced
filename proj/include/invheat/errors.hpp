#pragma once

#include <stdexcept>
#include <string>

namespace invheat {

/// The discrete moving frame does not exist at the given data (the eps4
/// logarithm argument is non-positive).
class FrameUndefined : public std::runtime_error {
 public:
  explicit FrameUndefined(const std::string& what) : std::runtime_error(what) {}
};

/// Input violates a positivity/finiteness precondition (u <= 0, bad spacing).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Periodic mesh has a non-positive gap or gaps that do not add up to the
/// period.
class MeshTangled : public std::runtime_error {
 public:
  explicit MeshTangled(const std::string& what) : std::runtime_error(what) {}
};

/// An explicit solve produced a non-positive value where the log-based
/// scheme requires u > 0 (time step too large).
class PositivityLost : public std::runtime_error {
 public:
  explicit PositivityLost(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace invheat
