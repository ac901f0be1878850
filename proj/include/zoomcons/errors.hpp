#pragma once

#include <stdexcept>

namespace zoomcons {

// Invalid arguments are reported with std::invalid_argument. The types below
// cover the remaining failure classes of the library.

/// A documented precondition of an operation does not hold.
class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A received symbol cannot have been produced by a synchronized encoder.
class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter bounds cannot be satisfied (e.g. a non-positive denominator).
class InfeasibleParameters : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace zoomcons
