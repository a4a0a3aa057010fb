#pragma once

#include <stdexcept>
#include <string>

namespace cyclesim {

// Bad input or parameters (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A protocol or data-structure invariant failed (CLI exit code 3).
struct InvariantFault : std::logic_error {
  using std::logic_error::logic_error;
};

// A routing or phase precondition declared by the caller did not hold.
struct PreconditionViolation : InvariantFault {
  using InvariantFault::InvariantFault;
};

// Operation not available under the current topology.
struct ModelError : InvariantFault {
  using InvariantFault::InvariantFault;
};

[[noreturn]] void fault(const std::string& what);

inline void check(bool ok, const char* what) {
  if (!ok) fault(what);
}

}  // namespace cyclesim
