#ifndef NKBENCH_ERROR_HPP
#define NKBENCH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nkbench {

/// Bad argument or malformed input. Maps to CLI exit code 2.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inconsistent run configuration (e.g. success termination without a target).
class ConfigError : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

/// A budget (node limit, population cap) was exhausted. Maps to exit code 3.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal invariant violated. Maps to exit code 4.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {
inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}
}  // namespace detail

}  // namespace nkbench

#endif  // NKBENCH_ERROR_HPP
