#pragma once

#include <stdexcept>
#include <string>

namespace pindex {

/// Raised for malformed or out-of-range caller input.
class InputError : public std::invalid_argument {
public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an internal invariant is breached (a computed object fails
/// its own independent check).
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace pindex
