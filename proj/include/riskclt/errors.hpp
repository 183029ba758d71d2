#pragma once

#include <stdexcept>
#include <string>

namespace riskclt {

/// Raised when a request falls on the wrong side of, or too close to, the
/// interpolation threshold p = n.
class RegimeError : public std::domain_error {
 public:
  explicit RegimeError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace riskclt
