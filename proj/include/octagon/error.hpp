#pragma once

#include <stdexcept>
#include <string>

namespace octagon {

// Raised when a rational map is evaluated where a denominator vanishes.
// The message names the vanishing factor so blow-up diagnostics stay readable.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace octagon
