#pragma once

#include <stdexcept>
#include <string>

namespace permclust {

// Raised on malformed arguments or violated call contracts. CLI exit code 2.
class InvalidInput : public std::invalid_argument {
public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a computation would exceed a configured resource budget,
// e.g. the enumeration cap. CLI exit code 3.
class ResourceLimit : public std::runtime_error {
public:
  explicit ResourceLimit(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace permclust
