#pragma once

#include <stdexcept>
#include <string>

namespace lrising {

/// Thrown when a caller violates a documented precondition.
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when a request exceeds a hard resource limit (enumeration size,
/// sampler table size). The message names the limit.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractError(message);
}

}  // namespace lrising
