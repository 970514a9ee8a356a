#pragma once

#include <stdexcept>
#include <string>

namespace nsbell {

/// Thrown when an exact enumeration or LP would exceed its configured
/// budget. The caller gets a refusal, never a silent approximation.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nsbell
