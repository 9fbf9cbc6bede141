#pragma once

#include <stdexcept>
#include <string>

namespace fqm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPrimePower : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct ConsistencyError : Error { using Error::Error; };
struct LoopPresent : Error { using Error::Error; };
struct InvalidParam : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace fqm
