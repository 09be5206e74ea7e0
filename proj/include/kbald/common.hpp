#pragma once

#include <stdexcept>
#include <string>

namespace kbald {

// Input failed a contract check (bad index, unnormalized distribution,
// malformed file). CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// The requested exact computation exceeds the enumeration cap.
// CLI maps this to exit code 2.
class InfeasibleError : public std::runtime_error {
public:
  explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kbald
