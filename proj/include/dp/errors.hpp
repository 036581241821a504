#pragma once

#include <stdexcept>
#include <string>

namespace dp {

// Malformed or invalid problem data. Maps to CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solver failed on input that passed validation. Maps to exit code 2.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumeration or solve budget would be exceeded. Maps to exit code 3.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dp
