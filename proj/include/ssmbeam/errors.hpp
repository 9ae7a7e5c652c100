#pragma once

#include <stdexcept>
#include <string>

namespace ssmbeam {

// Invalid parameters, configuration, or preconditions.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A denominator of the form (eigenvalue combination) vanished or fell below
// tolerance; the message names the offending combination.
class ResonanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integration blow-up, step-size underflow, Newton stagnation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ssmbeam
