#pragma once

#include <stdexcept>
#include <string>

namespace hbn {

// Evidence has probability zero under the model: reported explicitly instead
// of letting a 0/0 turn into NaN.
class ZeroEvidenceError : public std::runtime_error {
 public:
  explicit ZeroEvidenceError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure during fitting or inference (NaN loss, matrix not
// positive definite, ...). The CLI maps this family to exit code 2.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hbn
