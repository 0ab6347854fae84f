#pragma once

#include <stdexcept>

namespace rbm32 {

/// Input does not describe a valid distribution (negative entry, bad sum, ...).
class InvalidTensor : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A certificate was requested for a tensor outside the model.
class NotMember : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input sits on a degenerate locus the operation does not handle
/// (non-generic heights, boundary input to an interior-only test).
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A consistency check that should hold for every valid input failed.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rbm32
