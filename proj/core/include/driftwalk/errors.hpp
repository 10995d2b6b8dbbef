#pragma once

#include <stdexcept>

namespace driftwalk {

// Raised when an iterative method fails to converge or a computation that
// should produce a finite value does not.  Argument-validation failures use
// std::domain_error instead, so callers can tell "bad input" from "the
// numerics gave up".
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}
