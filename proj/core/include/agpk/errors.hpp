#pragma once

#include <stdexcept>
#include <string>

namespace agpk {

// An input violates a documented precondition: unknown model name, malformed
// or missing parameter, mismatched backends/dimensions, invalid truncation
// order.  The CLI maps this to exit code 2.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation cannot produce a finite, trustworthy result: singular solve
// at mu = 0, divergent norm over a degenerate spectrum, non-realizable moment
// sequence, non-convergent quadrature promoted to an error.  The CLI maps
// this to exit code 3.
class numerical_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A request exceeds a hard resource cap (dense matrix dimension, stored
// Krylov basis size).  The CLI maps this to exit code 4.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace agpk
