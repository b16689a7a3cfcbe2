#ifndef DDFX_ERRORS_HPP
#define DDFX_ERRORS_HPP

#include <stdexcept>

namespace ddfx {

// Typed failures; the CLI maps each to its own error code.

class InvalidField : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotMonic : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotSquarefree : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A divisor-set pair that is malformed or violates its declared bounds.
class PairError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The pair does not cover the degrees or divisors the caller needs.
class NotCovering : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// An algorithmic guarantee failed on the given input (for instance a pair
// without prefactored differences, or a cofactor that is not prime).
class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ddfx

#endif  // DDFX_ERRORS_HPP
