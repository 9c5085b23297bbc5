#pragma once

#include <stdexcept>
#include <string>

namespace cema {

// Malformed arguments: wrong lengths, out-of-range orders or parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An invariant that has no value on the given graph (e.g. m_v of an isolated vertex).
class UndefinedInvariant : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Eigensolver non-convergence, non-finite loss or gradient.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Misuse of the construction environment, such as stepping a finished episode.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace cema
