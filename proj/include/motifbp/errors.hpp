#pragma once

#include <stdexcept>
#include <string>

namespace motifbp {

// Malformed instance, spec or message vector supplied by the caller.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A formula evaluated outside the region where it is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exact enumeration refused because 2^n is too large.
class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace motifbp
