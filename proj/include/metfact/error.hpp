#pragma once

#include <stdexcept>
#include <string>

namespace metfact {

// Shape problems: mismatched label sets, non-square matrices, unknown labels.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inputs that are well-formed but outside an operation's domain
// (empty subset, non-ultrametric where one is required, tau <= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exact searches refuse instances larger than their supported size.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace metfact
