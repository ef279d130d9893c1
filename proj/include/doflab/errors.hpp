#pragma once

#include <stdexcept>
#include <string>

namespace doflab {

// Index outside [1, K].
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Parameters outside a formula's or model's range of validity.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// K too small for the requested construction.
class InstanceTooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed association or plan (bad keys, indices, broken plan invariants
// that make a check meaningless).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON document does not match the expected layout.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LimitExceeded : public std::runtime_error {
 public:
  LimitExceeded(const std::string& what, double search_size)
      : std::runtime_error(what), search_size_(search_size) {}
  double search_size() const noexcept { return search_size_; }

 private:
  double search_size_;
};

// A precondition that a checker should have guaranteed did not hold.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace doflab
