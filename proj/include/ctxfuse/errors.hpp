#pragma once

#include <stdexcept>
#include <string>

namespace ctxfuse {

// A caller broke a documented precondition (wrong sensor level, mismatched ids, index out of range).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A label or identifier did not resolve against the scenario.
class LookupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed input whose values break an invariant. The message names field and value.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Posterior normalizer is zero for every type.
class DegenerateEvidenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point lies outside every region polygon and the index has no default region.
class NotCoveredError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ctxfuse
