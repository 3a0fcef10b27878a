#pragma once

#include <stdexcept>
#include <string>

namespace modsurf {

// Evaluation hit a pole, a zero of a log/power argument or a branch cut.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class OrderError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A quantity that the formula divides by vanished within tolerance.
class DegeneracyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnclassifiedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class PoleOnPath : public DomainError {
 public:
  using DomainError::DomainError;
};

class ToleranceNotMet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PositivityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConvexityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A field-level precondition (e.g. log-harmonicity) does not hold.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace modsurf
