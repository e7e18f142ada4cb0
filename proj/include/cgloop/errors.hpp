#pragma once

#include <stdexcept>
#include <string>

namespace cgloop {

/// Parameter outside the domain where a formula is defined.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Binary series operation on operands with different backends.
class BackendMismatch : public DomainError {
  public:
    using DomainError::DomainError;
};

/// An identity that must hold exactly (or to tolerance) failed.
class IdentityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Truncation tail too large for the requested accuracy.
class TailBoundError : public std::runtime_error {
  public:
    TailBoundError(const std::string& what, double tail_bound)
        : std::runtime_error(what), tail_bound_(tail_bound) {}
    double tail_bound() const noexcept { return tail_bound_; }

  private:
    double tail_bound_;
};

/// Least-squares extraction whose misfit exceeded tolerance.
class FitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace cgloop
