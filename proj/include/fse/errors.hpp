#pragma once

#include <stdexcept>
#include <string>

namespace fse {

// Input outside an operation's domain (non-finite values, alpha outside (0,1), sigma <= 0, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// A linear-scale value is not representable; the log form is still valid.
class OverflowError : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

// A user-supplied model violated its own assumptions (e.g. nonpositive kernel value).
class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A numerical procedure found a structure it cannot handle (non-monotone predicate,
// root finder failure, vanishing prior mass).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_finite(double v, const char* name) {
  if (!(v - v == 0.0)) {
    throw DomainError(std::string(name) + " must be finite");
  }
}

inline void require_positive(double v, const char* name) {
  require_finite(v, name);
  if (!(v > 0.0)) {
    throw DomainError(std::string(name) + " must be > 0");
  }
}

inline void require_probability(double v, const char* name) {
  require_finite(v, name);
  if (!(v > 0.0 && v < 1.0)) {
    throw DomainError(std::string(name) + " must lie in (0, 1)");
  }
}

}  // namespace detail
}  // namespace fse
