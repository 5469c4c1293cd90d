#ifndef OPTOMECH_ERRORS_HPP
#define OPTOMECH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace optomech {

// Frequency-domain solve hit an ill-conditioned system (operation at or past
// an instability).
class NearSingularError : public std::runtime_error {
 public:
  explicit NearSingularError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive quadrature could not reach the requested tolerance within its
// subdivision budget.
class QuadratureFailure : public std::runtime_error {
 public:
  explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

// A covariance matrix (or moment set) violates the bona-fide uncertainty
// condition beyond tolerance. Signals a quadrature or convention bug, not a
// physical regime.
class UnphysicalError : public std::runtime_error {
 public:
  explicit UnphysicalError(const std::string& what) : std::runtime_error(what) {}
};

// A closed-form expression was evaluated outside its domain.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A 1-d maximization found a flat objective (nothing to optimize).
class NoMaximumError : public std::runtime_error {
 public:
  explicit NoMaximumError(const std::string& what) : std::runtime_error(what) {}
};

// Requested an output-field computation on an unstable system.
class InstabilityError : public std::runtime_error {
 public:
  explicit InstabilityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace optomech

#endif  // OPTOMECH_ERRORS_HPP
