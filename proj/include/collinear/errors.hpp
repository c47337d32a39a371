#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace collinear {

// Base for every failure raised by the library. Argument validation uses
// std::invalid_argument / std::domain_error directly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two bodies share a position, so a singular potential cannot be evaluated.
class SingularityError : public Error {
 public:
  SingularityError(std::size_t i, std::size_t j)
      : Error("coincident bodies " + std::to_string(i) + " and " + std::to_string(j)),
        first_(i),
        second_(j) {}
  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

// Total collapse (I = 0) or a similar configuration on which a quantity is undefined.
class DegenerateConfigurationError : public Error {
 public:
  using Error::Error;
};

// A theorem check was requested on a trajectory that violates one of its hypotheses.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(std::string hypothesis)
      : Error("hypothesis not satisfied: " + hypothesis), hypothesis_(std::move(hypothesis)) {}
  const std::string& hypothesis() const { return hypothesis_; }

 private:
  std::string hypothesis_;
};

}  // namespace collinear
