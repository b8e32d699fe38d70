#pragma once

#include <stdexcept>
#include <string>

namespace forgetting {

/// Malformed argument: wrong shape, non-finite entry, out-of-range parameter.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A collection whose tasks cannot all be fit by one linear predictor.
class Infeasible : public std::runtime_error {
public:
  Infeasible(const std::string& what, double max_residual)
      : std::runtime_error(what), max_residual_(max_residual) {}

  double max_residual() const noexcept { return max_residual_; }

private:
  double max_residual_;
};

/// A collection that parses fine but violates the data assumptions.
class ValidationFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace forgetting
