#pragma once

#include <stdexcept>
#include <string>

namespace smoothcvx {

// Point outside the open domain of a function.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Coincident points where a bound divides by ||y - x||^2.
struct DegenerateError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Pointwise data that no L-smooth convex function can interpolate.
struct InfeasibleData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two interpolants that cannot be combined (different knots or endpoint data).
struct MismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoFeasiblePoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace smoothcvx
