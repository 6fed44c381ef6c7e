#pragma once

#include <stdexcept>
#include <string>

namespace matchq {

/// Numerical failure of the free-boundary solver: bracket not found,
/// shooting did not bracket, integrator step underflow.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace matchq
