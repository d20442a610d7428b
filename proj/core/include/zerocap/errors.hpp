#pragma once

#include <stdexcept>
#include <string>

namespace zerocap {

// Malformed input: bad dimensions, bad permutations, unparseable specs.
class spec_error : public std::invalid_argument {
 public:
  explicit spec_error(const std::string& what) : std::invalid_argument(what) {}
};

// A request that is provably unsatisfiable (e.g. more messages than the
// capacity SDP allows), carrying the solver's certificate story in the text.
class infeasible_error : public std::runtime_error {
 public:
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure inside the interior-point solver.
class solver_error : public std::runtime_error {
 public:
  explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace zerocap
