#pragma once

#include <stdexcept>
#include <string>

namespace mcl {

// Parameter outside the range a construction or bound is stated for.
struct HypothesisError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace mcl
