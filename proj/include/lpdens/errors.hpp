#pragma once

#include <stdexcept>
#include <string>

namespace lpdens {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// Adaptive integration could not meet the requested tolerance within the
// subdivision depth limit.
struct QuadratureFailure : Error {
  using Error::Error;
};

// Gram matrix numerically degenerate (smallest eigenvalue below threshold).
struct SingularGram : Error {
  using Error::Error;
};

struct NonConvergence : Error {
  using Error::Error;
};

struct EmptyGrid : Error {
  using Error::Error;
};

struct DegenerateHull : Error {
  using Error::Error;
};

struct EnvelopeFailure : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace lpdens
