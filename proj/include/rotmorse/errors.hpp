#pragma once

#include <stdexcept>

namespace rotmorse {

/// Invalid or unparseable run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A root solve or eigensolve did not converge, or the model has no bound state.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The radial sampling of a state does not cover what a transform needs.
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rotmorse
