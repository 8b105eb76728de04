#pragma once

#include <stdexcept>
#include <string>

namespace mhdlab {

// Invalid grid/solver/experiment parameters or malformed config input.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values produced while integrating; carries the failure time.
struct BlowupError : std::runtime_error {
  double time;
  BlowupError(const std::string& what, double t)
      : std::runtime_error(what), time(t) {}
};

// Step size exceeded the admissibility limit dt <= 0.5*dx/max|u,B|.
struct CflError : std::runtime_error {
  double time;
  CflError(const std::string& what, double t)
      : std::runtime_error(what), time(t) {}
};

// Picard iterates grew past the divergence guard.
struct PicardDivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mhdlab
