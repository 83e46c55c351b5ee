#pragma once

#include <stdexcept>
#include <string>

namespace glc {

// Bad user input: malformed config, inconsistent grid/contact layout, bad CLI
// arguments. Maps to exit code 64.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A linear solve failed to meet its residual contract (and no fallback was
// available). Internal error, exit code 1.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// The applied current is too strong for the leading-order density to stay
// real: delta^2 |grad chi0|^2 >= 1 somewhere. Expected physical outcome at
// large drive, exit code 2.
struct SupercriticalCurrent : std::runtime_error {
  SupercriticalCurrent(int cell_, double value_, const std::string& what)
      : std::runtime_error(what), cell(cell_), value(value_) {}
  int cell;      // offending cell (linear index)
  double value;  // max of delta^2 |grad chi0|^2
};

// The background corrector iteration diverged (drive too large for the
// quasi-Newton loop). Same exit class as SupercriticalCurrent.
struct CorrectorDiverged : std::runtime_error {
  explicit CorrectorDiverged(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace glc
