#pragma once

// Run configuration shared by every CLI command. Fields are grouped into
// blocks that mirror the config-file sections; defaults here are the
// documented defaults. validate() is the single gatekeeper: commands can
// assume a validated config and never re-check ranges.

#include <string>
#include <vector>

#include "glc/grid.hpp"
#include "glc/profile.hpp"

namespace glc {

struct GridBlock {
  int nx = 64;
  int ny = 64;
  double lx = 1.0;
  double ly = 1.0;
  // Contact segments as "edge:lo:hi[:polarity]" strings, e.g. "left:0.25:0.75:+1".
  std::vector<std::string> contacts;
};

struct ParamsBlock {
  double epsilon = 0.5;
  double sigma = 1.0;
  double amplitude = 0.0;   // raw profile amplitude
  double delta = -1.0;      // >= 0 picks the amplitude from the target delta instead
  std::string shape = "cosine";
};

struct SolverBlock {
  double tol = 1e-10;
  int max_iter = 40;
  double delta_guard = 0.5;
  double dt = 0.0;          // 0 = auto (guard fraction of epsilon^2)
  double t_final = 10.0;
  int sample_every = 5;
  double margin = 1e-6;     // stability verdict band around zero
  double perturb = 1e-3;    // relative size of the initial kick in evolve
  unsigned long long seed = 1;
  double fit_t0 = -1.0;     // decay-fit window; negatives = automatic
  double fit_t1 = -1.0;
};

struct SweepBlock {
  std::string axis = "delta";        // delta | epsilon | sigma
  std::vector<double> values;
  std::string metric = "correction"; // correction | rho0-deviation
  double expected_slope = 0.0;       // 0 = no slope assertion
  double slope_tol = 0.2;
  int threads = 1;
};

struct OutputBlock {
  std::string dir = "out";
  bool dump_fields = false;
  int k = 6;                    // eigenpairs requested
  std::string mode = "auto";    // auto | dense | iterative
  bool with_spectrum = false;   // attach a spectrum section to evolve runs
};

struct RunConfig {
  GridBlock grid;
  ParamsBlock params;
  SolverBlock solver;
  SweepBlock sweep;
  OutputBlock output;

  // Throws ConfigError naming the offending key. `command` is the CLI
  // subcommand; sweep-only constraints are enforced only for "sweep".
  void validate(const std::string& command) const;

  Grid make_grid() const;
  // Amplitude after resolving a delta target against the grid and shape.
  double resolved_amplitude(const Grid& g) const;
  CurrentProfile make_profile(const Grid& g) const;
  ModelParams make_params(const CurrentProfile& j) const;
};

// Parse one "edge:lo:hi[:polarity]" contact string. Throws ConfigError on
// malformed input.
ContactSegment parse_contact(const std::string& text);
std::vector<ContactSegment> parse_contacts(const std::vector<std::string>& texts);

}  // namespace glc
