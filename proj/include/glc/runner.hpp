#pragma once

// Command implementations behind the CLI. Each builds its pipeline from a
// validated RunConfig, writes report.json (plus per-command artifacts) into
// the output directory, and returns the process exit code. Physical regime
// outcomes -- supercritical drive, a diverging corrector, lost contraction,
// blow-up -- are reported results, not errors.

#include <string>

#include "glc/config.hpp"

namespace glc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;      // solver failure / internal error
inline constexpr int kExitOutcome = 2;    // physical regime outcome
inline constexpr int kExitAssertion = 3;  // unstable verdict / failed slope assertion
inline constexpr int kExitUsage = 64;     // bad configuration or command line

int cmd_steady(const RunConfig& cfg);
int cmd_stability(const RunConfig& cfg);
int cmd_evolve(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);

// Validates, dispatches, and maps stray exceptions to exit codes.
int run_command(const std::string& name, const RunConfig& cfg);

}  // namespace glc
