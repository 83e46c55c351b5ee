#pragma once

// Time integration of the gauged evolution equation with semi-implicit
// splitting: diffusion implicit, reaction and potential coupling explicit.
// The electric potential is re-solved from the order parameter after every
// step, so the gauge normalization (|u|^2 phi)_mean = 0 holds along the whole
// trajectory. The integrator's job is correct long-time decay behavior (the
// dynamical shadow of the spectrum), not high-order accuracy.

#include <string>
#include <vector>

#include "glc/fields.hpp"
#include "glc/profile.hpp"

namespace glc {

struct EvolutionState {
  ComplexField u;
  ScalarField phi;
  double t = 0.0;
  int step_count = 0;
};

// Potential at fixed u: sigma*Lap(phi) = Div Im(conj(u) grad u) with the
// contact flux entering through the boundary source, additive constant fixed
// by (|u|^2 phi)_mean = 0. Throws SolverError when integral(|u|^2) degenerates
// below 1e-12 * |Omega| (the normalization loses meaning).
ScalarField potential_solve(const ComplexField& u, const CurrentProfile& j, double sigma);

// One semi-implicit step: phi from u_n, explicit reaction, then
// (I - dt*Lap) u_{n+1} = u_n + dt*(-i phi u_n + eps^-2 u_n (1 - |u_n|^2))
// per real component with the SPD solver. The returned state carries the
// refreshed potential of u_{n+1}. Throws SolverError on non-finite results.
EvolutionState step(const EvolutionState& state, double dt, const CurrentProfile& j,
                    const ModelParams& params);

struct Trajectory {
  std::vector<double> times;
  std::vector<double> distance;   // plain L2 distance to the reference
  std::vector<double> energy;     // ||grad u||_2^2 + (2 eps^2)^-1 ||1-|u|^2||_2^2
  std::vector<double> max_abs;    // max |u|
  std::vector<double> gauge_rel;  // |mean(|u|^2 phi)| / ||phi||_2
  std::vector<ComplexField> snapshots;  // one per sample when requested
  bool blew_up = false;
  std::string blow_up_message;
  EvolutionState final_state;  // last finite state
};

struct EvolveOptions {
  const ComplexField* reference = nullptr;  // distance target; u0 when null
  bool keep_snapshots = true;               // decay_rate needs snapshots
  double guard_factor = 0.1;                // require dt <= guard_factor * eps^2
};

// ceil(T/dt) steps from u0, sampling observables at t = 0, every
// sample_every-th step, and the final step. Blow-up (non-finite fields or a
// runaway amplitude) ends the run early with the last finite state kept.
// Throws ConfigError when dt violates the stability guard.
Trajectory evolve(const ComplexField& u0, double T, double dt, const CurrentProfile& j,
                  const ModelParams& params, int sample_every,
                  const EvolveOptions& opts = {});

// min over a global phase theta of ||u - e^{i theta} ref||_2; closed form
// via the complex inner product. This is the distance the decay fit uses:
// the gauge direction does not decay and must not stall the fit.
double phase_modded_distance(const ComplexField& u, const ComplexField& ref);

struct DecayWindow {
  double t_begin = 0.0;
  double t_end = 0.0;
};

// Least-squares slope of log phase_modded_distance(snapshot, u_s) vs t over
// the window samples; returns the (positive) decay rate. Throws
// std::invalid_argument on fewer than 5 samples, a non-positive or
// non-decreasing distance sequence, or a trajectory without snapshots.
double decay_rate(const Trajectory& traj, const ComplexField& u_s, const DecayWindow& window);

}  // namespace glc
