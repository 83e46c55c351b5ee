#pragma once

// Approximate steady state built from the current profile alone: the base
// pair solves the linear potential/phase system, a quasi-Newton corrector
// absorbs the density feedback, and the density itself is slaved to the
// phase gradient. All fields here are normalized by the current norm; the
// physical fields are recovered by scaling with it.

#include "glc/fields.hpp"
#include "glc/profile.hpp"

namespace glc {

struct LeadingOrderState {
  ScalarField phi00_tilde;   // base potential, (-sigma*Lap + 1) phi = flux data
  ScalarField chi00_tilde;   // base phase, Lap chi = phi, zero mean
  ScalarField varphi_delta;  // corrector: potential part
  ScalarField omega_delta;   // corrector: phase part, zero mean
  ScalarField phi0_tilde;    // phi00_tilde + varphi_delta
  ScalarField chi0_tilde;    // chi00_tilde + omega_delta, zero mean
  ScalarField rho0;          // sqrt(1 - delta^2 |grad chi0_tilde|^2)
  double epsilon = 1.0;
  double sigma = 1.0;
  double delta = 0.0;   // epsilon * ||J||
  double norm_j = 0.0;  // ||J||
  double corrector_residual = 0.0;
  int corrector_iterations = 0;
};

struct CorrectorOptions {
  double tol = 1e-10;      // absolute L2 residual target per component
  int max_iter = 60;
  double delta_guard = 0.5;  // refuse deltas past this, the theory is local
};

// Base potential: (-sigma*Delta + 1) phi = flux data from the profile.
// Linear in the profile.
ScalarField solve_base_phi(const Grid& g, const CurrentProfile& j, double sigma);

// Base phase: Delta chi = phi with zero flux and zero mean. phi must have
// (numerically) zero integral, which the base potential guarantees.
ScalarField solve_base_chi(const Grid& g, const ScalarField& phi00);

// Slaved density rho0 = sqrt(1 - delta^2 |grad chi|^2), with the gradient
// square averaged from faces to cells. Throws SupercriticalCurrent when the
// argument of the root is <= 0 in some cell.
ScalarField density_from_phase(const ScalarField& chi0_tilde, double delta);

// Quasi-Newton loop for the corrector pair (varphi_delta, omega_delta) with
// the derivative frozen at zero: each step solves the base potential operator
// for the varphi update, then a zero-mean Poisson problem for the omega
// update, against the current nonlinear residual. state must carry the base
// pair and the parameters; on return the combined fields and the density are
// filled in. Throws CorrectorDiverged when the residual grows three steps in
// a row, SolverError when max_iter is exhausted.
void solve_corrector(LeadingOrderState& state, const CorrectorOptions& opts = {});

// Full pipeline: normalize the profile, solve the base pair, run the
// corrector, slave the density.
LeadingOrderState solve_leading_order(const CurrentProfile& j, double epsilon,
                                      double sigma, const CorrectorOptions& opts = {});

}  // namespace glc
