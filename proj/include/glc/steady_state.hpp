#pragma once

// True steady state on top of the leading-order background: the corrections
// (eta, omega, varphi) = (density, phase, potential) solve a coupled linear
// block system per iteration of a fixed-point map; convergence is monitored
// in a mixed Sobolev norm. Losing contraction is a reported outcome (the
// physical drive is too strong), not a crash.

#include <vector>

#include "glc/diagnostics.hpp"
#include "glc/fields.hpp"
#include "glc/leading_order.hpp"
#include "glc/profile.hpp"
#include "glc/solvers.hpp"

namespace glc {

// Corrections relative to the leading-order state: rho1 = rho - rho0,
// chi1 = (chi - chi0)/||J||, phi1 = (phi - phi0)/||J||. chi1 is kept at zero
// mean (the phase gauge lives in the background).
struct CorrectionTriple {
  ScalarField rho1;
  ScalarField chi1;
  ScalarField phi1;

  static CorrectionTriple zero(const Grid& g);
};
CorrectionTriple operator-(const CorrectionTriple& a, const CorrectionTriple& b);

// Mixed norm the contraction is measured in:
// ||eta||_{1,2} + ||eta||_inf + eps*||D^2 eta||_2 + ||omega||_{2,2} + ||phi||_{2,2}.
double h_norm(const CorrectionTriple& v, double epsilon);

struct SteadyRhs {
  ScalarField f1;
  ScalarField f2;
  ScalarField f3;
};
// Right sides of the correction system at the current iterate; all divergence
// terms assembled in flux form.
SteadyRhs assemble_rhs(const CorrectionTriple& v, const LeadingOrderState& bg);

// The linear map whose fixed point is the steady correction: assembles the
// coupled block matrix once (bordered by the phase-mean pin) and factors it.
class SteadyOperator {
 public:
  explicit SteadyOperator(const LeadingOrderState& bg);
  const LeadingOrderState& background() const { return *bg_; }
  // Solve the block system against assemble_rhs(v); omega comes back with
  // exact zero mean. last_multiplier() exposes the bordered multiplier, which
  // vanishes (to solver precision) for consistent right sides.
  CorrectionTriple apply(const CorrectionTriple& v) const;
  double last_multiplier() const { return last_multiplier_; }

 private:
  const LeadingOrderState* bg_;
  SparseFactorization lu_;
  mutable double last_multiplier_ = 0.0;
};

// One application of the map with a freshly assembled operator (tests and
// probes; solve_steady reuses one factorization across all iterations).
CorrectionTriple apply_A(const CorrectionTriple& v, const LeadingOrderState& bg);

enum class SteadyStatus { Converged, NoContraction };
const char* steady_status_name(SteadyStatus s);

struct SteadyStateSolution {
  ScalarField rho_s;
  ScalarField chi_s;
  ScalarField phi_s;
  CorrectionTriple correction;
  LeadingOrderState background;
  SteadyStatus status = SteadyStatus::Converged;
  int iterations = 0;
  std::vector<double> increments;          // ||v_{k+1} - v_k||_H per iteration
  std::vector<double> contraction_ratios;  // increment[k]/increment[k-1]
  double h_norm_final = 0.0;
  SteadyResiduals residuals;
};

struct SteadyOptions {
  double tol = 1e-10;  // H-norm increment target
  int max_iter = 40;
  int no_contraction_streak = 3;  // ratios >= 1 in a row before giving up
  const CorrectionTriple* v0 = nullptr;  // optional start (uniqueness probes)
};

// Picard iteration v <- A(v) from v = 0 (or opts.v0). Throws SolverError when
// max_iter runs out while still contracting; returns status NoContraction
// when the ratios say the drive is too strong.
SteadyStateSolution solve_steady(const LeadingOrderState& bg, const CurrentProfile& j,
                                 const SteadyOptions& opts = {});

}  // namespace glc
