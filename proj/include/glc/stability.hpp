#pragma once

// Linear stability of a computed steady state. The linearization acts on real
// stacked perturbations (rho, chi) of size 2n against the block mass
// M = diag(I, rho_s^2); the electric potential responds nonlocally, so every
// operator application hides an elliptic solve. The constant-phase gauge
// direction (0, 1) is an exact kernel vector and is deflated, never counted
// in the stability verdict.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "glc/fields.hpp"
#include "glc/operators.hpp"
#include "glc/solvers.hpp"
#include "glc/steady_state.hpp"

namespace glc {

class LinearizedOperator {
 public:
  // rho_s must be strictly positive (it enters the mass and the constraint
  // weights). The potential subsystem is factored once here; a dense image of
  // the block action is assembled when 2n <= dense_cap.
  LinearizedOperator(const ScalarField& rho_s, const ScalarField& chi_s,
                     const ScalarField& phi_s, double epsilon, double sigma,
                     int dense_cap = 4096);
  static LinearizedOperator around(const SteadyStateSolution& s, int dense_cap = 4096);

  const Grid& grid() const { return rho_s_.grid(); }
  const ScalarField& rho_s() const { return rho_s_; }
  const ScalarField& chi_s() const { return chi_s_; }
  const ScalarField& phi_s() const { return phi_s_; }
  // Mass weights of the chi block (rho_s^2).
  const ScalarField& mass_chi() const { return rho_s_sq_; }
  double epsilon() const { return epsilon_; }
  double sigma() const { return sigma_; }
  int size() const { return 2 * n_; }

  // phi(rho, chi) through the factored handle (the free nonlocal_potential
  // goes through solve_singular_neumann instead; both must agree).
  ScalarField potential(const ScalarField& rho, const ScalarField& chi) const;
  // The block action, potential solve included.
  void apply(const ScalarField& rho, const ScalarField& chi, ScalarField& rho_out,
             ScalarField& chi_out) const;

  bool has_dense() const { return !dense_.empty(); }
  // Row-major 2n x 2n image of apply(); empty when 2n > dense_cap.
  const std::vector<double>& dense() const { return dense_; }
  int dense_cap() const { return dense_cap_; }

  // L2 of Div(rho_s^2 grad chi_s) - rho_s^2 phi_s: how well the reference
  // satisfies the steady identity the chi row of the linearization leans on.
  // Recorded in every SpectrumReport.
  double steady_identity_residual() const { return steady_identity_residual_; }

 private:
  ScalarField transport_rhs(const ScalarField& rho, const ScalarField& chi) const;

  ScalarField rho_s_, chi_s_, phi_s_;
  ScalarField rho_s_sq_, two_rho_s_, two_rho_phi_, coef_rho_;
  double epsilon_ = 1.0, sigma_ = 1.0;
  int n_ = 0;
  int dense_cap_ = 4096;
  SparseOperator lap_;
  SparseFactorization pot_lu_;  // bordered (n+1) potential subsystem
  std::vector<double> dense_;
  double steady_identity_residual_ = 0.0;
};

// Potential response phi(rho, chi): sigma*Lap(phi) = Div(rho_s^2 grad chi)
// + Div(2 rho_s rho grad chi_s) with the weighted-affine gauge
// integral(rho_s^2 phi) + integral(2 phi_s rho_s rho) = 0, via the singular
// Neumann solver.
ScalarField nonlocal_potential(const ScalarField& rho, const ScalarField& chi,
                               const LinearizedOperator& steady);

// One application of the linearized block operator (rho_out, chi_out), using
// nonlocal_potential for the hidden solve.
std::pair<ScalarField, ScalarField> apply_B(const ScalarField& rho, const ScalarField& chi,
                                            const LinearizedOperator& steady);

struct Eigenpair {
  cplx lambda;
  ComplexField rho;
  ComplexField chi;
  double residual = 0.0;  // ||B v - lambda M v|| / ||M v||, discrete L2
};

enum class Verdict { Stable, Unstable, Marginal };
const char* verdict_name(Verdict v);

enum class SpectrumMode { Dense, Iterative };

struct SpectrumOptions {
  SpectrumMode mode = SpectrumMode::Iterative;
  double margin = 1e-6;        // verdict threshold on min Re
  double residual_tol = 1e-6;  // acceptance threshold per eigenpair
  int subspace = 0;            // Arnoldi size; 0 picks max(2k+10, 40)
};

struct SpectrumReport {
  std::vector<Eigenpair> pairs;       // k smallest non-gauge by Re, ascending
  std::vector<cplx> all_eigenvalues;  // dense path only, gauge included
  cplx gauge_eigenvalue{0.0, 0.0};    // the deflated mode's computed value
  double min_re_nongauge = 0.0;
  Verdict verdict = Verdict::Marginal;
  std::string method;  // "dense" | "iterative"
  double margin = 1e-6;
  double max_residual = 0.0;
  double steady_identity_residual = 0.0;
};

// Low-real-part spectrum with the gauge mode deflated. Dense mode reduces the
// generalized problem to standard form by the positive square root of M and
// takes every eigenvalue; iterative mode runs shift-invert Arnoldi around 0
// on the gauge-projected subspace and validates every Ritz pair by its true
// residual (retrying once with a doubled subspace, then falling back to dense
// when 2n <= dense_cap, else throwing SolverError).
SpectrumReport spectrum(const LinearizedOperator& op, int k, const SpectrumOptions& opts = {});
SpectrumReport spectrum(const LinearizedOperator& op, int k, SpectrumMode mode);

}  // namespace glc
