#pragma once

// Discrete norms, log-log scaling fits, and the steady-system residuals used
// to cross-check solutions. Gradient pieces use the staggered face values;
// second differences use centered stencils inside and shifted (one-sided)
// stencils at the boundary.

#include <vector>

#include "glc/fields.hpp"
#include "glc/profile.hpp"

namespace glc {

double norm_l2(const ScalarField& f);
double norm_l4(const ScalarField& f);
double norm_linf(const ScalarField& f);
double norm_l2(const ComplexField& u);
// L2 of the staggered face gradient.
double seminorm_grad_l2(const ScalarField& f);
// Frobenius L2 of the second differences (fxx, fyy, and fxy counted twice).
double seminorm_d2_l2(const ScalarField& f);
double norm_w12(const ScalarField& f);
double norm_w22(const ScalarField& f);

struct NormSuite {
  double l2 = 0.0;
  double l4 = 0.0;
  double linf = 0.0;
  double w12 = 0.0;
  double w22 = 0.0;
};
NormSuite norms(const ScalarField& f);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;   // in log space
  double max_log_dev = 0.0; // max |log y - fit|
};
// Least-squares fit of log(y) vs log(x). Requires >= 3 strictly positive
// samples.
ScalingFit scaling_fit(const std::vector<double>& x, const std::vector<double>& y);

// Residuals of the steady system in polar form, assembled independently of
// any solver path: the density equation, the supercurrent equation, the
// potential equation (with the inhomogeneous flux folded in), plus the
// integral gauge identity integral(rho^2 phi) == 0. rho must be positive.
struct SteadyResiduals {
  double density = 0.0;        // L2 of -Delta rho + rho|grad chi|^2 - rho(1-rho^2)/eps^2
  double supercurrent = 0.0;   // L2 of Div(rho^2 grad chi) - rho^2 phi
  double potential = 0.0;      // L2 of sigma*Delta phi + sigma*bfs - Div(rho^2 grad chi)
  double gauge_integral = 0.0; // integral(rho^2 phi)
  double gauge_rel = 0.0;      // |gauge_integral| / (||phi||_2 * area), 0 if phi == 0
};
SteadyResiduals steady_residuals(const ScalarField& rho, const ScalarField& chi,
                                 const ScalarField& phi, const CurrentProfile& j,
                                 const ModelParams& params);

}  // namespace glc
