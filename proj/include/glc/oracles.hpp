#pragma once

// Independent ground-truth generators: closed forms, dense direct solves, and
// manufactured solutions. Everything here is deliberately self-contained
// (grid/fields only, no reuse of the operator or solver modules) so the main
// numerical path is checked against genuinely separate arithmetic.

#include <functional>
#include <string>
#include <vector>

#include "glc/fields.hpp"

namespace glc {

// 1D potential problem -sigma*phi'' + phi = 0 on (0, lx) with current j
// entering at x = 0 and leaving at x = lx. Solved two ways: a dense
// three-point finite-volume system (Thomas algorithm) and the closed form
//   phi(x) = j * sinh((x - lx/2)/sqrt(sigma)) / (sqrt(sigma) * cosh(lx/(2 sqrt(sigma)))).
struct Oracle1DPhi {
  std::vector<double> x;        // cell centers
  std::vector<double> dense;    // direct solve
  std::vector<double> analytic; // closed form at centers
  double max_diff = 0.0;        // max |dense - analytic|
};
Oracle1DPhi oracle_1d_phi(double j, double sigma, double lx, int n);
double oracle_1d_phi_closed_form(double j, double sigma, double lx, double x);

// Zero-current spectrum of the linearized steady problem on a tensor grid:
// the gauge value 0, the density branch 2/eps^2 + mu over all discrete
// Neumann-Laplacian eigenvalues mu, and the phase branch 1/sigma + mu over
// mu != 0. Modes range over 0..m_max per direction. Sorted ascending.
std::vector<double> oracle_j0_spectrum(double epsilon, double sigma, const Grid& g, int m_max);
// Discrete Neumann-Laplacian eigenvalue for mode (m, l).
double oracle_neumann_eigenvalue(const Grid& g, int m, int l);

// Manufactured solutions with Neumann-compatible cosine profiles. `exact`
// and `forcing` are pointwise functions; `weight` is the diffusion
// coefficient for the weighted case (empty operator means plain Laplacian).
struct ManufacturedCase {
  std::string name;
  std::string op;          // "laplacian" | "weighted_div_grad" | "helmholtz"
  double sigma = 1.0;      // helmholtz only
  std::function<double(double, double)> exact;
  std::function<double(double, double)> forcing;
  std::function<double(double, double)> weight; // null unless weighted
  std::string derivation;
};
ManufacturedCase oracle_manufactured(const std::string& case_id);
std::vector<std::string> manufactured_case_ids();

// Dense Gaussian elimination with partial pivoting; a is n*n row-major.
// Used to cross-check the iterative solvers on small systems.
std::vector<double> oracle_dense_solve(std::vector<double> a, std::vector<double> b);

// Catalogue entry: what the oracle pins down, the config it corresponds to,
// and the expected numbers with tolerances.
struct OracleExpectation {
  std::string label;
  double value = 0.0;
  double tolerance = 0.0;
};
struct OracleCase {
  std::string name;
  std::string config;
  std::vector<OracleExpectation> expected;
  std::string derivation;
};
std::vector<OracleCase> oracle_catalogue();

}  // namespace glc
