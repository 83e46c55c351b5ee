#pragma once

// Iterative solvers with pinned behavior: diagonally preconditioned CG for
// SPD systems, BiCGStab with a dense LU fallback (n <= 4096) for general
// ones, and a projection solve for the singular Neumann systems (constant
// kernel) with the gauge constant fixed afterwards. All reductions are
// sequential, so repeated runs are bit-identical. The residual stored in
// SolveReport is recomputed from scratch at exit, not the recurrence value.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "glc/fields.hpp"
#include "glc/operators.hpp"

namespace glc {

struct SolveReport {
  int iterations = 0;
  double rel_residual = 0.0;  // ||Ax - b|| / ||b||, recomputed at exit
  std::string method;
  bool converged = false;
  double wall_seconds = 0.0;
};

struct SolveOptions {
  double tol = 1e-10;  // relative residual target
  int max_iter = 0;    // 0: pick 40*sqrt(n) + 200
  const std::vector<double>* x0 = nullptr;
};

// Conjugate gradients with Jacobi preconditioning. b == 0 short-circuits to
// x == 0. Throws SolverError if the residual contract cannot be met.
SolveReport solve_spd(const SparseOperator& A, const std::vector<double>& b,
                      std::vector<double>& x, const SolveOptions& opts = {});

// BiCGStab with Jacobi preconditioning; on breakdown or non-convergence falls
// back to a dense LU factorization for n <= dense_cap.
struct GeneralSolveOptions : SolveOptions {
  int dense_cap = 4096;
};
SolveReport solve_general(const SparseOperator& A, const std::vector<double>& b,
                          std::vector<double>& x, const GeneralSolveOptions& opts = {});

// Gauge constant selection for singular Neumann solves.
struct GaugeConstraint {
  enum class Kind { ZeroMean, WeightedAffine } kind = Kind::ZeroMean;
  const ScalarField* weights = nullptr;  // > 0, WeightedAffine only
  double offset = 0.0;                   // target: integral(w * x) + offset == 0

  static GaugeConstraint zero_mean() { return {}; }
  static GaugeConstraint weighted(const ScalarField& w, double offset) {
    GaugeConstraint c;
    c.kind = Kind::WeightedAffine;
    c.weights = &w;
    c.offset = offset;
    return c;
  }
};

// Solves A x = b where A is a Neumann operator with constant kernel (Delta_h
// or Div(a grad .), negative semidefinite). Requires integral(b) == 0 within
// 1e-10 relative; iterates on the mean-free subspace and then shifts x by the
// constant the constraint demands. The output is invariant (to 1e-12) under
// adding a constant to the initial guess.
SolveReport solve_singular_neumann(const SparseOperator& A, const ScalarField& b,
                                   ScalarField& x, const GaugeConstraint& gauge,
                                   const SolveOptions& opts = {});

// Direct sparse LU for square systems that are solved many times with one
// matrix (the coupled correction blocks, shift-invert applications). Factor
// once, then each solve is two triangular sweeps. Deterministic ordering.
class SparseFactorization {
 public:
  SparseFactorization();
  ~SparseFactorization();
  SparseFactorization(SparseFactorization&&) noexcept;
  SparseFactorization& operator=(SparseFactorization&&) noexcept;
  SparseFactorization(const SparseFactorization&) = delete;
  SparseFactorization& operator=(const SparseFactorization&) = delete;

  // Throws SolverError if the factorization fails (structurally or
  // numerically singular matrix).
  void factor(const SparseOperator& a);
  bool ready() const;
  int rows() const;
  std::vector<double> solve(const std::vector<double>& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace glc
