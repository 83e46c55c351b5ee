#pragma once

// Finite-volume operators on the cell-centered grid. Gradients live on faces
// (two-point differences centered at the face, zero on the domain boundary),
// divergences difference face fluxes back to cells, so divergence(gradient(f))
// reproduces the assembled five-point Neumann Laplacian by construction.
// Assembled matrices use the continuum sign: Delta_h is symmetric negative
// semidefinite with zero row sums; systems are written as (-sigma*Delta_h + ...).

#include <iosfwd>
#include <vector>

#include "glc/fields.hpp"
#include "glc/grid.hpp"
#include "glc/profile.hpp"

namespace glc {

struct Triplet {
  int row;
  int col;
  double value;
};

// Compressed sparse rows, assembled from triplets with a deterministic
// (row, col) sort and duplicate summation in that order.
class SparseOperator {
 public:
  SparseOperator() = default;
  SparseOperator(int rows, int cols, std::vector<Triplet> triplets);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(val_.size()); }

  void apply(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> apply(const std::vector<double>& x) const;
  ScalarField apply(const ScalarField& x) const;

  std::vector<double> diagonal() const;
  // Entries as "row col value" lines, sorted row-major (CSR order).
  void write_triplets(std::ostream& os) const;
  std::vector<Triplet> triplets() const;

  const std::vector<int>& row_ptr() const { return rowp_; }
  const std::vector<int>& col_idx() const { return col_; }
  const std::vector<double>& values() const { return val_; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<int> rowp_, col_;
  std::vector<double> val_;
};

// Five-point Neumann Laplacian Delta_h (zero-flux closure). Row sums vanish;
// constants map to zero.
SparseOperator laplacian_neumann(const Grid& g);

// Div(a grad .) with harmonic-mean face weights of the positive cell field a.
// Reduces entrywise to laplacian_neumann when a == 1. Throws on a <= 0.
SparseOperator weighted_div_grad(const Grid& g, const ScalarField& a);

// Staggered face gradient of a cell field; boundary faces carry zero.
VectorField gradient(const ScalarField& f);
// Cell divergence of a face field, consuming boundary-face values as the
// normal-flux closure (gradient() leaves them zero).
ScalarField divergence(const VectorField& v);

// Cell average of |grad f|^2: per axis, the arithmetic mean of the squared
// gradients on the two cell faces, summed over axes.
ScalarField grad_sq_cell(const ScalarField& f);
// Cell average of grad a . grad b with the same face averaging.
ScalarField grad_dot_cell(const ScalarField& a, const ScalarField& b);

// Flux-form Div(w_face * grad f) where the face weight is the arithmetic mean
// of the adjacent cell values of w (zero boundary flux). Used for the
// transport-like terms where the harmonic mean has no SPD role.
ScalarField div_weighted_grad_flux(const ScalarField& w, const ScalarField& f);

// Matrix form of div_weighted_grad_flux(a, .): same arithmetic face means,
// same sign convention as laplacian_neumann (negative semidefinite for a > 0,
// zero row sums). Because the face weight is linear in a, products like
// Div((a+b) grad f) split exactly into the assembled blocks; the coupled
// steady/stability systems rely on that to make their residuals telescope.
SparseOperator div_weighted_grad_arith(const Grid& g, const ScalarField& a);

// Block-assembly appenders for coupled systems, writing triplets at the given
// row/column offsets.
//
// Cell operator w |-> mult * (grad psi . grad w) with the face averaging of
// grad_dot_cell (psi frozen, w the unknown).
void append_grad_dot_block(std::vector<Triplet>& out, const Grid& g,
                           const ScalarField& mult, const ScalarField& psi,
                           int row_off, int col_off);
// Transport operator w |-> sign * Div(facemean(coef * w) * grad psi): the
// unknown sits inside the flux, faces average coef*w arithmetically, matching
// div_weighted_grad_flux(hadamard(coef, w), psi).
void append_div_transport_block(std::vector<Triplet>& out, const Grid& g,
                                const ScalarField& coef, const ScalarField& psi,
                                double sign, int row_off, int col_off);

// Per-cell source carrying the inhomogeneous Neumann datum in flux form:
// each contact face contributes -J * face_length / (sigma * cell_area) to its
// adjacent cell, so assembled systems read (-sigma*Delta_h) phi = interior
// source + sigma * boundary_flux_source. Total source * cell_area equals
// -(net boundary flux)/sigma, zero for a balanced profile.
ScalarField boundary_flux_source(const Grid& g, const CurrentProfile& j, double sigma);

// Div of the supercurrent Im(conj(u) grad u): face fluxes from centered
// differences and arithmetic face averages of u, zero on the boundary
// (insulated closure), then the standard divergence. Integrates to zero
// exactly by telescoping.
ScalarField supercurrent_divergence(const ComplexField& u);
// The face fluxes themselves (x/y face layout as VectorField).
VectorField supercurrent_flux(const ComplexField& u);

}  // namespace glc
