#include "glc/operators.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "glc/errors.hpp"

namespace glc {

SparseOperator::SparseOperator(int rows, int cols, std::vector<Triplet> ts)
    : rows_(rows), cols_(cols) {
  std::stable_sort(ts.begin(), ts.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  rowp_.assign(rows_ + 1, 0);
  col_.reserve(ts.size());
  val_.reserve(ts.size());
  for (size_t k = 0; k < ts.size();) {
    size_t e = k;
    double sum = 0.0;
    while (e < ts.size() && ts[e].row == ts[k].row && ts[e].col == ts[k].col)
      sum += ts[e++].value;
    col_.push_back(ts[k].col);
    val_.push_back(sum);
    ++rowp_[ts[k].row + 1];
    k = e;
  }
  for (int r = 0; r < rows_; ++r) rowp_[r + 1] += rowp_[r];
}

void SparseOperator::apply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(rows_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = rowp_[r]; k < rowp_[r + 1]; ++k) s += val_[k] * x[col_[k]];
    y[r] = s;
  }
}

std::vector<double> SparseOperator::apply(const std::vector<double>& x) const {
  std::vector<double> y;
  apply(x, y);
  return y;
}

ScalarField SparseOperator::apply(const ScalarField& x) const {
  ScalarField y(x.grid());
  apply(x.data(), y.data());
  return y;
}

std::vector<double> SparseOperator::diagonal() const {
  std::vector<double> d(rows_, 0.0);
  for (int r = 0; r < rows_; ++r)
    for (int k = rowp_[r]; k < rowp_[r + 1]; ++k)
      if (col_[k] == r) d[r] = val_[k];
  return d;
}

void SparseOperator::write_triplets(std::ostream& os) const {
  os.precision(17);
  for (int r = 0; r < rows_; ++r)
    for (int k = rowp_[r]; k < rowp_[r + 1]; ++k)
      os << r << ' ' << col_[k] << ' ' << val_[k] << '\n';
}

std::vector<Triplet> SparseOperator::triplets() const {
  std::vector<Triplet> ts;
  ts.reserve(val_.size());
  for (int r = 0; r < rows_; ++r)
    for (int k = rowp_[r]; k < rowp_[r + 1]; ++k)
      ts.push_back({r, col_[k], val_[k]});
  return ts;
}

SparseOperator laplacian_neumann(const Grid& g) {
  ScalarField one(g, 1.0);
  return weighted_div_grad(g, one);
}

SparseOperator weighted_div_grad(const Grid& g, const ScalarField& a) {
  require_same_grid(g, a.grid(), "weighted_div_grad");
  for (int k = 0; k < a.size(); ++k)
    if (!(a[k] > 0.0))
      throw std::invalid_argument("weighted_div_grad: nonpositive weight at cell " +
                                  std::to_string(k));
  const int nx = g.nx(), ny = g.ny();
  const double cx = 1.0 / (g.hx() * g.hx());
  const double cy = 1.0 / (g.hy() * g.hy());
  std::vector<Triplet> ts;
  ts.reserve(static_cast<size_t>(5) * g.num_cells());
  auto harmonic = [](double p, double q) { return 2.0 * p * q / (p + q); };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int c = g.idx(i, j);
      // Interior faces only; boundary faces carry zero flux.
      if (i + 1 < nx) {
        const int e = g.idx(i + 1, j);
        const double w = harmonic(a[c], a[e]) * cx;
        ts.push_back({c, c, -w});
        ts.push_back({c, e, w});
        ts.push_back({e, e, -w});
        ts.push_back({e, c, w});
      }
      if (j + 1 < ny) {
        const int n = g.idx(i, j + 1);
        const double w = harmonic(a[c], a[n]) * cy;
        ts.push_back({c, c, -w});
        ts.push_back({c, n, w});
        ts.push_back({n, n, -w});
        ts.push_back({n, c, w});
      }
    }
  return SparseOperator(g.num_cells(), g.num_cells(), std::move(ts));
}

VectorField gradient(const ScalarField& f) {
  const Grid& g = f.grid();
  VectorField v(g);
  const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i)
      v.x(i, j) = (f.at(i, j) - f.at(i - 1, j)) * ihx;
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      v.y(i, j) = (f.at(i, j) - f.at(i, j - 1)) * ihy;
  return v;
}

ScalarField divergence(const VectorField& v) {
  const Grid& g = v.grid();
  ScalarField d(g);
  const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      d.at(i, j) = (v.x(i + 1, j) - v.x(i, j)) * ihx + (v.y(i, j + 1) - v.y(i, j)) * ihy;
  return d;
}

ScalarField grad_sq_cell(const ScalarField& f) {
  return grad_dot_cell(f, f);
}

ScalarField grad_dot_cell(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "grad_dot_cell");
  const Grid& g = a.grid();
  const VectorField ga = gradient(a);
  const VectorField gb = gradient(b);
  ScalarField r(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      r.at(i, j) = 0.5 * (ga.x(i, j) * gb.x(i, j) + ga.x(i + 1, j) * gb.x(i + 1, j)) +
                   0.5 * (ga.y(i, j) * gb.y(i, j) + ga.y(i, j + 1) * gb.y(i, j + 1));
  return r;
}

ScalarField div_weighted_grad_flux(const ScalarField& w, const ScalarField& f) {
  require_same_grid(w.grid(), f.grid(), "div_weighted_grad_flux");
  const Grid& g = f.grid();
  VectorField v = gradient(f);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i)
      v.x(i, j) *= 0.5 * (w.at(i - 1, j) + w.at(i, j));
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      v.y(i, j) *= 0.5 * (w.at(i, j - 1) + w.at(i, j));
  return divergence(v);
}

SparseOperator div_weighted_grad_arith(const Grid& g, const ScalarField& a) {
  require_same_grid(g, a.grid(), "div_weighted_grad_arith");
  const int nx = g.nx(), ny = g.ny();
  const double cx = 1.0 / (g.hx() * g.hx());
  const double cy = 1.0 / (g.hy() * g.hy());
  std::vector<Triplet> ts;
  ts.reserve(static_cast<size_t>(5) * g.num_cells());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int c = g.idx(i, j);
      if (i + 1 < nx) {
        const int e = g.idx(i + 1, j);
        const double w = 0.5 * (a[c] + a[e]) * cx;
        ts.push_back({c, c, -w});
        ts.push_back({c, e, w});
        ts.push_back({e, e, -w});
        ts.push_back({e, c, w});
      }
      if (j + 1 < ny) {
        const int n = g.idx(i, j + 1);
        const double w = 0.5 * (a[c] + a[n]) * cy;
        ts.push_back({c, c, -w});
        ts.push_back({c, n, w});
        ts.push_back({n, n, -w});
        ts.push_back({n, c, w});
      }
    }
  return SparseOperator(g.num_cells(), g.num_cells(), std::move(ts));
}

void append_grad_dot_block(std::vector<Triplet>& out, const Grid& g,
                           const ScalarField& mult, const ScalarField& psi,
                           int row_off, int col_off) {
  require_same_grid(g, mult.grid(), "append_grad_dot_block");
  require_same_grid(g, psi.grid(), "append_grad_dot_block");
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();
  const VectorField gp = gradient(psi);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int c = g.idx(i, j);
      const double m = mult[c];
      if (m == 0.0) continue;
      // Each of the four faces contributes half its grad(psi) value times the
      // two-point difference of the unknown across that face.
      if (i >= 1) {
        const double w = m * 0.5 * gp.x(i, j) / hx;
        out.push_back({row_off + c, col_off + g.idx(i, j), w});
        out.push_back({row_off + c, col_off + g.idx(i - 1, j), -w});
      }
      if (i + 1 <= nx - 1) {
        const double w = m * 0.5 * gp.x(i + 1, j) / hx;
        out.push_back({row_off + c, col_off + g.idx(i + 1, j), w});
        out.push_back({row_off + c, col_off + g.idx(i, j), -w});
      }
      if (j >= 1) {
        const double w = m * 0.5 * gp.y(i, j) / hy;
        out.push_back({row_off + c, col_off + g.idx(i, j), w});
        out.push_back({row_off + c, col_off + g.idx(i, j - 1), -w});
      }
      if (j + 1 <= ny - 1) {
        const double w = m * 0.5 * gp.y(i, j + 1) / hy;
        out.push_back({row_off + c, col_off + g.idx(i, j + 1), w});
        out.push_back({row_off + c, col_off + g.idx(i, j), -w});
      }
    }
}

void append_div_transport_block(std::vector<Triplet>& out, const Grid& g,
                                const ScalarField& coef, const ScalarField& psi,
                                double sign, int row_off, int col_off) {
  require_same_grid(g, coef.grid(), "append_div_transport_block");
  require_same_grid(g, psi.grid(), "append_div_transport_block");
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();
  const VectorField gp = gradient(psi);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i <= nx - 1; ++i) {
      const double gv = gp.x(i, j);
      if (gv == 0.0) continue;
      const int cl = g.idx(i - 1, j), cr = g.idx(i, j);
      const double wl = 0.5 * coef[cl] * gv, wr = 0.5 * coef[cr] * gv;
      // Face flux F = wl*w[cl] + wr*w[cr] leaves cl (+F/hx) and enters cr.
      out.push_back({row_off + cr, col_off + cl, -sign * wl / hx});
      out.push_back({row_off + cr, col_off + cr, -sign * wr / hx});
      out.push_back({row_off + cl, col_off + cl, sign * wl / hx});
      out.push_back({row_off + cl, col_off + cr, sign * wr / hx});
    }
  for (int j = 1; j <= ny - 1; ++j)
    for (int i = 0; i < nx; ++i) {
      const double gv = gp.y(i, j);
      if (gv == 0.0) continue;
      const int cb = g.idx(i, j - 1), ct = g.idx(i, j);
      const double wb = 0.5 * coef[cb] * gv, wt = 0.5 * coef[ct] * gv;
      out.push_back({row_off + ct, col_off + cb, -sign * wb / hy});
      out.push_back({row_off + ct, col_off + ct, -sign * wt / hy});
      out.push_back({row_off + cb, col_off + cb, sign * wb / hy});
      out.push_back({row_off + cb, col_off + ct, sign * wt / hy});
    }
}

ScalarField boundary_flux_source(const Grid& g, const CurrentProfile& j, double sigma) {
  require_same_grid(g, j.grid(), "boundary_flux_source");
  if (!(sigma > 0.0)) throw std::invalid_argument("boundary_flux_source: sigma must be positive");
  ScalarField s(g);
  const double inv = 1.0 / (sigma * g.cell_area());
  const auto& faces = g.boundary_faces();
  for (size_t f = 0; f < faces.size(); ++f)
    s[faces[f].cell] -= j[static_cast<int>(f)] * faces[f].length * inv;
  return s;
}

VectorField supercurrent_flux(const ComplexField& u) {
  const Grid& g = u.grid();
  VectorField v(g);
  const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
  auto face = [](cplx ul, cplx ur, double ih) {
    return std::imag(0.5 * (std::conj(ul) + std::conj(ur)) * (ur - ul) * ih);
  };
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i)
      v.x(i, j) = face(u[g.idx(i - 1, j)], u[g.idx(i, j)], ihx);
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      v.y(i, j) = face(u[g.idx(i, j - 1)], u[g.idx(i, j)], ihy);
  return v;
}

ScalarField supercurrent_divergence(const ComplexField& u) {
  return divergence(supercurrent_flux(u));
}

}  // namespace glc
