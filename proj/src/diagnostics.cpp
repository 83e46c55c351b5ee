#include "glc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "glc/operators.hpp"

namespace glc {
namespace {

// Cell-centered x-derivative, second order inside, one-sided at the walls.
ScalarField cell_dx(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField d(g);
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx();
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double v = 0.0;
      if (nx == 1) {
        v = 0.0;
      } else if (i == 0) {
        v = (f.at(1, j) - f.at(0, j)) / hx;
      } else if (i == nx - 1) {
        v = (f.at(nx - 1, j) - f.at(nx - 2, j)) / hx;
      } else {
        v = (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * hx);
      }
      d.at(i, j) = v;
    }
  }
  return d;
}

ScalarField cell_dy(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField d(g);
  const int nx = g.nx(), ny = g.ny();
  const double hy = g.hy();
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double v = 0.0;
      if (ny == 1) {
        v = 0.0;
      } else if (j == 0) {
        v = (f.at(i, 1) - f.at(i, 0)) / hy;
      } else if (j == ny - 1) {
        v = (f.at(i, ny - 1) - f.at(i, ny - 2)) / hy;
      } else {
        v = (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * hy);
      }
      d.at(i, j) = v;
    }
  }
  return d;
}

// Second difference along x with the stencil shifted inward at the walls.
ScalarField cell_dxx(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField d(g);
  const int nx = g.nx(), ny = g.ny();
  const double h2 = g.hx() * g.hx();
  if (nx < 3) return d;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int c = std::clamp(i, 1, nx - 2);
      d.at(i, j) = (f.at(c + 1, j) - 2.0 * f.at(c, j) + f.at(c - 1, j)) / h2;
    }
  }
  return d;
}

ScalarField cell_dyy(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField d(g);
  const int nx = g.nx(), ny = g.ny();
  const double h2 = g.hy() * g.hy();
  if (ny < 3) return d;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int c = std::clamp(j, 1, ny - 2);
      d.at(i, j) = (f.at(i, c + 1) - 2.0 * f.at(i, c) + f.at(i, c - 1)) / h2;
    }
  }
  return d;
}

}  // namespace

double norm_l2(const ScalarField& f) {
  double s = 0.0;
  for (int k = 0; k < f.size(); ++k) s += f[k] * f[k];
  return std::sqrt(s * f.grid().cell_area());
}

double norm_l4(const ScalarField& f) {
  double s = 0.0;
  for (int k = 0; k < f.size(); ++k) {
    const double v2 = f[k] * f[k];
    s += v2 * v2;
  }
  return std::pow(s * f.grid().cell_area(), 0.25);
}

double norm_linf(const ScalarField& f) { return f.max_abs(); }

double norm_l2(const ComplexField& u) {
  double s = 0.0;
  for (int k = 0; k < u.size(); ++k) s += std::norm(u[k]);
  return std::sqrt(s * u.grid().cell_area());
}

double seminorm_grad_l2(const ScalarField& f) {
  const VectorField grad = gradient(f);
  const Grid& g = f.grid();
  const int nx = g.nx(), ny = g.ny();
  // Face values squared, averaged per cell so the measure totals the area.
  double s = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double gx = 0.5 * (grad.x(i, j) * grad.x(i, j) + grad.x(i + 1, j) * grad.x(i + 1, j));
      const double gy = 0.5 * (grad.y(i, j) * grad.y(i, j) + grad.y(i, j + 1) * grad.y(i, j + 1));
      s += gx + gy;
    }
  }
  return std::sqrt(s * g.cell_area());
}

double seminorm_d2_l2(const ScalarField& f) {
  const ScalarField fxx = cell_dxx(f);
  const ScalarField fyy = cell_dyy(f);
  const ScalarField fxy = cell_dy(cell_dx(f));
  double s = 0.0;
  for (int k = 0; k < f.size(); ++k) {
    s += fxx[k] * fxx[k] + fyy[k] * fyy[k] + 2.0 * fxy[k] * fxy[k];
  }
  return std::sqrt(s * f.grid().cell_area());
}

double norm_w12(const ScalarField& f) {
  const double a = norm_l2(f), b = seminorm_grad_l2(f);
  return std::sqrt(a * a + b * b);
}

double norm_w22(const ScalarField& f) {
  const double a = norm_l2(f), b = seminorm_grad_l2(f), c = seminorm_d2_l2(f);
  return std::sqrt(a * a + b * b + c * c);
}

NormSuite norms(const ScalarField& f) {
  NormSuite n;
  n.l2 = norm_l2(f);
  n.l4 = norm_l4(f);
  n.linf = norm_linf(f);
  const double grad = seminorm_grad_l2(f);
  const double d2 = seminorm_d2_l2(f);
  n.w12 = std::sqrt(n.l2 * n.l2 + grad * grad);
  n.w22 = std::sqrt(n.w12 * n.w12 + d2 * d2);
  return n;
}

ScalingFit scaling_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("scaling_fit: size mismatch");
  if (x.size() < 3) throw std::invalid_argument("scaling_fit: need at least 3 samples");
  const int n = static_cast<int>(x.size());
  std::vector<double> lx(n), ly(n);
  for (int k = 0; k < n; ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) {
      throw std::invalid_argument("scaling_fit: samples must be positive");
    }
    lx[k] = std::log(x[k]);
    ly[k] = std::log(y[k]);
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int k = 0; k < n; ++k) {
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-300) throw std::invalid_argument("scaling_fit: degenerate abscissae");
  ScalingFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy * sxx - sx * sxy) / det;
  for (int k = 0; k < n; ++k) {
    fit.max_log_dev = std::max(fit.max_log_dev, std::abs(ly[k] - (fit.intercept + fit.slope * lx[k])));
  }
  return fit;
}

SteadyResiduals steady_residuals(const ScalarField& rho, const ScalarField& chi,
                                 const ScalarField& phi, const CurrentProfile& j,
                                 const ModelParams& params) {
  const Grid& g = rho.grid();
  require_same_grid(g, chi.grid(), "steady_residuals");
  require_same_grid(g, phi.grid(), "steady_residuals");
  const double inv_eps2 = 1.0 / (params.epsilon * params.epsilon);

  const SparseOperator lap = laplacian_neumann(g);
  const ScalarField lap_rho = lap.apply(rho);
  const ScalarField lap_phi = lap.apply(phi);
  const ScalarField gsq_chi = grad_sq_cell(chi);

  ScalarField rho2(g);
  for (int k = 0; k < rho.size(); ++k) rho2[k] = rho[k] * rho[k];
  // Arithmetic face means: the same flux form the solvers discretize with.
  const ScalarField supercurrent_div = div_weighted_grad_flux(rho2, chi);
  const ScalarField bfs = boundary_flux_source(g, j, params.sigma);

  SteadyResiduals r;
  ScalarField ra(g), rb(g), rc(g);
  for (int k = 0; k < g.num_cells(); ++k) {
    ra[k] = -lap_rho[k] + rho[k] * gsq_chi[k] - inv_eps2 * rho[k] * (1.0 - rho2[k]);
    rb[k] = supercurrent_div[k] - rho2[k] * phi[k];
    rc[k] = params.sigma * (lap_phi[k] + bfs[k]) - supercurrent_div[k];
  }
  r.density = norm_l2(ra);
  r.supercurrent = norm_l2(rb);
  r.potential = norm_l2(rc);
  const ScalarField weighted_phi = hadamard(rho2, phi);
  r.gauge_integral = weighted_phi.integral();
  const double phi_l2 = norm_l2(phi);
  r.gauge_rel = phi_l2 > 0.0 ? std::abs(r.gauge_integral) / (phi_l2 * g.area()) : 0.0;
  return r;
}

}  // namespace glc
