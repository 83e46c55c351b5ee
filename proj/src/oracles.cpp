#include "glc/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace glc {
namespace {

// Tridiagonal solve, diagonals (lower, diag, upper) of length n.
std::vector<double> thomas(std::vector<double> lo, std::vector<double> di,
                           std::vector<double> up, std::vector<double> rhs) {
  const int n = static_cast<int>(di.size());
  for (int i = 1; i < n; ++i) {
    const double m = lo[i] / di[i - 1];
    di[i] -= m * up[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / di[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - up[i] * x[i + 1]) / di[i];
  return x;
}

}  // namespace

double oracle_1d_phi_closed_form(double j, double sigma, double lx, double x) {
  const double rs = std::sqrt(sigma);
  return j * std::sinh((x - 0.5 * lx) / rs) / (rs * std::cosh(lx / (2.0 * rs)));
}

Oracle1DPhi oracle_1d_phi(double j, double sigma, double lx, int n) {
  if (n < 2) throw std::invalid_argument("oracle_1d_phi: n must be >= 2");
  if (!(sigma > 0.0) || !(lx > 0.0)) {
    throw std::invalid_argument("oracle_1d_phi: sigma and lx must be positive");
  }
  const double h = lx / n;
  // Finite volume on cell i: sigma*(flux_left - flux_right) + h*phi_i = 0,
  // interior flux (phi_{i+1} - phi_i)/h, wall fluxes from -sigma dphi/dnu = J
  // with J = +j at x = 0 (inflow) and J = -j at x = lx (outflow).
  std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n, 0.0);
  const double w = sigma / h;
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      lo[i] -= w;
      di[i] += w;
    }
    if (i < n - 1) {
      up[i] -= w;
      di[i] += w;
    }
    di[i] += h;
  }
  // Cell balance: -sigma*phi'(right) + sigma*phi'(left) + h*phi_i = 0 with
  // sigma*phi'(0) = j and sigma*phi'(lx) = j from the flux conditions, so
  //   (w + h)*phi_0 - w*phi_1 = -j and (w + h)*phi_{n-1} - w*phi_{n-2} = +j.
  rhs[0] = -j;
  rhs[n - 1] = j;
  Oracle1DPhi out;
  out.dense = thomas(lo, di, up, rhs);
  out.x.resize(n);
  out.analytic.resize(n);
  for (int i = 0; i < n; ++i) {
    out.x[i] = (i + 0.5) * h;
    out.analytic[i] = oracle_1d_phi_closed_form(j, sigma, lx, out.x[i]);
    out.max_diff = std::max(out.max_diff, std::abs(out.dense[i] - out.analytic[i]));
  }
  return out;
}

double oracle_neumann_eigenvalue(const Grid& g, int m, int l) {
  const double pi = std::numbers::pi;
  const double mx = (2.0 / (g.hx() * g.hx())) * (1.0 - std::cos(m * pi / g.nx()));
  const double my = (2.0 / (g.hy() * g.hy())) * (1.0 - std::cos(l * pi / g.ny()));
  return mx + my;
}

std::vector<double> oracle_j0_spectrum(double epsilon, double sigma, const Grid& g, int m_max) {
  if (m_max < 0) throw std::invalid_argument("oracle_j0_spectrum: m_max must be >= 0");
  const int mx = std::min(m_max, g.nx() - 1);
  const int my = std::min(m_max, g.ny() - 1);
  std::vector<double> vals;
  vals.push_back(0.0);  // gauge mode, exactly once
  for (int m = 0; m <= mx; ++m) {
    for (int l = 0; l <= my; ++l) {
      const double mu = oracle_neumann_eigenvalue(g, m, l);
      vals.push_back(2.0 / (epsilon * epsilon) + mu);
      if (m != 0 || l != 0) vals.push_back(1.0 / sigma + mu);
    }
  }
  std::sort(vals.begin(), vals.end());
  return vals;
}

ManufacturedCase oracle_manufactured(const std::string& case_id) {
  const double pi = std::numbers::pi;
  ManufacturedCase c;
  c.name = case_id;
  if (case_id == "cos-x") {
    c.op = "laplacian";
    c.derivation = "u = cos(pi x/lx); Delta u = -(pi/lx)^2 u; grad u . nu = 0 on all walls";
    c.exact = [pi](double x, double) { return std::cos(pi * x); };
    c.forcing = [pi](double x, double) { return -pi * pi * std::cos(pi * x); };
    // Lengths are folded in by the caller scaling x to x/lx; the catalogue
    // fixes lx = 1 so the lambdas stay closed-form.
  } else if (case_id == "weighted") {
    c.op = "weighted_div_grad";
    c.derivation =
        "a = 1+x, chi = cos(pi x); d/dx(a chi') = -pi sin(pi x) - (1+x) pi^2 cos(pi x); "
        "flux a chi' vanishes at x = 0, 1";
    c.exact = [pi](double x, double) { return std::cos(pi * x); };
    c.weight = [](double x, double) { return 1.0 + x; };
    c.forcing = [pi](double x, double) {
      return -pi * std::sin(pi * x) - (1.0 + x) * pi * pi * std::cos(pi * x);
    };
  } else if (case_id == "helmholtz") {
    c.op = "helmholtz";
    c.sigma = 1.0;
    c.derivation =
        "phi = cos(pi x) cos(pi y); (-sigma Delta + 1) phi = (2 sigma pi^2 + 1) phi";
    c.exact = [pi](double x, double y) { return std::cos(pi * x) * std::cos(pi * y); };
    c.forcing = [pi](double x, double y) {
      return (2.0 * pi * pi + 1.0) * std::cos(pi * x) * std::cos(pi * y);
    };
  } else {
    throw std::invalid_argument("oracle_manufactured: unknown case " + case_id);
  }
  return c;
}

std::vector<std::string> manufactured_case_ids() { return {"cos-x", "weighted", "helmholtz"}; }

std::vector<double> oracle_dense_solve(std::vector<double> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  if (static_cast<int>(a.size()) != n * n) {
    throw std::invalid_argument("oracle_dense_solve: matrix/vector size mismatch");
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    }
    if (std::abs(a[piv * n + col]) < 1e-300) {
      throw std::invalid_argument("oracle_dense_solve: singular matrix");
    }
    if (piv != col) {
      for (int k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
      std::swap(b[col], b[piv]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double m = a[r * n + col] / a[col * n + col];
      if (m == 0.0) continue;
      for (int k = col; k < n; ++k) a[r * n + k] -= m * a[col * n + k];
      b[r] -= m * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= a[r * n + k] * x[k];
    x[r] = s / a[r * n + r];
  }
  return x;
}

std::vector<OracleCase> oracle_catalogue() {
  std::vector<OracleCase> cases;
  {
    OracleCase c;
    c.name = "1d-potential-sinh";
    c.config = "sigma = 1, lx = 4, j = 1, n = 4096";
    c.derivation =
        "closed form j sinh((x-lx/2)/sqrt(sigma)) / (sqrt(sigma) cosh(lx/(2 sqrt(sigma)))) "
        "vs dense three-point solve";
    const Oracle1DPhi o = oracle_1d_phi(1.0, 1.0, 4.0, 4096);
    c.expected.push_back({"max |dense - analytic|", o.max_diff, 1e-6});
    c.expected.push_back({"phi(lx/2) (odd symmetry)", 0.0, 1e-12});
    cases.push_back(c);
  }
  {
    OracleCase c;
    c.name = "j0-spectrum-unit-square";
    c.config = "epsilon = 0.5, sigma = 1, 64x64 unit square";
    c.derivation = "density branch 2/eps^2 + mu, phase branch 1/sigma + mu (mu != 0), gauge 0";
    const Grid g(64, 64, 1.0, 1.0, {});
    const std::vector<double> vals = oracle_j0_spectrum(0.5, 1.0, g, 4);
    c.expected.push_back({"gauge eigenvalue", vals.front(), 0.0});
    c.expected.push_back({"min non-gauge", vals[1], 1e-12});
    c.expected.push_back({"phase-branch leader", 1.0 + oracle_neumann_eigenvalue(g, 1, 0), 1e-12});
    cases.push_back(c);
  }
  for (const std::string& id : manufactured_case_ids()) {
    OracleCase c;
    const ManufacturedCase m = oracle_manufactured(id);
    c.name = "manufactured-" + id;
    c.config = "unit square, operator " + m.op;
    c.derivation = m.derivation;
    c.expected.push_back({"solution error convergence order", 2.0, 0.1});
    cases.push_back(c);
  }
  return cases;
}

}  // namespace glc
