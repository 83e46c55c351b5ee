#include "glc/steady_state.hpp"

#include <cmath>
#include <string>

#include "glc/errors.hpp"
#include "glc/operators.hpp"

namespace glc {
namespace {

void append_scaled(std::vector<Triplet>& out, const SparseOperator& op, double scale,
                   int row_off, int col_off) {
  for (const auto& t : op.triplets())
    out.push_back({row_off + t.row, col_off + t.col, scale * t.value});
}

SparseOperator assemble_block_matrix(const LeadingOrderState& bg) {
  const Grid& g = bg.rho0.grid();
  const int n = g.num_cells();
  const double j2 = bg.norm_j * bg.norm_j;
  const double inv_eps2 = 1.0 / (bg.epsilon * bg.epsilon);

  const SparseOperator lap = laplacian_neumann(g);
  ScalarField rho0_sq(g);
  for (int k = 0; k < n; ++k) rho0_sq[k] = bg.rho0[k] * bg.rho0[k];
  const ScalarField gsq0 = grad_sq_cell(bg.chi0_tilde);

  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(n) * 40);

  // Density row: (-Lap + J^2 |grad chi0|^2 + (3 rho0^2 - 1)/eps^2) eta
  //              + 2 J^2 rho0 (grad chi0 . grad omega).
  append_scaled(trips, lap, -1.0, 0, 0);
  for (int k = 0; k < n; ++k)
    trips.push_back({k, k, j2 * gsq0[k] + inv_eps2 * (3.0 * rho0_sq[k] - 1.0)});
  ScalarField mult1(g);
  for (int k = 0; k < n; ++k) mult1[k] = 2.0 * j2 * bg.rho0[k];
  append_grad_dot_block(trips, g, mult1, bg.chi0_tilde, 0, n);

  // Phase row: -Div(rho0^2 grad omega) - Div(2 rho0 eta grad chi0)
  //            + 2 rho0 phi0 eta + rho0^2 varphi + multiplier. Arithmetic face
  //            means throughout so the split against assemble_rhs is exact.
  append_scaled(trips, div_weighted_grad_arith(g, rho0_sq), -1.0, n, n);
  ScalarField two_rho0(g);
  for (int k = 0; k < n; ++k) two_rho0[k] = 2.0 * bg.rho0[k];
  append_div_transport_block(trips, g, two_rho0, bg.chi0_tilde, -1.0, n, 0);
  for (int k = 0; k < n; ++k) {
    trips.push_back({n + k, k, 2.0 * bg.rho0[k] * bg.phi0_tilde[k]});
    trips.push_back({n + k, 2 * n + k, rho0_sq[k]});
    trips.push_back({n + k, 3 * n, 1.0});
  }

  // Potential row: (-sigma*Lap + rho0^2) varphi + 2 rho0 phi0 eta.
  append_scaled(trips, lap, -bg.sigma, 2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    trips.push_back({2 * n + k, 2 * n + k, rho0_sq[k]});
    trips.push_back({2 * n + k, k, 2.0 * bg.rho0[k] * bg.phi0_tilde[k]});
  }

  // Border row pins the omega mean (the only kernel direction).
  for (int k = 0; k < n; ++k) trips.push_back({3 * n, n + k, g.cell_area()});

  return SparseOperator(3 * n + 1, 3 * n + 1, std::move(trips));
}

}  // namespace

CorrectionTriple CorrectionTriple::zero(const Grid& g) {
  return {ScalarField(g), ScalarField(g), ScalarField(g)};
}

CorrectionTriple operator-(const CorrectionTriple& a, const CorrectionTriple& b) {
  return {a.rho1 - b.rho1, a.chi1 - b.chi1, a.phi1 - b.phi1};
}

double h_norm(const CorrectionTriple& v, double epsilon) {
  return norm_w12(v.rho1) + norm_linf(v.rho1) + epsilon * seminorm_d2_l2(v.rho1) +
         norm_w22(v.chi1) + norm_w22(v.phi1);
}

SteadyRhs assemble_rhs(const CorrectionTriple& v, const LeadingOrderState& bg) {
  const Grid& g = bg.rho0.grid();
  require_same_grid(g, v.rho1.grid(), "assemble_rhs");
  const int n = g.num_cells();
  const double j2 = bg.norm_j * bg.norm_j;
  const double inv_eps2 = 1.0 / (bg.epsilon * bg.epsilon);

  const ScalarField lap_rho0 = laplacian_neumann(g).apply(bg.rho0);
  const ScalarField gsq_omega = grad_sq_cell(v.chi1);
  ScalarField two_chi0_plus_omega = 2.0 * bg.chi0_tilde;
  two_chi0_plus_omega += v.chi1;
  const ScalarField cross = grad_dot_cell(two_chi0_plus_omega, v.chi1);

  // eta^2 and eta (2 rho0 + eta) show up in every quadratic term.
  ScalarField eta_sq(g), eta_2rho0(g);
  for (int k = 0; k < n; ++k) {
    eta_sq[k] = v.rho1[k] * v.rho1[k];
    eta_2rho0[k] = v.rho1[k] * (2.0 * bg.rho0[k] + v.rho1[k]);
  }
  const ScalarField div_eta_sq = div_weighted_grad_flux(eta_sq, bg.chi0_tilde);
  const ScalarField div_eta_omega = div_weighted_grad_flux(eta_2rho0, v.chi1);

  SteadyRhs rhs{ScalarField(g), ScalarField(g), ScalarField(g)};
  for (int k = 0; k < n; ++k) {
    rhs.f1[k] = lap_rho0[k] - j2 * gsq_omega[k] * bg.rho0[k] -
                j2 * cross[k] * v.rho1[k] -
                inv_eps2 * (3.0 * bg.rho0[k] + v.rho1[k]) * eta_sq[k];
    rhs.f3[k] = -eta_2rho0[k] * v.phi1[k] - eta_sq[k] * bg.phi0_tilde[k];
    rhs.f2[k] = rhs.f3[k] + div_eta_sq[k] + div_eta_omega[k];
  }
  return rhs;
}

SteadyOperator::SteadyOperator(const LeadingOrderState& bg) : bg_(&bg) {
  lu_.factor(assemble_block_matrix(bg));
}

CorrectionTriple SteadyOperator::apply(const CorrectionTriple& v) const {
  const Grid& g = bg_->rho0.grid();
  const int n = g.num_cells();
  const SteadyRhs rhs = assemble_rhs(v, *bg_);
  std::vector<double> b(3 * n + 1, 0.0);
  for (int k = 0; k < n; ++k) {
    b[k] = rhs.f1[k];
    b[n + k] = rhs.f2[k];
    b[2 * n + k] = rhs.f3[k];
  }
  const std::vector<double> x = lu_.solve(b);
  last_multiplier_ = x[3 * n];
  CorrectionTriple out = CorrectionTriple::zero(g);
  for (int k = 0; k < n; ++k) {
    out.rho1[k] = x[k];
    out.chi1[k] = x[n + k];
    out.phi1[k] = x[2 * n + k];
  }
  // The border row pins the mean up to solver precision; make it exact.
  const double m = out.chi1.mean();
  for (int k = 0; k < n; ++k) out.chi1[k] -= m;
  return out;
}

CorrectionTriple apply_A(const CorrectionTriple& v, const LeadingOrderState& bg) {
  return SteadyOperator(bg).apply(v);
}

const char* steady_status_name(SteadyStatus s) {
  return s == SteadyStatus::Converged ? "converged" : "no-contraction";
}

SteadyStateSolution solve_steady(const LeadingOrderState& bg, const CurrentProfile& j,
                                 const SteadyOptions& opts) {
  const Grid& g = bg.rho0.grid();
  require_same_grid(g, j.grid(), "solve_steady");
  const SteadyOperator op(bg);

  CorrectionTriple v = opts.v0 ? *opts.v0 : CorrectionTriple::zero(g);
  if (opts.v0) {
    const double m = v.chi1.mean();
    for (int k = 0; k < g.num_cells(); ++k) v.chi1[k] -= m;
  }

  SteadyStateSolution sol;
  sol.background = bg;
  bool converged = false;
  for (int it = 1; it <= opts.max_iter; ++it) {
    const CorrectionTriple next = op.apply(v);
    const double inc = h_norm(next - v, bg.epsilon);
    sol.increments.push_back(inc);
    if (sol.increments.size() >= 2) {
      const double prev = sol.increments[sol.increments.size() - 2];
      if (prev > 0.0) sol.contraction_ratios.push_back(inc / prev);
    }
    v = next;
    sol.iterations = it;
    if (inc <= opts.tol) {
      converged = true;
      break;
    }
    const int streak = opts.no_contraction_streak;
    if (static_cast<int>(sol.contraction_ratios.size()) >= streak) {
      bool all_expanding = true;
      for (int s = 0; s < streak; ++s) {
        if (sol.contraction_ratios[sol.contraction_ratios.size() - 1 - s] < 1.0)
          all_expanding = false;
      }
      if (all_expanding) {
        sol.status = SteadyStatus::NoContraction;
        break;
      }
    }
  }
  if (!converged && sol.status != SteadyStatus::NoContraction)
    throw SolverError("steady fixed point did not converge in " +
                      std::to_string(opts.max_iter) + " iterations (last increment " +
                      std::to_string(sol.increments.back()) + ")");

  sol.correction = v;
  sol.rho_s = bg.rho0 + v.rho1;
  sol.chi_s = ScalarField(g);
  sol.phi_s = ScalarField(g);
  for (int k = 0; k < g.num_cells(); ++k) {
    sol.chi_s[k] = bg.norm_j * (bg.chi0_tilde[k] + v.chi1[k]);
    sol.phi_s[k] = bg.norm_j * (bg.phi0_tilde[k] + v.phi1[k]);
  }
  sol.h_norm_final = h_norm(v, bg.epsilon);
  const ModelParams params(bg.epsilon, bg.sigma, j);
  sol.residuals = steady_residuals(sol.rho_s, sol.chi_s, sol.phi_s, j, params);
  return sol;
}

}  // namespace glc
