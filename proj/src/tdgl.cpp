#include "glc/tdgl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "glc/diagnostics.hpp"
#include "glc/errors.hpp"
#include "glc/operators.hpp"
#include "glc/solvers.hpp"

namespace glc {
namespace {

bool all_finite(const ComplexField& u) {
  for (int k = 0; k < u.size(); ++k)
    if (!std::isfinite(u[k].real()) || !std::isfinite(u[k].imag())) return false;
  return true;
}

double gauge_relative(const ComplexField& u, const ScalarField& phi) {
  double mean = 0.0;
  for (int k = 0; k < u.size(); ++k) mean += std::norm(u[k]) * phi[k];
  mean /= u.size();
  const double phi_l2 = norm_l2(phi);
  return phi_l2 > 0.0 ? std::abs(mean) / phi_l2 : 0.0;
}

// One step given the potential of the current state (kept separate so evolve
// can reuse the refreshed potential instead of re-solving it).
EvolutionState advance(const EvolutionState& s, double dt, const CurrentProfile& j,
                       const ModelParams& params) {
  const Grid& g = s.u.grid();
  const int n = g.num_cells();
  const double inv_eps2 = 1.0 / (params.epsilon * params.epsilon);

  std::vector<double> bre(n), bim(n);
  for (int k = 0; k < n; ++k) {
    const cplx uk = s.u[k];
    const cplx rhs = uk + dt * (cplx(0.0, -1.0) * s.phi[k] * uk +
                                inv_eps2 * uk * (1.0 - std::norm(uk)));
    bre[k] = rhs.real();
    bim[k] = rhs.imag();
  }

  std::vector<Triplet> ts = laplacian_neumann(g).triplets();
  for (auto& t : ts) t.value *= -dt;
  for (int k = 0; k < n; ++k) ts.push_back({k, k, 1.0});
  const SparseOperator a(n, n, std::move(ts));

  std::vector<double> xre(n), xim(n);
  for (int k = 0; k < n; ++k) {
    xre[k] = s.u[k].real();
    xim[k] = s.u[k].imag();
  }
  SolveOptions opts;
  opts.tol = 1e-12;
  opts.x0 = &xre;
  std::vector<double> ure(n);
  solve_spd(a, bre, ure, opts);
  opts.x0 = &xim;
  std::vector<double> uim(n);
  solve_spd(a, bim, uim, opts);

  EvolutionState out;
  out.u = ComplexField(g);
  for (int k = 0; k < n; ++k) out.u[k] = cplx(ure[k], uim[k]);
  if (!all_finite(out.u))
    throw SolverError("tdgl step produced a non-finite field at t = " +
                      std::to_string(s.t + dt) + " (blow-up)");
  out.phi = potential_solve(out.u, j, params.sigma);
  out.t = s.t + dt;
  out.step_count = s.step_count + 1;
  return out;
}

}  // namespace

ScalarField potential_solve(const ComplexField& u, const CurrentProfile& j, double sigma) {
  const Grid& g = u.grid();
  require_same_grid(g, j.grid(), "potential_solve");
  if (!(sigma > 0.0)) throw std::invalid_argument("potential_solve: sigma must be positive");

  const ScalarField abs2 = u.abs2();
  const double weight = abs2.integral();
  if (weight < 1e-12 * g.area())
    throw SolverError("potential_solve: integral of |u|^2 is degenerate (" +
                      std::to_string(weight) + "), gauge normalization undefined");

  const ScalarField div_sc = supercurrent_divergence(u);
  const ScalarField bfs = boundary_flux_source(g, j, sigma);
  ScalarField rhs(g);
  for (int k = 0; k < g.num_cells(); ++k) rhs[k] = div_sc[k] - sigma * bfs[k];

  std::vector<Triplet> ts = laplacian_neumann(g).triplets();
  for (auto& t : ts) t.value *= sigma;
  const SparseOperator a(g.num_cells(), g.num_cells(), std::move(ts));

  ScalarField phi(g);
  SolveOptions opts;
  opts.tol = 1e-12;
  solve_singular_neumann(a, rhs, phi, GaugeConstraint::zero_mean(), opts);

  // Fix the additive constant by the |u|^2-weighted gauge instead of the
  // plain mean (the weight may touch zero, so the solver's strict weighted
  // path does not apply).
  const double shift = -hadamard(abs2, phi).integral() / weight;
  for (int k = 0; k < g.num_cells(); ++k) phi[k] += shift;
  return phi;
}

EvolutionState step(const EvolutionState& state, double dt, const CurrentProfile& j,
                    const ModelParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  require_same_grid(state.u.grid(), j.grid(), "step");
  EvolutionState s = state;
  s.phi = potential_solve(state.u, j, params.sigma);
  return advance(s, dt, j, params);
}

Trajectory evolve(const ComplexField& u0, double T, double dt, const CurrentProfile& j,
                  const ModelParams& params, int sample_every, const EvolveOptions& opts) {
  const Grid& g = u0.grid();
  require_same_grid(g, j.grid(), "evolve");
  if (!(T > 0.0)) throw std::invalid_argument("evolve: T must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
  if (sample_every < 1) throw std::invalid_argument("evolve: sample_every must be >= 1");
  const double guard = opts.guard_factor * params.epsilon * params.epsilon;
  if (dt > guard * (1.0 + 1e-12))
    throw ConfigError("evolve: dt = " + std::to_string(dt) + " violates the stability guard " +
                      std::to_string(guard) + " (= guard_factor * epsilon^2)");

  const ComplexField& ref = opts.reference ? *opts.reference : u0;
  require_same_grid(g, ref.grid(), "evolve reference");

  Trajectory traj;
  EvolutionState state;
  state.u = u0;
  state.phi = potential_solve(u0, j, params.sigma);

  auto sample = [&](const EvolutionState& s) {
    traj.times.push_back(s.t);
    double d2 = 0.0;
    for (int k = 0; k < g.num_cells(); ++k) d2 += std::norm(s.u[k] - ref[k]);
    traj.distance.push_back(std::sqrt(d2 * g.cell_area()));
    const ScalarField re = s.u.real(), im = s.u.imag();
    double grad2 = seminorm_grad_l2(re) * seminorm_grad_l2(re) +
                   seminorm_grad_l2(im) * seminorm_grad_l2(im);
    ScalarField defect(g);
    for (int k = 0; k < g.num_cells(); ++k) defect[k] = 1.0 - std::norm(s.u[k]);
    const double defect_l2 = norm_l2(defect);
    traj.energy.push_back(grad2 + defect_l2 * defect_l2 /
                                      (2.0 * params.epsilon * params.epsilon));
    traj.max_abs.push_back(s.u.abs().max());
    traj.gauge_rel.push_back(gauge_relative(s.u, s.phi));
    if (opts.keep_snapshots) traj.snapshots.push_back(s.u);
  };

  sample(state);
  const long nsteps = static_cast<long>(std::ceil(T / dt - 1e-9));
  for (long it = 1; it <= nsteps; ++it) {
    if (state.u.abs().max() > 1e8) {
      traj.blew_up = true;
      traj.blow_up_message = "amplitude exceeded 1e8 at t = " + std::to_string(state.t);
      break;
    }
    EvolutionState next;
    try {
      next = advance(state, dt, j, params);
    } catch (const SolverError& e) {
      traj.blew_up = true;
      traj.blow_up_message = e.what();
      break;
    }
    state = std::move(next);
    if (it % sample_every == 0 || it == nsteps) sample(state);
  }
  traj.final_state = std::move(state);
  return traj;
}

double phase_modded_distance(const ComplexField& u, const ComplexField& ref) {
  require_same_grid(u.grid(), ref.grid(), "phase_modded_distance");
  cplx inner(0.0, 0.0);
  for (int k = 0; k < u.size(); ++k) inner += std::conj(ref[k]) * u[k];
  // Aligning the phase first and differencing pointwise keeps tiny distances
  // accurate; the inner-product identity would cancel catastrophically.
  const double a = std::abs(inner);
  const cplx phase = a > 0.0 ? inner / a : cplx(1.0, 0.0);
  double d2 = 0.0;
  for (int k = 0; k < u.size(); ++k) d2 += std::norm(u[k] - phase * ref[k]);
  return std::sqrt(d2 * u.grid().cell_area());
}

double decay_rate(const Trajectory& traj, const ComplexField& u_s, const DecayWindow& window) {
  if (traj.snapshots.size() != traj.times.size())
    throw std::invalid_argument("decay_rate: trajectory carries no snapshots");
  std::vector<double> t, logd;
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const double ti = traj.times[i];
    if (ti < window.t_begin - 1e-12 || ti > window.t_end + 1e-12) continue;
    const double d = phase_modded_distance(traj.snapshots[i], u_s);
    if (!(d > 0.0))
      throw std::invalid_argument("decay_rate: non-positive distance inside the window");
    if (!logd.empty() && std::log(d) >= logd.back())
      throw std::invalid_argument("decay_rate: distance is not decreasing inside the window");
    t.push_back(ti);
    logd.push_back(std::log(d));
  }
  if (t.size() < 5)
    throw std::invalid_argument("decay_rate: need at least 5 samples in the window, got " +
                                std::to_string(t.size()));
  const int n = static_cast<int>(t.size());
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (int i = 0; i < n; ++i) {
    st += t[i];
    sy += logd[i];
    stt += t[i] * t[i];
    sty += t[i] * logd[i];
  }
  const double det = n * stt - st * st;
  if (det <= 0.0) throw std::invalid_argument("decay_rate: degenerate sample times");
  return -(n * sty - st * sy) / det;
}

}  // namespace glc
