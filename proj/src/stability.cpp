#include "glc/stability.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

#include "glc/diagnostics.hpp"
#include "glc/errors.hpp"

namespace glc {
namespace {

void append_scaled(std::vector<Triplet>& out, const SparseOperator& op, double scale,
                   int row_off, int col_off) {
  for (const auto& t : op.triplets())
    out.push_back({row_off + t.row, col_off + t.col, scale * t.value});
}

}  // namespace

LinearizedOperator::LinearizedOperator(const ScalarField& rho_s, const ScalarField& chi_s,
                                       const ScalarField& phi_s, double epsilon,
                                       double sigma, int dense_cap)
    : rho_s_(rho_s), chi_s_(chi_s), phi_s_(phi_s), epsilon_(epsilon), sigma_(sigma),
      dense_cap_(dense_cap) {
  const Grid& g = rho_s_.grid();
  require_same_grid(g, chi_s_.grid(), "LinearizedOperator");
  require_same_grid(g, phi_s_.grid(), "LinearizedOperator");
  if (!(epsilon_ > 0.0)) throw std::invalid_argument("LinearizedOperator: epsilon must be positive");
  if (!(sigma_ > 0.0)) throw std::invalid_argument("LinearizedOperator: sigma must be positive");
  n_ = g.num_cells();
  for (int k = 0; k < n_; ++k)
    if (!(rho_s_[k] > 0.0))
      throw std::invalid_argument("LinearizedOperator: rho_s must be strictly positive (cell " +
                                  std::to_string(k) + ")");

  rho_s_sq_ = ScalarField(g);
  two_rho_s_ = ScalarField(g);
  two_rho_phi_ = ScalarField(g);
  for (int k = 0; k < n_; ++k) {
    rho_s_sq_[k] = rho_s_[k] * rho_s_[k];
    two_rho_s_[k] = 2.0 * rho_s_[k];
    two_rho_phi_[k] = 2.0 * rho_s_[k] * phi_s_[k];
  }
  lap_ = laplacian_neumann(g);
  const ScalarField gsq_s = grad_sq_cell(chi_s_);
  const double inv_eps2 = 1.0 / (epsilon_ * epsilon_);
  coef_rho_ = ScalarField(g);
  for (int k = 0; k < n_; ++k)
    coef_rho_[k] = gsq_s[k] + inv_eps2 * (3.0 * rho_s_sq_[k] - 1.0);

  {
    const ScalarField lhs = div_weighted_grad_flux(rho_s_sq_, chi_s_);
    ScalarField mismatch(g);
    for (int k = 0; k < n_; ++k) mismatch[k] = lhs[k] - rho_s_sq_[k] * phi_s_[k];
    steady_identity_residual_ = norm_l2(mismatch);
  }

  // Bordered potential subsystem: -sigma*Lap(phi) + nu = rhs rows plus the
  // weighted-affine gauge row; nu absorbs (only) the roundoff-level
  // incompatibility of the flux-form right sides.
  {
    std::vector<Triplet> ts;
    append_scaled(ts, lap_, -sigma_, 0, 0);
    for (int k = 0; k < n_; ++k) {
      ts.push_back({k, n_, 1.0});
      ts.push_back({n_, k, rho_s_sq_[k] * g.cell_area()});
    }
    pot_lu_.factor(SparseOperator(n_ + 1, n_ + 1, std::move(ts)));
  }

  if (2 * n_ <= dense_cap_) {
    const int dim = 2 * n_;
    dense_.assign(static_cast<size_t>(dim) * dim, 0.0);
    ScalarField er(g), ec(g), or_(g), oc(g);
    for (int col = 0; col < dim; ++col) {
      for (int k = 0; k < n_; ++k) {
        er[k] = 0.0;
        ec[k] = 0.0;
      }
      if (col < n_)
        er[col] = 1.0;
      else
        ec[col - n_] = 1.0;
      apply(er, ec, or_, oc);
      for (int k = 0; k < n_; ++k) {
        dense_[static_cast<size_t>(k) * dim + col] = or_[k];
        dense_[static_cast<size_t>(n_ + k) * dim + col] = oc[k];
      }
    }
  }
}

LinearizedOperator LinearizedOperator::around(const SteadyStateSolution& s, int dense_cap) {
  return LinearizedOperator(s.rho_s, s.chi_s, s.phi_s, s.background.epsilon,
                            s.background.sigma, dense_cap);
}

ScalarField LinearizedOperator::transport_rhs(const ScalarField& rho,
                                              const ScalarField& chi) const {
  ScalarField rhs = div_weighted_grad_flux(rho_s_sq_, chi);
  rhs += div_weighted_grad_flux(hadamard(two_rho_s_, rho), chi_s_);
  return rhs;
}

ScalarField LinearizedOperator::potential(const ScalarField& rho, const ScalarField& chi) const {
  const Grid& g = rho_s_.grid();
  require_same_grid(g, rho.grid(), "LinearizedOperator::potential");
  require_same_grid(g, chi.grid(), "LinearizedOperator::potential");
  const ScalarField rhs = transport_rhs(rho, chi);
  std::vector<double> b(n_ + 1, 0.0);
  // Equation rows carry -rhs (the potential equation is -sigma*Lap(phi) = -rhs);
  // the gauge row carries -integral(2 phi_s rho_s rho).
  for (int k = 0; k < n_; ++k) b[k] = -rhs[k];
  double off = 0.0;
  for (int k = 0; k < n_; ++k) off += two_rho_phi_[k] * rho[k];
  b[n_] = -off * g.cell_area();
  const std::vector<double> x = pot_lu_.solve(b);
  ScalarField phi(g);
  for (int k = 0; k < n_; ++k) phi[k] = x[k];
  return phi;
}

void LinearizedOperator::apply(const ScalarField& rho, const ScalarField& chi,
                               ScalarField& rho_out, ScalarField& chi_out) const {
  const Grid& g = rho_s_.grid();
  const ScalarField phi = potential(rho, chi);
  const ScalarField lap_rho = lap_.apply(rho);
  const ScalarField gdot = grad_dot_cell(chi_s_, chi);
  const ScalarField rhs = transport_rhs(rho, chi);
  if (!rho_out.has_grid()) rho_out = ScalarField(g);
  if (!chi_out.has_grid()) chi_out = ScalarField(g);
  for (int k = 0; k < n_; ++k) {
    rho_out[k] = -lap_rho[k] + coef_rho_[k] * rho[k] + two_rho_s_[k] * gdot[k];
    chi_out[k] = -rhs[k] + rho_s_sq_[k] * phi[k] + two_rho_phi_[k] * rho[k];
  }
}

ScalarField nonlocal_potential(const ScalarField& rho, const ScalarField& chi,
                               const LinearizedOperator& steady) {
  const Grid& g = steady.grid();
  require_same_grid(g, rho.grid(), "nonlocal_potential");
  require_same_grid(g, chi.grid(), "nonlocal_potential");
  ScalarField rhs = div_weighted_grad_flux(steady.mass_chi(), chi);
  rhs += div_weighted_grad_flux(hadamard(2.0 * steady.rho_s(), rho), steady.chi_s());

  std::vector<Triplet> ts;
  append_scaled(ts, laplacian_neumann(g), steady.sigma(), 0, 0);
  const SparseOperator a(g.num_cells(), g.num_cells(), std::move(ts));

  double off = 0.0;
  for (int k = 0; k < g.num_cells(); ++k)
    off += 2.0 * steady.phi_s()[k] * steady.rho_s()[k] * rho[k];
  off *= g.cell_area();

  ScalarField phi(g);
  SolveOptions opts;
  opts.tol = 1e-13;
  solve_singular_neumann(a, rhs, phi, GaugeConstraint::weighted(steady.mass_chi(), off), opts);
  return phi;
}

std::pair<ScalarField, ScalarField> apply_B(const ScalarField& rho, const ScalarField& chi,
                                            const LinearizedOperator& steady) {
  const Grid& g = steady.grid();
  require_same_grid(g, rho.grid(), "apply_B");
  require_same_grid(g, chi.grid(), "apply_B");
  const int n = g.num_cells();
  const ScalarField phi = nonlocal_potential(rho, chi, steady);
  const ScalarField lap_rho = laplacian_neumann(g).apply(rho);
  const ScalarField gdot = grad_dot_cell(steady.chi_s(), chi);
  const ScalarField gsq_s = grad_sq_cell(steady.chi_s());
  const double inv_eps2 = 1.0 / (steady.epsilon() * steady.epsilon());
  ScalarField rhs = div_weighted_grad_flux(steady.mass_chi(), chi);
  rhs += div_weighted_grad_flux(hadamard(2.0 * steady.rho_s(), rho), steady.chi_s());

  ScalarField rho_out(g), chi_out(g);
  for (int k = 0; k < n; ++k) {
    const double rs = steady.rho_s()[k];
    rho_out[k] = -lap_rho[k] +
                 (gsq_s[k] + inv_eps2 * (3.0 * rs * rs - 1.0)) * rho[k] +
                 2.0 * rs * gdot[k];
    chi_out[k] = -rhs[k] + rs * rs * phi[k] + 2.0 * rs * steady.phi_s()[k] * rho[k];
  }
  return {std::move(rho_out), std::move(chi_out)};
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Unstable: return "unstable";
    default: return "marginal";
  }
}

namespace {

// Shared pieces of both spectrum paths.
struct Candidate {
  cplx lambda;
  std::vector<cplx> vec;  // stacked (rho, chi), size 2n
  double residual = 0.0;
};

// ||B v - lambda M v|| / ||M v|| with the candidate split into real and
// imaginary applications of the (real) operator.
double candidate_residual(const LinearizedOperator& op, const Candidate& c) {
  const Grid& g = op.grid();
  const int n = g.num_cells();
  ScalarField rr(g), rc(g), ir(g), ic(g);
  for (int k = 0; k < n; ++k) {
    rr[k] = c.vec[k].real();
    ir[k] = c.vec[k].imag();
    rc[k] = c.vec[n + k].real();
    ic[k] = c.vec[n + k].imag();
  }
  ScalarField br_r(g), br_c(g), bi_r(g), bi_c(g);
  op.apply(rr, rc, br_r, br_c);
  op.apply(ir, ic, bi_r, bi_c);

  const double lr = c.lambda.real(), li = c.lambda.imag();
  double num = 0.0, den = 0.0;
  for (int k = 0; k < n; ++k) {
    const double m = op.mass_chi()[k];
    const double mxr_r = rr[k], mxr_c = m * rc[k];
    const double mxi_r = ir[k], mxi_c = m * ic[k];
    const double re_r = br_r[k] - (lr * mxr_r - li * mxi_r);
    const double re_c = br_c[k] - (lr * mxr_c - li * mxi_c);
    const double im_r = bi_r[k] - (lr * mxi_r + li * mxr_r);
    const double im_c = bi_c[k] - (lr * mxi_c + li * mxr_c);
    num += re_r * re_r + re_c * re_c + im_r * im_r + im_c * im_c;
    den += mxr_r * mxr_r + mxr_c * mxr_c + mxi_r * mxi_r + mxi_c * mxi_c;
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

// Normalize for reporting: unit discrete L2 over both fields, phase fixed by
// making the largest-magnitude component real positive.
void normalize_candidate(Candidate& c, double cell_area) {
  double nrm2 = 0.0;
  size_t arg = 0;
  double best = -1.0;
  for (size_t k = 0; k < c.vec.size(); ++k) {
    const double a = std::abs(c.vec[k]);
    nrm2 += a * a;
    if (a > best) {
      best = a;
      arg = k;
    }
  }
  const double nrm = std::sqrt(nrm2 * cell_area);
  if (nrm == 0.0 || best == 0.0) return;
  const cplx rot = std::conj(c.vec[arg]) / std::abs(c.vec[arg]);
  for (auto& z : c.vec) z = z * rot / nrm;
}

Eigenpair make_pair(const Grid& g, const Candidate& c) {
  const int n = g.num_cells();
  Eigenpair p;
  p.lambda = c.lambda;
  p.residual = c.residual;
  p.rho = ComplexField(g);
  p.chi = ComplexField(g);
  for (int k = 0; k < n; ++k) {
    p.rho[k] = c.vec[k];
    p.chi[k] = c.vec[n + k];
  }
  return p;
}

bool lambda_less(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

SpectrumReport finalize_report(const LinearizedOperator& op, std::vector<Candidate> cands,
                               int k, const SpectrumOptions& opts, const char* method,
                               cplx gauge_lambda) {
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) { return lambda_less(a.lambda, b.lambda); });
  SpectrumReport rep;
  rep.method = method;
  rep.margin = opts.margin;
  rep.gauge_eigenvalue = gauge_lambda;
  rep.steady_identity_residual = op.steady_identity_residual();
  const int keep = std::min<int>(k, static_cast<int>(cands.size()));
  for (int i = 0; i < keep; ++i) {
    normalize_candidate(cands[i], op.grid().cell_area());
    rep.pairs.push_back(make_pair(op.grid(), cands[i]));
    rep.max_residual = std::max(rep.max_residual, cands[i].residual);
  }
  rep.min_re_nongauge = cands.empty() ? 0.0 : cands.front().lambda.real();
  rep.verdict = rep.min_re_nongauge > opts.margin
                    ? Verdict::Stable
                    : (rep.min_re_nongauge < -opts.margin ? Verdict::Unstable : Verdict::Marginal);
  return rep;
}

SpectrumReport spectrum_dense(const LinearizedOperator& op, int k, const SpectrumOptions& opts) {
  const int n = op.grid().num_cells();
  const int dim = 2 * n;
  if (!op.has_dense())
    throw std::invalid_argument("spectrum: dense mode needs 2n <= " +
                                std::to_string(op.dense_cap()) + ", got " + std::to_string(dim));

  // Standard form T = M^{-1/2} B M^{-1/2}; rho_s > 0 keeps the scaling real.
  std::vector<double> s(dim, 1.0);
  for (int j = 0; j < n; ++j) s[n + j] = op.rho_s()[j];
  Eigen::MatrixXd t(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      t(r, c) = op.dense()[static_cast<size_t>(r) * dim + c] / (s[r] * s[c]);

  Eigen::EigenSolver<Eigen::MatrixXd> es(t);
  if (es.info() != Eigen::Success) throw SolverError("spectrum: dense eigensolver failed");
  const Eigen::MatrixXcd vecs = es.eigenvectors();
  const Eigen::VectorXcd vals = es.eigenvalues();

  // The gauge mode is the eigenvector best aligned with M^(1/2) (0, 1).
  Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
  for (int j = 0; j < n; ++j) u(n + j) = op.rho_s()[j];
  u.normalize();
  int gauge_idx = 0;
  double best_overlap = -1.0;
  for (int i = 0; i < dim; ++i) {
    const double ov = std::abs(vecs.col(i).dot(u.cast<cplx>()));
    if (ov > best_overlap) {
      best_overlap = ov;
      gauge_idx = i;
    }
  }

  std::vector<Candidate> cands;
  cands.reserve(dim - 1);
  for (int i = 0; i < dim; ++i) {
    if (i == gauge_idx) continue;
    Candidate c;
    c.lambda = vals(i);
    c.vec.resize(dim);
    for (int r = 0; r < dim; ++r) c.vec[r] = vecs(r, i) / s[r];
    cands.push_back(std::move(c));
  }
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) { return lambda_less(a.lambda, b.lambda); });
  const int keep = std::min<int>(k, static_cast<int>(cands.size()));
  for (int i = 0; i < keep; ++i) cands[i].residual = candidate_residual(op, cands[i]);
  cands.resize(keep);

  SpectrumReport rep =
      finalize_report(op, std::move(cands), k, opts, "dense", vals(gauge_idx));
  rep.all_eigenvalues.reserve(dim);
  for (int i = 0; i < dim; ++i) rep.all_eigenvalues.push_back(vals(i));
  std::sort(rep.all_eigenvalues.begin(), rep.all_eigenvalues.end(), lambda_less);
  // min over every non-gauge eigenvalue, not only the reported ones.
  double mre = 0.0;
  bool first = true;
  for (int i = 0; i < dim; ++i) {
    if (i == gauge_idx) continue;
    const double re = vals(i).real();
    if (first || re < mre) mre = re;
    first = false;
  }
  rep.min_re_nongauge = mre;
  rep.verdict = mre > opts.margin ? Verdict::Stable
                                  : (mre < -opts.margin ? Verdict::Unstable : Verdict::Marginal);
  return rep;
}

// Gauge-projected shift-invert map around 0, realized by one factorization of
// the bordered (3n+2) block matrix. Both multipliers vanish for projected
// right sides, so the solve is the exact deflated inverse.
class ShiftInvert {
 public:
  explicit ShiftInvert(const LinearizedOperator& op) : op_(&op) {
    const Grid& g = op.grid();
    const int n = g.num_cells();
    const double area = g.cell_area();
    const double inv_eps2 = 1.0 / (op.epsilon() * op.epsilon());
    const ScalarField gsq_s = grad_sq_cell(op.chi_s());
    ScalarField two_rho_s(g), two_rho_phi(g), coef_rho(g);
    for (int k = 0; k < n; ++k) {
      const double rs = op.rho_s()[k];
      two_rho_s[k] = 2.0 * rs;
      two_rho_phi[k] = 2.0 * rs * op.phi_s()[k];
      coef_rho[k] = gsq_s[k] + inv_eps2 * (3.0 * rs * rs - 1.0);
    }

    std::vector<Triplet> ts;
    const SparseOperator lap = laplacian_neumann(g);
    // rho rows.
    append_scaled(ts, lap, -1.0, 0, 0);
    for (int k = 0; k < n; ++k) ts.push_back({k, k, coef_rho[k]});
    append_grad_dot_block(ts, g, two_rho_s, op.chi_s(), 0, n);
    // chi rows (+ mu2 column).
    append_scaled(ts, div_weighted_grad_arith(g, op.mass_chi()), -1.0, n, n);
    append_div_transport_block(ts, g, two_rho_s, op.chi_s(), -1.0, n, 0);
    for (int k = 0; k < n; ++k) {
      ts.push_back({n + k, 2 * n + k, op.mass_chi()[k]});
      ts.push_back({n + k, k, two_rho_phi[k]});
      ts.push_back({n + k, 3 * n + 1, op.mass_chi()[k]});
    }
    // potential rows (+ mu1 column).
    append_scaled(ts, lap, -op.sigma(), 2 * n, 2 * n);
    append_scaled(ts, div_weighted_grad_arith(g, op.mass_chi()), 1.0, 2 * n, n);
    append_div_transport_block(ts, g, two_rho_s, op.chi_s(), 1.0, 2 * n, 0);
    for (int k = 0; k < n; ++k) ts.push_back({2 * n + k, 3 * n, 1.0});
    // constraint rows: weighted-affine potential gauge, then the phase pin.
    for (int k = 0; k < n; ++k) {
      ts.push_back({3 * n, 2 * n + k, op.mass_chi()[k] * area});
      ts.push_back({3 * n, k, two_rho_phi[k] * area});
      ts.push_back({3 * n + 1, n + k, op.mass_chi()[k] * area});
    }
    lu_.factor(SparseOperator(3 * n + 2, 3 * n + 2, std::move(ts)));
    mass_sum_ = 0.0;
    for (int k = 0; k < n; ++k) mass_sum_ += op.mass_chi()[k];
  }

  // v and the result are stacked (rho, chi) of size 2n.
  std::vector<double> apply(const std::vector<double>& v) const {
    const int n = op_->grid().num_cells();
    std::vector<double> b(3 * n + 2, 0.0);
    for (int k = 0; k < n; ++k) {
      b[k] = v[k];
      b[n + k] = op_->mass_chi()[k] * v[n + k];
    }
    const std::vector<double> x = lu_.solve(b);
    std::vector<double> w(2 * n);
    for (int k = 0; k < 2 * n; ++k) w[k] = x[k];
    project(w);
    return w;
  }

  // Oblique gauge deflation: remove the (0, 1) component in the M-weighted
  // pairing.
  void project(std::vector<double>& v) const {
    const int n = op_->grid().num_cells();
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += op_->mass_chi()[k] * v[n + k];
    const double c = s / mass_sum_;
    for (int k = 0; k < n; ++k) v[n + k] -= c;
  }

 private:
  const LinearizedOperator* op_;
  SparseFactorization lu_;
  double mass_sum_ = 0.0;
};

std::optional<std::vector<Candidate>> arnoldi_candidates(const LinearizedOperator& op,
                                                         const ShiftInvert& si, int k, int m,
                                                         double residual_tol) {
  const int dim = op.size();
  m = std::min(m, dim);

  std::mt19937_64 rng(0x1905c0ffee11ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> q(dim);
  for (double& x : q) x = gauss(rng);
  si.project(q);
  double qn = 0.0;
  for (double x : q) qn += x * x;
  qn = std::sqrt(qn);
  if (qn == 0.0) return std::nullopt;
  for (double& x : q) x /= qn;

  std::vector<std::vector<double>> v;
  v.reserve(m + 1);
  v.push_back(std::move(q));
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
  int m_eff = m;
  for (int j = 0; j < m; ++j) {
    std::vector<double> w = si.apply(v[j]);
    // Modified Gram-Schmidt with one reorthogonalization pass.
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i <= j; ++i) {
        double d = 0.0;
        for (int r = 0; r < dim; ++r) d += v[i][r] * w[r];
        for (int r = 0; r < dim; ++r) w[r] -= d * v[i][r];
        h(i, j) += d;
      }
    double wn = 0.0;
    for (double x : w) wn += x * x;
    wn = std::sqrt(wn);
    h(j + 1, j) = wn;
    if (wn <= 1e-13) {
      m_eff = j + 1;  // happy breakdown: the Krylov space is exhausted
      break;
    }
    for (double& x : w) x /= wn;
    v.push_back(std::move(w));
  }

  Eigen::EigenSolver<Eigen::MatrixXd> es(h.topLeftCorner(m_eff, m_eff));
  if (es.info() != Eigen::Success) return std::nullopt;
  const Eigen::MatrixXcd ritz_vecs = es.eigenvectors();
  const Eigen::VectorXcd ritz_vals = es.eigenvalues();

  std::vector<Candidate> out;
  for (int i = 0; i < m_eff; ++i) {
    const cplx theta = ritz_vals(i);
    if (std::abs(theta) < 1e-14) continue;
    Candidate c;
    c.lambda = 1.0 / theta;
    c.vec.assign(dim, cplx(0.0, 0.0));
    for (int r = 0; r < m_eff; ++r) {
      const cplx y = ritz_vecs(r, i);
      if (y == cplx(0.0, 0.0)) continue;
      for (int d = 0; d < dim; ++d) c.vec[d] += y * v[r][d];
    }
    c.residual = candidate_residual(op, c);
    if (c.residual <= residual_tol) out.push_back(std::move(c));
  }
  if (static_cast<int>(out.size()) < k) return std::nullopt;
  return out;
}

cplx gauge_rayleigh(const LinearizedOperator& op) {
  const Grid& g = op.grid();
  ScalarField zr(g), zc(g, 1.0), or_(g), oc(g);
  op.apply(zr, zc, or_, oc);
  double num = 0.0, den = 0.0;
  for (int k = 0; k < g.num_cells(); ++k) {
    num += oc[k];
    den += op.mass_chi()[k];
  }
  return cplx(num / den, 0.0);
}

}  // namespace

SpectrumReport spectrum(const LinearizedOperator& op, int k, const SpectrumOptions& opts) {
  if (k < 1) throw std::invalid_argument("spectrum: k must be >= 1");
  if (opts.mode == SpectrumMode::Dense) return spectrum_dense(op, k, opts);

  const int m0 = opts.subspace > 0 ? opts.subspace : std::max(2 * k + 10, 40);
  bool factorization_failed = false;
  try {
    const ShiftInvert si(op);
    for (int attempt = 0; attempt < 2; ++attempt) {
      const int m = m0 << attempt;
      auto cands = arnoldi_candidates(op, si, k, m, opts.residual_tol);
      if (cands)
        return finalize_report(op, std::move(*cands), k, opts, "iterative", gauge_rayleigh(op));
    }
  } catch (const SolverError&) {
    // Exactly singular bordered matrix (an eigenvalue sits on the shift) or a
    // failed factorization: fall through to the dense path when available.
    factorization_failed = true;
  }
  if (op.has_dense()) return spectrum_dense(op, k, opts);
  throw SolverError(factorization_failed
                        ? "spectrum: shift-invert factorization failed and dense fallback "
                          "is out of cap"
                        : "spectrum: iterative eigensolver did not converge and dense "
                          "fallback is out of cap");
}

SpectrumReport spectrum(const LinearizedOperator& op, int k, SpectrumMode mode) {
  SpectrumOptions opts;
  opts.mode = mode;
  return spectrum(op, k, opts);
}

}  // namespace glc
