#include "glc/solvers.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "glc/errors.hpp"

namespace glc {

namespace {

using clock_t_ = std::chrono::steady_clock;

double seconds_since(clock_t_::time_point t0) {
  return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (size_t k = 0; k < y.size(); ++k) y[k] += alpha * x[k];
}

int default_max_iter(int n, int requested) {
  if (requested > 0) return requested;
  return 200 + 40 * static_cast<int>(std::sqrt(static_cast<double>(n)));
}

std::vector<double> jacobi_weights(const SparseOperator& A) {
  std::vector<double> d = A.diagonal();
  for (double& v : d) v = std::abs(v) > 1e-300 ? 1.0 / v : 1.0;
  return d;
}

double recomputed_residual(const SparseOperator& A, const std::vector<double>& b,
                           const std::vector<double>& x) {
  std::vector<double> r = A.apply(x);
  for (size_t k = 0; k < r.size(); ++k) r[k] = b[k] - r[k];
  const double nb = norm2(b);
  return nb > 0.0 ? norm2(r) / nb : norm2(r);
}

SolveReport dense_lu(const SparseOperator& A, const std::vector<double>& b,
                     std::vector<double>& x, clock_t_::time_point t0) {
  const int n = A.rows();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : A.triplets()) M(t.row, t.col) = t.value;
  Eigen::Map<const Eigen::VectorXd> bv(b.data(), n);
  Eigen::VectorXd xv = Eigen::PartialPivLU<Eigen::MatrixXd>(M).solve(bv);
  x.assign(xv.data(), xv.data() + n);
  SolveReport rep;
  rep.method = "dense_lu";
  rep.iterations = 0;
  rep.rel_residual = recomputed_residual(A, b, x);
  rep.converged = std::isfinite(rep.rel_residual);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

}  // namespace

SolveReport solve_spd(const SparseOperator& A, const std::vector<double>& b,
                      std::vector<double>& x, const SolveOptions& opts) {
  const auto t0 = clock_t_::now();
  const int n = A.rows();
  SolveReport rep;
  rep.method = "cg";
  const double nb = norm2(b);
  if (nb == 0.0) {
    x.assign(n, 0.0);
    rep.converged = true;
    rep.wall_seconds = seconds_since(t0);
    return rep;
  }
  if (opts.x0)
    x = *opts.x0;
  else
    x.assign(n, 0.0);

  const std::vector<double> invd = jacobi_weights(A);
  std::vector<double> r = A.apply(x);
  for (int k = 0; k < n; ++k) r[k] = b[k] - r[k];
  std::vector<double> z(n), p(n), Ap(n);
  for (int k = 0; k < n; ++k) z[k] = invd[k] * r[k];
  p = z;
  double rz = dot(r, z);
  const int max_iter = default_max_iter(n, opts.max_iter);
  int it = 0;
  while (it < max_iter && norm2(r) > opts.tol * nb) {
    A.apply(p, Ap);
    const double pAp = dot(p, Ap);
    if (!(pAp > 0.0))
      throw SolverError("cg: operator is not positive definite (p'Ap = " +
                        std::to_string(pAp) + ")");
    const double alpha = rz / pAp;
    axpy(alpha, p, x);
    axpy(-alpha, Ap, r);
    for (int k = 0; k < n; ++k) z[k] = invd[k] * r[k];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    ++it;
  }
  rep.iterations = it;
  rep.rel_residual = recomputed_residual(A, b, x);
  rep.converged = rep.rel_residual <= opts.tol;
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

SolveReport solve_general(const SparseOperator& A, const std::vector<double>& b,
                          std::vector<double>& x, const GeneralSolveOptions& opts) {
  const auto t0 = clock_t_::now();
  const int n = A.rows();
  SolveReport rep;
  rep.method = "bicgstab";
  const double nb = norm2(b);
  if (nb == 0.0) {
    x.assign(n, 0.0);
    rep.converged = true;
    rep.wall_seconds = seconds_since(t0);
    return rep;
  }
  if (opts.x0)
    x = *opts.x0;
  else
    x.assign(n, 0.0);

  const std::vector<double> invd = jacobi_weights(A);
  std::vector<double> r = A.apply(x);
  for (int k = 0; k < n; ++k) r[k] = b[k] - r[k];
  std::vector<double> rhat = r;
  std::vector<double> p(n, 0.0), v(n, 0.0), s(n), t(n), phat(n), shat(n);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  const int max_iter = default_max_iter(n, opts.max_iter);
  bool breakdown = false;
  int it = 0;
  while (it < max_iter && norm2(r) > opts.tol * nb) {
    const double rho1 = dot(rhat, r);
    if (std::abs(rho1) < 1e-300 * nb * nb) { breakdown = true; break; }
    if (it == 0) {
      p = r;
    } else {
      const double beta = (rho1 / rho) * (alpha / omega);
      for (int k = 0; k < n; ++k) p[k] = r[k] + beta * (p[k] - omega * v[k]);
    }
    rho = rho1;
    for (int k = 0; k < n; ++k) phat[k] = invd[k] * p[k];
    A.apply(phat, v);
    const double rhv = dot(rhat, v);
    if (std::abs(rhv) < 1e-300) { breakdown = true; break; }
    alpha = rho1 / rhv;
    for (int k = 0; k < n; ++k) s[k] = r[k] - alpha * v[k];
    if (norm2(s) <= opts.tol * nb) {
      axpy(alpha, phat, x);
      r = s;
      ++it;
      break;
    }
    for (int k = 0; k < n; ++k) shat[k] = invd[k] * s[k];
    A.apply(shat, t);
    const double tt = dot(t, t);
    if (!(tt > 0.0)) { breakdown = true; break; }
    omega = dot(t, s) / tt;
    if (omega == 0.0) { breakdown = true; break; }
    for (int k = 0; k < n; ++k) x[k] += alpha * phat[k] + omega * shat[k];
    for (int k = 0; k < n; ++k) r[k] = s[k] - omega * t[k];
    ++it;
  }
  rep.iterations = it;
  rep.rel_residual = recomputed_residual(A, b, x);
  rep.converged = std::isfinite(rep.rel_residual) && rep.rel_residual <= opts.tol;
  if (!rep.converged) {
    if (n <= opts.dense_cap) return dense_lu(A, b, x, t0);
    throw SolverError("bicgstab failed on n=" + std::to_string(n) +
                      " system (rel residual " + std::to_string(rep.rel_residual) +
                      (breakdown ? ", breakdown)" : ", no convergence)") +
                      " and dense fallback cap exceeded");
  }
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

SolveReport solve_singular_neumann(const SparseOperator& A, const ScalarField& b,
                                   ScalarField& x, const GaugeConstraint& gauge,
                                   const SolveOptions& opts) {
  const auto t0 = clock_t_::now();
  const Grid& g = b.grid();
  const int n = A.rows();
  SolveReport rep;
  rep.method = "cg_projected";

  // Compatibility: the right side must be orthogonal to the kernel constants.
  const double sum_abs = [&] {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += std::abs(b[k]);
    return s * g.cell_area();
  }();
  if (sum_abs > 0.0 && std::abs(b.integral()) > 1e-10 * sum_abs)
    throw SolverError("singular Neumann solve: incompatible right side, integral(b) = " +
                      std::to_string(b.integral()));

  auto subtract_mean = [&](std::vector<double>& v) {
    double m = 0.0;
    for (double q : v) m += q;
    m /= n;
    for (double& q : v) q -= m;
  };

  // Solve (-A) x = -b by CG on the mean-free subspace; -A is SPD there.
  std::vector<double> rhs(b.data());
  for (double& q : rhs) q = -q;
  subtract_mean(rhs);
  const double nb = norm2(rhs);

  x = ScalarField(g);
  std::vector<double>& xv = x.data();
  if (opts.x0) {
    xv = *opts.x0;
    subtract_mean(xv);
  }

  int it = 0;
  if (nb > 0.0) {
    std::vector<double> invd = jacobi_weights(A);
    for (double& q : invd) q = -q;  // diag(-A) > 0
    std::vector<double> r = A.apply(xv);
    for (int k = 0; k < n; ++k) r[k] = rhs[k] + r[k];  // rhs - (-A)x
    subtract_mean(r);
    std::vector<double> z(n), p(n), Ap(n);
    for (int k = 0; k < n; ++k) z[k] = invd[k] * r[k];
    subtract_mean(z);
    p = z;
    double rz = dot(r, z);
    const int max_iter = default_max_iter(n, opts.max_iter);
    while (it < max_iter && norm2(r) > opts.tol * nb) {
      A.apply(p, Ap);
      for (double& q : Ap) q = -q;
      const double pAp = dot(p, Ap);
      if (!(pAp > 0.0))
        throw SolverError("projected cg: loss of definiteness on the mean-free subspace");
      const double alpha = rz / pAp;
      axpy(alpha, p, xv);
      axpy(-alpha, Ap, r);
      subtract_mean(r);
      for (int k = 0; k < n; ++k) z[k] = invd[k] * r[k];
      subtract_mean(z);
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (int k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
      ++it;
    }
  }

  // Fix the kernel constant. A annihilates constants, so the residual is
  // unaffected by the shift.
  if (gauge.kind == GaugeConstraint::Kind::ZeroMean) {
    double m = 0.0;
    for (double q : xv) m += q;
    m /= n;
    for (double& q : xv) q -= m;
  } else {
    const ScalarField& w = *gauge.weights;
    require_same_grid(g, w.grid(), "solve_singular_neumann gauge");
    double wsum = 0.0, wx = 0.0;
    for (int k = 0; k < n; ++k) {
      if (!(w[k] > 0.0))
        throw SolverError("gauge constraint: weights must be positive");
      wsum += w[k];
      wx += w[k] * xv[k];
    }
    wsum *= g.cell_area();
    wx *= g.cell_area();
    if (!(wsum > 0.0)) throw SolverError("gauge constraint: nonpositive total weight");
    const double shift = -(wx + gauge.offset) / wsum;
    for (double& q : xv) q += shift;
  }

  // Residual against the original signed system A x = b.
  std::vector<double> r = A.apply(xv);
  for (int k = 0; k < n; ++k) r[k] -= b[k];
  const double nb0 = norm2(b.data());
  rep.rel_residual = nb0 > 0.0 ? norm2(r) / nb0 : norm2(r);
  rep.iterations = it;
  rep.converged = rep.rel_residual <= opts.tol * 10.0 || nb0 == 0.0;
  if (!rep.converged)
    throw SolverError("singular Neumann solve did not converge: rel residual " +
                      std::to_string(rep.rel_residual));
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

struct SparseFactorization::Impl {
  Eigen::SparseMatrix<double> mat;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool ok = false;
};

SparseFactorization::SparseFactorization() : impl_(new Impl) {}
SparseFactorization::~SparseFactorization() = default;
SparseFactorization::SparseFactorization(SparseFactorization&&) noexcept = default;
SparseFactorization& SparseFactorization::operator=(SparseFactorization&&) noexcept = default;

void SparseFactorization::factor(const SparseOperator& a) {
  if (a.rows() != a.cols())
    throw SolverError("sparse factorization requires a square matrix");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(a.nnz());
  for (const auto& t : a.triplets()) trips.emplace_back(t.row, t.col, t.value);
  impl_->mat.resize(a.rows(), a.cols());
  impl_->mat.setFromTriplets(trips.begin(), trips.end());
  impl_->mat.makeCompressed();
  impl_->lu.compute(impl_->mat);
  impl_->ok = impl_->lu.info() == Eigen::Success;
  if (!impl_->ok)
    throw SolverError("sparse LU factorization failed (singular system?)");
}

bool SparseFactorization::ready() const { return impl_->ok; }
int SparseFactorization::rows() const { return static_cast<int>(impl_->mat.rows()); }

std::vector<double> SparseFactorization::solve(const std::vector<double>& b) const {
  if (!impl_->ok) throw SolverError("sparse factorization used before factor()");
  if (static_cast<int>(b.size()) != impl_->mat.rows())
    throw SolverError("sparse factorization: right side size mismatch");
  Eigen::Map<const Eigen::VectorXd> bv(b.data(), b.size());
  Eigen::VectorXd xv = impl_->lu.solve(bv);
  return std::vector<double>(xv.data(), xv.data() + xv.size());
}

}  // namespace glc
