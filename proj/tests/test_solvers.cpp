#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "glc/errors.hpp"
#include "glc/fields.hpp"
#include "glc/grid.hpp"
#include "glc/operators.hpp"
#include "glc/oracles.hpp"
#include "glc/solvers.hpp"

using namespace glc;

namespace {

ScalarField random_field(const Grid& g, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  ScalarField f(g);
  for (int k = 0; k < f.size(); ++k) f[k] = dist(rng);
  return f;
}

// -Delta + I on the Neumann grid: SPD, well conditioned.
SparseOperator helmholtz(const Grid& g) {
  SparseOperator lap = laplacian_neumann(g);
  std::vector<Triplet> t = lap.triplets();
  for (auto& e : t) e.value = -e.value;
  for (int k = 0; k < g.num_cells(); ++k) t.push_back({k, k, 1.0});
  return SparseOperator(g.num_cells(), g.num_cells(), std::move(t));
}

double residual(const SparseOperator& a, const std::vector<double>& x,
                const std::vector<double>& b) {
  std::vector<double> r = a.apply(x);
  double num = 0.0, den = 0.0;
  for (size_t k = 0; k < b.size(); ++k) {
    num += (r[k] - b[k]) * (r[k] - b[k]);
    den += b[k] * b[k];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

TEST_CASE("CG meets the residual contract on an SPD system") {
  Grid g(20, 15, 1.0, 1.0);
  SparseOperator a = helmholtz(g);
  ScalarField bf = random_field(g, 3);
  std::vector<double> x;
  SolveOptions opts;
  opts.tol = 1e-11;
  SolveReport rep = solve_spd(a, bf.data(), x, opts);
  CHECK(rep.converged);
  CHECK(rep.rel_residual <= 1e-11);
  CHECK(residual(a, x, bf.data()) <= 1e-11);
  CHECK(rep.iterations > 0);

  // Zero right side short-circuits.
  std::vector<double> zero(g.num_cells(), 0.0), xz;
  SolveReport rz = solve_spd(a, zero, xz, opts);
  CHECK(rz.converged);
  for (double v : xz) CHECK(v == 0.0);
}

TEST_CASE("CG agrees with the dense oracle on a small system") {
  Grid g(5, 4, 1.0, 1.0);
  const int n = g.num_cells();
  SparseOperator a = helmholtz(g);
  ScalarField bf = random_field(g, 7);
  std::vector<double> x;
  solve_spd(a, bf.data(), x);

  // Densify and eliminate independently.
  std::vector<double> dense(n * n, 0.0);
  for (const auto& t : a.triplets()) dense[t.row * n + t.col] += t.value;
  std::vector<double> want = oracle_dense_solve(dense, bf.data());
  for (int k = 0; k < n; ++k) CHECK(x[k] == doctest::Approx(want[k]).epsilon(1e-8));
}

TEST_CASE("general solver handles a nonsymmetric system, dense fallback included") {
  Grid g(6, 6, 1.0, 1.0);
  const int n = g.num_cells();
  // Helmholtz plus a skew transport-like perturbation: nonsymmetric.
  std::vector<Triplet> t = helmholtz(g).triplets();
  for (int i = 0; i + 1 < n; ++i) {
    t.push_back({i, i + 1, 0.3});
    t.push_back({i + 1, i, -0.3});
  }
  SparseOperator a(n, n, std::move(t));
  ScalarField bf = random_field(g, 13);
  std::vector<double> x;
  GeneralSolveOptions opts;
  opts.tol = 1e-10;
  SolveReport rep = solve_general(a, bf.data(), x, opts);
  CHECK(rep.converged);
  CHECK(residual(a, x, bf.data()) <= 1e-9);

  std::vector<double> dense(n * n, 0.0);
  for (const auto& e : a.triplets()) dense[e.row * n + e.col] += e.value;
  std::vector<double> want = oracle_dense_solve(dense, bf.data());
  for (int k = 0; k < n; ++k) CHECK(x[k] == doctest::Approx(want[k]).epsilon(1e-7));
}

TEST_CASE("singular Neumann solve: compatibility, zero mean, and shift invariance") {
  Grid g(16, 12, 1.5, 1.0);
  SparseOperator lap = laplacian_neumann(g);
  ScalarField b = random_field(g, 17);
  // Make the right side compatible.
  ScalarField ones(g, 1.0);
  b -= b.mean() * ones;

  ScalarField x(g);
  SolveOptions opts;
  opts.tol = 1e-11;
  SolveReport rep = solve_singular_neumann(lap, b, x, GaugeConstraint::zero_mean(), opts);
  CHECK(rep.converged);
  CHECK(std::abs(x.mean()) < 1e-12);
  ScalarField r = lap.apply(x) - b;
  double bn = std::sqrt(hadamard(b, b).integral());
  double rn = std::sqrt(hadamard(r, r).integral());
  CHECK(rn <= 1e-10 * bn);

  // The solution is invariant under shifting the initial guess by a constant.
  ScalarField x2(g);
  std::vector<double> guess(g.num_cells(), 42.0);
  SolveOptions opts2 = opts;
  opts2.x0 = &guess;
  solve_singular_neumann(lap, b, x2, GaugeConstraint::zero_mean(), opts2);
  CHECK((x2 - x).max_abs() < 1e-11);
}

TEST_CASE("singular Neumann solve rejects incompatible right sides") {
  Grid g(8, 8, 1.0, 1.0);
  SparseOperator lap = laplacian_neumann(g);
  ScalarField b(g, 1.0);  // integral != 0
  ScalarField x(g);
  CHECK_THROWS_AS(solve_singular_neumann(lap, b, x, GaugeConstraint::zero_mean()),
                  SolverError);
}

TEST_CASE("weighted gauge constraint lands on the requested affine target") {
  Grid g(10, 10, 1.0, 1.0);
  SparseOperator lap = laplacian_neumann(g);
  ScalarField b = random_field(g, 23);
  ScalarField ones(g, 1.0);
  b -= b.mean() * ones;
  ScalarField w = random_field(g, 24, 0.5, 2.0);

  ScalarField x(g);
  const double offset = 0.37;
  solve_singular_neumann(lap, b, x, GaugeConstraint::weighted(w, offset));
  CHECK(hadamard(w, x).integral() + offset == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("sparse factorization solves repeatedly and flags singular input") {
  Grid g(7, 7, 1.0, 1.0);
  const int n = g.num_cells();
  SparseOperator a = helmholtz(g);
  SparseFactorization lu;
  CHECK_FALSE(lu.ready());
  lu.factor(a);
  CHECK(lu.ready());
  CHECK(lu.rows() == n);
  for (unsigned seed : {31u, 32u, 33u}) {
    ScalarField b = random_field(g, seed);
    std::vector<double> x = lu.solve(b.data());
    CHECK(residual(a, x, b.data()) < 1e-12);
  }
  // Structurally singular input (an empty row) is refused.
  SparseFactorization bad;
  SparseOperator zero_row(2, 2, {{0, 0, 1.0}, {0, 1, 1.0}});
  CHECK_THROWS_AS(bad.factor(zero_row), SolverError);
}

TEST_CASE("manufactured Neumann problem converges at second order in h") {
  // exact u = cos(pi x)cos(pi y) on the unit square, -Delta u = f with
  // f = 2 pi^2 u; compatible and satisfies the zero-flux condition exactly.
  auto exact = [](double x, double y) { return std::cos(M_PI * x) * std::cos(M_PI * y); };
  auto forcing = [&](double x, double y) { return 2.0 * M_PI * M_PI * exact(x, y); };

  std::vector<double> hs, errs;
  for (int n : {16, 32, 64}) {
    Grid g(n, n, 1.0, 1.0);
    SparseOperator lap = laplacian_neumann(g);
    ScalarField b(g), want(g);
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        b.at(i, j) = -forcing(g.cell_x(i), g.cell_y(j));  // Delta u = -f
        want.at(i, j) = exact(g.cell_x(i), g.cell_y(j));
      }
    // Mean-subtract the forcing: cell sampling leaves a quadrature remainder.
    ScalarField ones(g, 1.0);
    b -= b.mean() * ones;
    ScalarField x(g);
    SolveOptions opts;
    opts.tol = 1e-12;
    solve_singular_neumann(lap, b, x, GaugeConstraint::zero_mean(), opts);
    want -= want.mean() * ones;
    ScalarField err = x - want;
    double e2 = std::sqrt(hadamard(err, err).integral());
    hs.push_back(g.hx());
    errs.push_back(e2);
  }
  const double order = std::log(errs[0] / errs[2]) / std::log(hs[0] / hs[2]);
  CHECK(order == doctest::Approx(2.0).epsilon(0.05));
}
