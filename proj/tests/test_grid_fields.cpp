#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "glc/errors.hpp"
#include "glc/fields.hpp"
#include "glc/grid.hpp"
#include "glc/profile.hpp"

using namespace glc;

TEST_CASE("grid geometry and indexing") {
  Grid g(8, 5, 2.0, 1.0);
  CHECK(g.num_cells() == 40);
  CHECK(g.hx() == doctest::Approx(0.25));
  CHECK(g.hy() == doctest::Approx(0.2));
  CHECK(g.cell_area() == doctest::Approx(0.05));
  CHECK(g.area() == doctest::Approx(2.0));
  CHECK(g.idx(3, 2) == 2 * 8 + 3);
  CHECK(g.cell_x(0) == doctest::Approx(0.125));
  CHECK(g.cell_y(4) == doctest::Approx(0.9));
  CHECK(g.boundary_faces().size() == 2u * (8 + 5));
}

TEST_CASE("boundary faces walk the perimeter in cyclic order") {
  const int nx = 6, ny = 4;
  Grid g(nx, ny, 1.5, 1.0);
  const auto& faces = g.boundary_faces();
  REQUIRE(static_cast<int>(faces.size()) == 2 * (nx + ny));

  // Bottom, left to right.
  for (int i = 0; i < nx; ++i) {
    CHECK(faces[i].edge == Edge::Bottom);
    CHECK(faces[i].cell == g.idx(i, 0));
    CHECK(faces[i].length == doctest::Approx(g.hx()));
    CHECK(faces[i].s == doctest::Approx(g.cell_x(i)));
    if (i > 0) CHECK(faces[i].cx > faces[i - 1].cx);
  }
  // Right, bottom to top.
  for (int j = 0; j < ny; ++j) {
    const auto& f = faces[nx + j];
    CHECK(f.edge == Edge::Right);
    CHECK(f.cell == g.idx(nx - 1, j));
    CHECK(f.length == doctest::Approx(g.hy()));
    CHECK(f.cx == doctest::Approx(g.lx()));
  }
  // Top, right to left.
  for (int i = 0; i < nx; ++i) {
    const auto& f = faces[nx + ny + i];
    CHECK(f.edge == Edge::Top);
    CHECK(f.cell == g.idx(nx - 1 - i, ny - 1));
  }
  // Left, top to bottom.
  for (int j = 0; j < ny; ++j) {
    const auto& f = faces[2 * nx + ny + j];
    CHECK(f.edge == Edge::Left);
    CHECK(f.cell == g.idx(0, ny - 1 - j));
    CHECK(f.cx == doctest::Approx(0.0));
  }
}

TEST_CASE("contact tagging covers exactly the requested arcs") {
  std::vector<ContactSegment> segs{{Edge::Left, 0.25, 0.75, +1.0},
                                   {Edge::Right, 0.25, 0.75, -1.0}};
  Grid g(8, 8, 2.0, 1.0, segs);
  int tagged = 0;
  for (const auto& f : g.boundary_faces()) {
    if (f.contact) {
      ++tagged;
      CHECK((f.edge == Edge::Left || f.edge == Edge::Right));
      CHECK(f.s >= 0.25);
      CHECK(f.s <= 0.75);
      CHECK(f.segment >= 0);
      CHECK(g.contacts()[f.segment].edge == f.edge);
    } else {
      CHECK(f.segment == -1);
    }
  }
  CHECK(tagged == g.num_contact_faces());
  CHECK(tagged == 8);  // 4 faces per side at hy = 0.125
}

TEST_CASE("edge names round-trip") {
  for (Edge e : {Edge::Bottom, Edge::Right, Edge::Top, Edge::Left})
    CHECK(edge_from_name(edge_name(e)) == e);
  CHECK_THROWS_AS(edge_from_name("diagonal"), ConfigError);
}

TEST_CASE("profiles carry zero net flux and scale one-homogeneously") {
  std::vector<ContactSegment> segs{{Edge::Left, 0.2, 0.8, +1.0},
                                   {Edge::Right, 0.3, 0.7, -1.0}};
  Grid g(16, 16, 2.0, 1.0, segs);
  for (auto shape : {ProfileShape::Uniform, ProfileShape::Cosine}) {
    CAPTURE(shape_name(shape));
    CurrentProfile j(g, 0.3, shape);
    CHECK(std::abs(j.net_flux()) < 1e-14 * j.abs_flux());
    CHECK(j.abs_flux() > 0.0);
    CHECK(j.norm() > 0.0);
    CurrentProfile j2 = j.scaled(2.0);
    CHECK(j2.norm() == doctest::Approx(2.0 * j.norm()).epsilon(1e-13));
    CHECK(j2.abs_flux() == doctest::Approx(2.0 * j.abs_flux()).epsilon(1e-13));
  }
}

TEST_CASE("single-signed shapes are rejected, zero amplitude is fine") {
  std::vector<ContactSegment> segs{{Edge::Left, 0.25, 0.75, +1.0}};
  Grid g(8, 8, 1.0, 1.0, segs);
  CHECK_THROWS_AS(CurrentProfile(g, 0.5, ProfileShape::Cosine), ConfigError);
  CurrentProfile off(g, 0.0, ProfileShape::Cosine);
  CHECK(off.is_zero());
  CHECK(off.norm() == 0.0);
}

TEST_CASE("explicit face values must respect the insulated boundary") {
  std::vector<ContactSegment> segs{{Edge::Left, 0.0, 1.0, +1.0},
                                   {Edge::Right, 0.0, 1.0, -1.0}};
  Grid g(4, 4, 1.0, 1.0, segs);
  const auto& faces = g.boundary_faces();
  std::vector<double> vals(faces.size(), 0.0);
  for (size_t f = 0; f < faces.size(); ++f) {
    if (!faces[f].contact) continue;
    vals[f] = faces[f].edge == Edge::Left ? 1.0 : -1.0;
  }
  CurrentProfile j(g, vals);
  CHECK(std::abs(j.net_flux()) < 1e-14);

  std::vector<double> bad(faces.size(), 0.0);
  bad[0] = 1.0;  // bottom face, insulated
  CHECK_THROWS_AS(CurrentProfile(g, bad), ConfigError);
  CHECK_THROWS_AS(CurrentProfile(g, std::vector<double>(3, 0.0)), ConfigError);
}

TEST_CASE("amplitude_for_delta hits the target") {
  std::vector<ContactSegment> segs{{Edge::Left, 0.25, 0.75, +1.0},
                                   {Edge::Right, 0.25, 0.75, -1.0}};
  Grid g(24, 12, 2.0, 1.0, segs);
  const double eps = 0.5, target = 0.07;
  const double amp = amplitude_for_delta(g, ProfileShape::Cosine, eps, target);
  CurrentProfile j(g, amp, ProfileShape::Cosine);
  CHECK(eps * j.norm() == doctest::Approx(target).epsilon(1e-12));
  ModelParams p(eps, 1.0, j);
  CHECK(p.delta == doctest::Approx(target).epsilon(1e-12));
}

TEST_CASE("scalar field reductions and arithmetic") {
  Grid g(4, 3, 1.0, 1.0);
  ScalarField f(g);
  for (int k = 0; k < f.size(); ++k) f[k] = k - 5.0;
  CHECK(f.min() == doctest::Approx(-5.0));
  CHECK(f.max() == doctest::Approx(6.0));
  CHECK(f.max_abs() == doctest::Approx(6.0));
  CHECK(f.mean() == doctest::Approx(0.5));
  CHECK(f.integral() == doctest::Approx(0.5 * g.area()));

  ScalarField one(g, 1.0);
  ScalarField s = f + one;
  CHECK(s.mean() == doctest::Approx(1.5));
  s -= one;
  CHECK(s.mean() == doctest::Approx(0.5));
  ScalarField h = hadamard(f, f);
  CHECK(h.min() >= 0.0);
  CHECK((2.0 * f).max() == doctest::Approx(12.0));
}

TEST_CASE("mixing grids of different layout throws") {
  Grid a(4, 4, 1.0, 1.0);
  Grid b(4, 5, 1.0, 1.0);
  ScalarField fa(a), fb(b);
  CHECK_THROWS(fa += fb);
  CHECK(a.same_layout(a));
  CHECK_FALSE(a.same_layout(b));
}

TEST_CASE("polar join/split round-trips with the argument in (-pi, pi]") {
  Grid g(6, 6, 1.0, 1.0);
  ScalarField rho(g), chi(g);
  for (int k = 0; k < rho.size(); ++k) {
    rho[k] = 0.5 + 0.01 * k;
    chi[k] = -3.0 + 0.17 * k;  // crosses the branch cut
  }
  ComplexField u = join_polar(rho, chi);
  ScalarField r2(g), c2(g);
  split_polar(u, r2, c2);
  for (int k = 0; k < rho.size(); ++k) {
    CHECK(r2[k] == doctest::Approx(rho[k]).epsilon(1e-14));
    // Same angle modulo 2 pi.
    double d = std::remainder(c2[k] - chi[k], 2.0 * M_PI);
    CHECK(std::abs(d) < 1e-12);
    CHECK(c2[k] <= M_PI + 1e-15);
    CHECK(c2[k] > -M_PI - 1e-15);
  }
  ScalarField a2 = u.abs2();
  for (int k = 0; k < rho.size(); ++k)
    CHECK(a2[k] == doctest::Approx(rho[k] * rho[k]).epsilon(1e-14));
}

TEST_CASE("binary serialization round-trips exactly") {
  namespace fs = std::filesystem;
  Grid g(5, 7, 1.3, 0.9);
  ScalarField f(g);
  ComplexField u(g);
  for (int k = 0; k < f.size(); ++k) {
    f[k] = std::sin(0.37 * k) * 1e-7;
    u[k] = cplx(std::cos(0.11 * k), std::tan(0.05 * k + 0.1));
  }
  const fs::path dir = fs::temp_directory_path() / "glc_fields_test";
  fs::create_directories(dir);
  write_binary(f, (dir / "f.bin").string());
  write_binary(u, (dir / "u.bin").string());
  ScalarField f2 = read_binary_scalar(g, (dir / "f.bin").string());
  ComplexField u2 = read_binary_complex(g, (dir / "u.bin").string());
  for (int k = 0; k < f.size(); ++k) {
    CHECK(f2[k] == f[k]);
    CHECK(u2[k] == u[k]);
  }
  fs::remove_all(dir);
}
