#include "glc/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>

#include "glc/errors.hpp"

namespace glc {

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (&a == &b || a.same_layout(b)) return;
  throw std::invalid_argument(std::string(where) + ": fields live on different grids");
}

double ScalarField::min() const { return *std::min_element(v_.begin(), v_.end()); }
double ScalarField::max() const { return *std::max_element(v_.begin(), v_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double ScalarField::mean() const { return integral() / g_->area(); }

double ScalarField::integral() const {
  double s = 0.0;
  for (double x : v_) s += x;
  return s * g_->cell_area();
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(*g_, o.grid(), "ScalarField::operator+=");
  for (size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(*g_, o.grid(), "ScalarField::operator-=");
  for (size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { a += b; return a; }
ScalarField operator-(ScalarField a, const ScalarField& b) { a -= b; return a; }
ScalarField operator*(double s, ScalarField a) { a *= s; return a; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "hadamard");
  ScalarField r(a.grid());
  for (int k = 0; k < a.size(); ++k) r[k] = a[k] * b[k];
  return r;
}

ScalarField ComplexField::real() const {
  ScalarField r(*g_);
  for (size_t k = 0; k < v_.size(); ++k) r[static_cast<int>(k)] = v_[k].real();
  return r;
}

ScalarField ComplexField::imag() const {
  ScalarField r(*g_);
  for (size_t k = 0; k < v_.size(); ++k) r[static_cast<int>(k)] = v_[k].imag();
  return r;
}

ScalarField ComplexField::abs() const {
  ScalarField r(*g_);
  for (size_t k = 0; k < v_.size(); ++k) r[static_cast<int>(k)] = std::abs(v_[k]);
  return r;
}

ScalarField ComplexField::abs2() const {
  ScalarField r(*g_);
  for (size_t k = 0; k < v_.size(); ++k) r[static_cast<int>(k)] = std::norm(v_[k]);
  return r;
}

ComplexField join_polar(const ScalarField& rho, const ScalarField& chi) {
  require_same_grid(rho.grid(), chi.grid(), "join_polar");
  ComplexField u(rho.grid());
  for (int k = 0; k < rho.size(); ++k)
    u[k] = rho[k] * cplx(std::cos(chi[k]), std::sin(chi[k]));
  return u;
}

void split_polar(const ComplexField& u, ScalarField& rho, ScalarField& chi) {
  rho = ScalarField(u.grid());
  chi = ScalarField(u.grid());
  for (int k = 0; k < u.size(); ++k) {
    rho[k] = std::abs(u[k]);
    chi[k] = std::atan2(u[k].imag(), u[k].real());  // in (-pi, pi]
  }
}

namespace {

template <typename F, typename Row>
void csv_impl(const F& f, std::ostream& os, Row row) {
  const Grid& g = f.grid();
  os.precision(17);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      row(os, g.cell_x(i), g.cell_y(j), f[g.idx(i, j)]);
}

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

void write_raw(std::ostream& os, const double* p, size_t n) {
  os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}

void read_raw(std::istream& is, double* p, size_t n, const std::string& path) {
  is.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
  if (!is) throw std::runtime_error("short read from " + path);
}

}  // namespace

void write_csv(const ScalarField& f, std::ostream& os) {
  os << "x,y,value\n";
  csv_impl(f, os, [](std::ostream& o, double x, double y, double v) {
    o << x << ',' << y << ',' << v << '\n';
  });
}

void write_csv(const ComplexField& f, std::ostream& os) {
  os << "x,y,re,im\n";
  csv_impl(f, os, [](std::ostream& o, double x, double y, cplx v) {
    o << x << ',' << y << ',' << v.real() << ',' << v.imag() << '\n';
  });
}

void write_csv(const ScalarField& f, const std::string& path) {
  auto os = open_out(path, false);
  write_csv(f, os);
}

void write_csv(const ComplexField& f, const std::string& path) {
  auto os = open_out(path, false);
  write_csv(f, os);
}

void write_binary(const ScalarField& f, const std::string& path) {
  auto os = open_out(path, true);
  write_raw(os, f.data().data(), f.data().size());
}

void write_binary(const ComplexField& f, const std::string& path) {
  auto os = open_out(path, true);
  // std::complex<double> is layout-compatible with double[2] (re, im).
  write_raw(os, reinterpret_cast<const double*>(f.data().data()), 2 * f.data().size());
}

ScalarField read_binary_scalar(const Grid& g, const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  ScalarField f(g);
  read_raw(is, f.data().data(), f.data().size(), path);
  return f;
}

ComplexField read_binary_complex(const Grid& g, const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  ComplexField f(g);
  read_raw(is, reinterpret_cast<double*>(f.data().data()), 2 * f.data().size(), path);
  return f;
}

}  // namespace glc
