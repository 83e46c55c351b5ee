#pragma once

// Cell-centered scalar/complex fields and staggered face vector fields.
// Fields carry a pointer to their grid; mixing fields from different grid
// layouts is a programming error and throws.

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "glc/grid.hpp"

namespace glc {

using cplx = std::complex<double>;

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : g_(&g), v_(g.num_cells(), fill) {}

  const Grid& grid() const { return *g_; }
  bool has_grid() const { return g_ != nullptr; }
  int size() const { return static_cast<int>(v_.size()); }
  double& operator[](int k) { return v_[k]; }
  double operator[](int k) const { return v_[k]; }
  double& at(int i, int j) { return v_[g_->idx(i, j)]; }
  double at(int i, int j) const { return v_[g_->idx(i, j)]; }
  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }

  double min() const;
  double max() const;
  double max_abs() const;
  // Area-weighted mean; on a uniform grid this is the plain average.
  double mean() const;
  // Integral over the domain, sum of value * cell_area.
  double integral() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

 private:
  const Grid* g_ = nullptr;
  std::vector<double> v_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
// Elementwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

class ComplexField {
 public:
  ComplexField() = default;
  explicit ComplexField(const Grid& g, cplx fill = {0.0, 0.0})
      : g_(&g), v_(g.num_cells(), fill) {}

  const Grid& grid() const { return *g_; }
  int size() const { return static_cast<int>(v_.size()); }
  cplx& operator[](int k) { return v_[k]; }
  const cplx& operator[](int k) const { return v_[k]; }
  const std::vector<cplx>& data() const { return v_; }
  std::vector<cplx>& data() { return v_; }

  ScalarField real() const;
  ScalarField imag() const;
  ScalarField abs() const;
  ScalarField abs2() const;

 private:
  const Grid* g_ = nullptr;
  std::vector<cplx> v_;
};

// Staggered face values: x-faces at (i*hx, (j+1/2)hy), i = 0..nx (the i=0 and
// i=nx columns are domain-boundary faces); y-faces analogously. Gradients
// write zero on boundary faces (homogeneous Neumann closure); divergence
// consumes whatever the face values are, so an inhomogeneous normal flux can
// be injected by filling boundary faces before calling divergence.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Grid& g)
      : g_(&g), x_((g.nx() + 1) * g.ny(), 0.0), y_(g.nx() * (g.ny() + 1), 0.0) {}

  const Grid& grid() const { return *g_; }
  double& x(int i, int j) { return x_[j * (g_->nx() + 1) + i]; }  // i in [0, nx]
  double x(int i, int j) const { return x_[j * (g_->nx() + 1) + i]; }
  double& y(int i, int j) { return y_[j * g_->nx() + i]; }  // j in [0, ny]
  double y(int i, int j) const { return y_[j * g_->nx() + i]; }
  const std::vector<double>& xdata() const { return x_; }
  const std::vector<double>& ydata() const { return y_; }

 private:
  const Grid* g_ = nullptr;
  std::vector<double> x_, y_;
};

// rho * exp(i*chi) and its inverse; split maps the argument to (-pi, pi].
ComplexField join_polar(const ScalarField& rho, const ScalarField& chi);
void split_polar(const ComplexField& u, ScalarField& rho, ScalarField& chi);

void require_same_grid(const Grid& a, const Grid& b, const char* where);

// Serialization: CSV rows "x,y,value" (complex: "x,y,re,im") at cell centers,
// and a flat row-major little-endian float64 dump (complex: re,im interleaved).
void write_csv(const ScalarField& f, std::ostream& os);
void write_csv(const ComplexField& f, std::ostream& os);
void write_csv(const ScalarField& f, const std::string& path);
void write_csv(const ComplexField& f, const std::string& path);
void write_binary(const ScalarField& f, const std::string& path);
void write_binary(const ComplexField& f, const std::string& path);
ScalarField read_binary_scalar(const Grid& g, const std::string& path);
ComplexField read_binary_complex(const Grid& g, const std::string& path);

}  // namespace glc
