#pragma once

// Applied normal current on the boundary. J > 0 enters the sample, matching
// the boundary condition -sigma * dphi/dnu = J. Profiles always carry zero
// net flux: after the shape and amplitude are applied, any imbalance is
// removed by an additive constant on the contact set (and a profile whose
// shape cannot be balanced that way, i.e. single-signed, is rejected).

#include <string>
#include <vector>

#include "glc/grid.hpp"

namespace glc {

enum class ProfileShape {
  Uniform,  // J = amplitude * polarity on each face of the segment
  Cosine,   // J = amplitude * polarity * sin^2(pi*s01), s01 in [0,1] along the segment
};

ProfileShape shape_from_name(const std::string& name);
const char* shape_name(ProfileShape s);

class CurrentProfile {
 public:
  // Named shape on the grid's contact segments.
  CurrentProfile(const Grid& g, double amplitude, ProfileShape shape);
  // Explicit per-boundary-face values (cyclic face order). Values must vanish
  // on insulated faces; the same balancing rules apply.
  CurrentProfile(const Grid& g, const std::vector<double>& face_values);

  const Grid& grid() const { return *g_; }
  double amplitude() const { return amplitude_; }
  ProfileShape shape() const { return shape_; }
  // Per boundary face, cyclic order matching Grid::boundary_faces().
  const std::vector<double>& values() const { return j_; }
  double operator[](int f) const { return j_[f]; }

  double net_flux() const;   // sum of J * face_length (== 0 up to rounding)
  double abs_flux() const;   // sum of |J| * face_length
  // Boundary-norm surrogate: L2 over the boundary plus the L2 norm of the
  // tangential first difference around the perimeter cycle. One-homogeneous
  // in the amplitude, which is all the delta-scaling experiments need.
  double norm() const { return norm_; }
  bool is_zero() const { return norm_ == 0.0; }

  // Same profile scaled by a constant factor.
  CurrentProfile scaled(double factor) const;

 private:
  void balance_and_finalize();
  const Grid* g_ = nullptr;
  double amplitude_ = 0.0;
  ProfileShape shape_ = ProfileShape::Uniform;
  std::vector<double> j_;
  double norm_ = 0.0;
};

struct ModelParams {
  double epsilon = 1.0;  // in (0, 1]
  double sigma = 1.0;    // > 0
  double delta = 0.0;    // epsilon * ||J||, derived

  ModelParams() = default;
  ModelParams(double eps, double sig, const CurrentProfile& j);
};

// Amplitude that makes epsilon * ||J|| hit delta_target for the given shape
// on this grid (uses one-homogeneity of the norm surrogate).
double amplitude_for_delta(const Grid& g, ProfileShape shape, double epsilon,
                           double delta_target);

}  // namespace glc
