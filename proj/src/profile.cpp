#include "glc/profile.hpp"

#include <cmath>
#include <numbers>

#include "glc/errors.hpp"

namespace glc {

ProfileShape shape_from_name(const std::string& name) {
  if (name == "uniform") return ProfileShape::Uniform;
  if (name == "cosine") return ProfileShape::Cosine;
  throw ConfigError("unknown profile shape '" + name + "' (expected uniform/cosine)");
}

const char* shape_name(ProfileShape s) {
  return s == ProfileShape::Uniform ? "uniform" : "cosine";
}

CurrentProfile::CurrentProfile(const Grid& g, double amplitude, ProfileShape shape)
    : g_(&g), amplitude_(amplitude), shape_(shape), j_(g.boundary_faces().size(), 0.0) {
  if (amplitude != 0.0 && g.num_contact_faces() == 0)
    throw ConfigError("nonzero current on a grid with no contact faces");
  const auto& faces = g.boundary_faces();
  const auto& segs = g.contacts();
  for (size_t f = 0; f < faces.size(); ++f) {
    if (!faces[f].contact) continue;
    const auto& seg = segs[faces[f].segment];
    double w = 1.0;
    if (shape == ProfileShape::Cosine) {
      const double s01 = (faces[f].s - seg.lo) / (seg.hi - seg.lo);
      const double sn = std::sin(std::numbers::pi * s01);
      w = sn * sn;
    }
    j_[f] = amplitude * seg.polarity * w;
  }
  balance_and_finalize();
}

CurrentProfile::CurrentProfile(const Grid& g, const std::vector<double>& face_values)
    : g_(&g), j_(face_values) {
  const auto& faces = g.boundary_faces();
  if (j_.size() != faces.size())
    throw ConfigError("face value list does not match boundary face count");
  for (size_t f = 0; f < faces.size(); ++f)
    if (!faces[f].contact && j_[f] != 0.0)
      throw ConfigError("current profile is nonzero on an insulated face");
  double amax = 0.0;
  for (double v : j_) amax = std::max(amax, std::abs(v));
  amplitude_ = amax;
  balance_and_finalize();
}

void CurrentProfile::balance_and_finalize() {
  const auto& faces = g_->boundary_faces();

  // Zero net flux requires inflow and outflow; a single-signed shape cannot
  // be balanced by the additive shift below without wiping it out.
  double jmin = 0.0, jmax = 0.0;
  for (size_t f = 0; f < faces.size(); ++f) {
    if (!faces[f].contact) continue;
    jmin = std::min(jmin, j_[f]);
    jmax = std::max(jmax, j_[f]);
  }
  const bool strictly_positive = jmax > 0.0 && jmin >= 0.0;
  const bool strictly_negative = jmin < 0.0 && jmax <= 0.0;
  if (strictly_positive || strictly_negative)
    throw ConfigError("net boundary flux cannot be zeroed: profile shape is single-signed");

  double flux = 0.0, contact_len = 0.0;
  for (size_t f = 0; f < faces.size(); ++f) {
    flux += j_[f] * faces[f].length;
    if (faces[f].contact) contact_len += faces[f].length;
  }
  if (flux != 0.0 && contact_len > 0.0) {
    const double shift = flux / contact_len;
    for (size_t f = 0; f < faces.size(); ++f)
      if (faces[f].contact) j_[f] -= shift;
  }

  // Norm surrogate: boundary L2 plus tangential first-difference L2 around
  // the perimeter cycle (insulated faces participate with J = 0).
  double l2 = 0.0;
  for (size_t f = 0; f < faces.size(); ++f) l2 += j_[f] * j_[f] * faces[f].length;
  double td = 0.0;
  const size_t nf = faces.size();
  for (size_t f = 0; f < nf; ++f) {
    const size_t fn = (f + 1) % nf;
    const double ds = 0.5 * (faces[f].length + faces[fn].length);
    const double d = (j_[fn] - j_[f]) / ds;
    td += d * d * ds;
  }
  norm_ = std::sqrt(l2) + std::sqrt(td);
}

double CurrentProfile::net_flux() const {
  const auto& faces = g_->boundary_faces();
  double s = 0.0;
  for (size_t f = 0; f < faces.size(); ++f) s += j_[f] * faces[f].length;
  return s;
}

double CurrentProfile::abs_flux() const {
  const auto& faces = g_->boundary_faces();
  double s = 0.0;
  for (size_t f = 0; f < faces.size(); ++f) s += std::abs(j_[f]) * faces[f].length;
  return s;
}

CurrentProfile CurrentProfile::scaled(double factor) const {
  CurrentProfile p(*this);
  for (double& v : p.j_) v *= factor;
  p.amplitude_ *= std::abs(factor);
  p.norm_ *= std::abs(factor);
  return p;
}

ModelParams::ModelParams(double eps, double sig, const CurrentProfile& j)
    : epsilon(eps), sigma(sig), delta(eps * j.norm()) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw ConfigError("epsilon must lie in (0, 1]");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
}

double amplitude_for_delta(const Grid& g, ProfileShape shape, double epsilon,
                           double delta_target) {
  if (delta_target == 0.0) return 0.0;
  const CurrentProfile unit(g, 1.0, shape);
  if (unit.norm() == 0.0)
    throw ConfigError("cannot target a nonzero delta without contact faces");
  return delta_target / (epsilon * unit.norm());
}

}  // namespace glc
