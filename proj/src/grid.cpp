#include "glc/grid.hpp"

#include <algorithm>
#include <cmath>

#include "glc/errors.hpp"

namespace glc {

const char* edge_name(Edge e) {
  switch (e) {
    case Edge::Bottom: return "bottom";
    case Edge::Right: return "right";
    case Edge::Top: return "top";
    case Edge::Left: return "left";
  }
  return "?";
}

Edge edge_from_name(const std::string& name) {
  if (name == "bottom") return Edge::Bottom;
  if (name == "right") return Edge::Right;
  if (name == "top") return Edge::Top;
  if (name == "left") return Edge::Left;
  throw ConfigError("unknown edge name '" + name + "' (expected left/right/bottom/top)");
}

namespace {

double edge_length(Edge e, double lx, double ly) {
  return (e == Edge::Left || e == Edge::Right) ? ly : lx;
}

}  // namespace

Grid::Grid(int nx, int ny, double lx, double ly, std::vector<ContactSegment> contacts)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly), contacts_(std::move(contacts)) {
  if (nx_ <= 0 || ny_ <= 0)
    throw ConfigError("grid resolution must be positive");
  if (!(lx_ > 0.0) || !(ly_ > 0.0))
    throw ConfigError("domain extents must be positive");
  hx_ = lx_ / nx_;
  hy_ = ly_ / ny_;

  // Validate contact intervals: inside their edge, positive length,
  // non-overlapping per edge.
  for (const auto& c : contacts_) {
    const double len = edge_length(c.edge, lx_, ly_);
    const double tol = 1e-12 * len;
    if (c.lo < -tol || c.hi > len + tol || !(c.hi > c.lo))
      throw ConfigError("contact interval out of range on edge " +
                        std::string(edge_name(c.edge)));
    if (c.polarity == 0.0)
      throw ConfigError("contact polarity must be nonzero");
  }
  for (size_t a = 0; a < contacts_.size(); ++a)
    for (size_t b = a + 1; b < contacts_.size(); ++b) {
      if (contacts_[a].edge != contacts_[b].edge) continue;
      const double lo = std::max(contacts_[a].lo, contacts_[b].lo);
      const double hi = std::min(contacts_[a].hi, contacts_[b].hi);
      if (hi - lo > 1e-12 * edge_length(contacts_[a].edge, lx_, ly_))
        throw ConfigError("overlapping contact intervals on edge " +
                          std::string(edge_name(contacts_[a].edge)));
    }

  // Perimeter cycle: bottom (i ascending), right (j ascending),
  // top (i descending), left (j descending).
  faces_.reserve(2 * (nx_ + ny_));
  auto push = [&](Edge e, int i, int j) {
    BoundaryFace f;
    f.edge = e;
    f.cell = idx(i, j);
    f.length = (e == Edge::Left || e == Edge::Right) ? hy_ : hx_;
    f.cx = (e == Edge::Left) ? 0.0 : (e == Edge::Right) ? lx_ : cell_x(i);
    f.cy = (e == Edge::Bottom) ? 0.0 : (e == Edge::Top) ? ly_ : cell_y(j);
    f.s = (e == Edge::Left || e == Edge::Right) ? f.cy : f.cx;
    // A face is contact when its midpoint lies in a contact interval.
    for (size_t k = 0; k < contacts_.size(); ++k) {
      const auto& c = contacts_[k];
      if (c.edge != e) continue;
      const double tol = 1e-12 * edge_length(e, lx_, ly_);
      if (f.s >= c.lo - tol && f.s <= c.hi + tol) {
        f.contact = true;
        f.segment = static_cast<int>(k);
        break;
      }
    }
    if (f.contact) ++n_contact_;
    faces_.push_back(f);
  };
  for (int i = 0; i < nx_; ++i) push(Edge::Bottom, i, 0);
  for (int j = 0; j < ny_; ++j) push(Edge::Right, nx_ - 1, j);
  for (int i = nx_ - 1; i >= 0; --i) push(Edge::Top, i, ny_ - 1);
  for (int j = ny_ - 1; j >= 0; --j) push(Edge::Left, 0, j);
}

bool Grid::same_layout(const Grid& other) const {
  return nx_ == other.nx_ && ny_ == other.ny_ && lx_ == other.lx_ && ly_ == other.ly_;
}

}  // namespace glc
