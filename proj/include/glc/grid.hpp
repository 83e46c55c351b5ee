#pragma once

// Cell-centered uniform rectangular grid on [0,lx] x [0,ly] with a tagged
// boundary (contact vs insulated faces). Cells are indexed row-major,
// idx = j*nx + i, centers at ((i+1/2)hx, (j+1/2)hy). Boundary faces are
// enumerated once, in a fixed cyclic order around the perimeter (bottom
// left-to-right, right bottom-to-top, top right-to-left, left top-to-bottom),
// so all downstream loops and the tangential-difference seminorm are
// deterministic.

#include <cstddef>
#include <string>
#include <vector>

namespace glc {

enum class Edge { Bottom, Right, Top, Left };

const char* edge_name(Edge e);
Edge edge_from_name(const std::string& name);

// A contact interval on one edge, in arc coordinate along that edge
// (x for bottom/top, y for left/right), with a polarity that signed shapes
// multiply (+1 injects, -1 extracts).
struct ContactSegment {
  Edge edge = Edge::Left;
  double lo = 0.0;
  double hi = 0.0;
  double polarity = 1.0;
};

struct BoundaryFace {
  Edge edge = Edge::Left;
  int cell = 0;        // adjacent cell, linear index
  double length = 0.0; // hy on left/right faces, hx on bottom/top faces
  double cx = 0.0;     // face midpoint
  double cy = 0.0;
  double s = 0.0;      // arc coordinate of the midpoint along its edge
  bool contact = false;
  int segment = -1;    // index into contact segments, -1 if insulated
};

class Grid {
 public:
  Grid(int nx, int ny, double lx, double ly,
       std::vector<ContactSegment> contacts = {});

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  int num_cells() const { return nx_ * ny_; }
  double cell_area() const { return hx_ * hy_; }
  double area() const { return lx_ * ly_; }

  int idx(int i, int j) const { return j * nx_ + i; }
  double cell_x(int i) const { return (i + 0.5) * hx_; }
  double cell_y(int j) const { return (j + 0.5) * hy_; }

  // All boundary faces in cyclic perimeter order; size 2*(nx+ny).
  const std::vector<BoundaryFace>& boundary_faces() const { return faces_; }
  const std::vector<ContactSegment>& contacts() const { return contacts_; }
  int num_contact_faces() const { return n_contact_; }

  bool same_layout(const Grid& other) const;

 private:
  int nx_, ny_;
  double lx_, ly_, hx_, hy_;
  std::vector<ContactSegment> contacts_;
  std::vector<BoundaryFace> faces_;
  int n_contact_ = 0;
};

}  // namespace glc
