#ifndef DIHEDRAL_GRID_HPP
#define DIHEDRAL_GRID_HPP

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "dihedral/errors.hpp"
#include "dihedral/tensor.hpp"

namespace dihedral {

enum class Side { Low = 0, High = 1 };

/// One of the six coordinate faces of the box.
struct Face {
  int axis = 0;
  Side side = Side::Low;

  /// Sign of the outward coordinate normal.
  constexpr double outward_sign() const noexcept { return side == Side::Low ? -1.0 : 1.0; }
  constexpr int index() const noexcept { return 2 * axis + static_cast<int>(side); }
  static constexpr Face from_index(int i) noexcept { return Face{i / 2, static_cast<Side>(i % 2)}; }
  friend constexpr bool operator==(Face a, Face b) noexcept {
    return a.axis == b.axis && a.side == b.side;
  }

  std::string name() const {
    static const char* axes[] = {"x1", "x2", "x3"};
    return std::string(axes[axis]) + (side == Side::Low ? "-low" : "-high");
  }
};

inline std::array<Face, 6> all_faces() noexcept {
  return {Face{0, Side::Low}, Face{0, Side::High}, Face{1, Side::Low},
          Face{1, Side::High}, Face{2, Side::Low}, Face{2, Side::High}};
}

/// An edge of the box: runs along `axis`, sits on the faces (a, side_a) and
/// (b, side_b) with a < b the two remaining axes.
struct Edge {
  int axis = 0;
  Side side_a = Side::Low;
  Side side_b = Side::Low;

  constexpr int axis_a() const noexcept { return axis == 0 ? 1 : 0; }
  constexpr int axis_b() const noexcept { return axis == 2 ? 1 : 2; }
  constexpr Face face_a() const noexcept { return Face{axis_a(), side_a}; }
  constexpr Face face_b() const noexcept { return Face{axis_b(), side_b}; }
  constexpr int index() const noexcept {
    return 4 * axis + 2 * static_cast<int>(side_a) + static_cast<int>(side_b);
  }
  static constexpr Edge from_index(int i) noexcept {
    return Edge{i / 4, static_cast<Side>((i / 2) % 2), static_cast<Side>(i % 2)};
  }
  std::string name() const {
    return "edge(" + face_a().name() + "," + face_b().name() + ")";
  }
};

inline std::array<Edge, 12> all_edges() noexcept {
  std::array<Edge, 12> out{};
  for (int i = 0; i < 12; ++i) out[static_cast<std::size_t>(i)] = Edge::from_index(i);
  return out;
}

/// Node-centered uniform grid on a coordinate box.
class Grid {
 public:
  Grid() = default;

  Grid(std::array<int, 3> dims, std::array<double, 3> lo, std::array<double, 3> hi)
      : dims_(dims), lo_(lo), hi_(hi) {
    for (int a = 0; a < 3; ++a) {
      if (dims_[a] < 5) throw InputError("grid needs at least 5 nodes per axis");
      if (!(hi_[a] > lo_[a])) throw InputError("grid box extents must satisfy lo < hi");
      h_[a] = (hi_[a] - lo_[a]) / (dims_[a] - 1);
    }
  }

  /// n^3 nodes on the unit cube.
  static Grid unit_cube(int n) { return Grid({n, n, n}, {0, 0, 0}, {1, 1, 1}); }

  const std::array<int, 3>& dims() const noexcept { return dims_; }
  int n(int axis) const noexcept { return dims_[axis]; }
  const std::array<double, 3>& lo() const noexcept { return lo_; }
  const std::array<double, 3>& hi() const noexcept { return hi_; }
  const std::array<double, 3>& spacing() const noexcept { return h_; }
  double h(int axis) const noexcept { return h_[axis]; }
  double max_spacing() const noexcept { return std::max({h_[0], h_[1], h_[2]}); }
  double diameter() const noexcept {
    double s = 0.0;
    for (int a = 0; a < 3; ++a) s += (hi_[a] - lo_[a]) * (hi_[a] - lo_[a]);
    return std::sqrt(s);
  }

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  }
  std::size_t index(int i, int j, int k) const noexcept {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_[0]) * (static_cast<std::size_t>(j) +
                                                 static_cast<std::size_t>(dims_[1]) * k);
  }
  std::size_t index(const std::array<int, 3>& ijk) const noexcept {
    return index(ijk[0], ijk[1], ijk[2]);
  }
  std::array<int, 3> ijk(std::size_t idx) const noexcept {
    const int i = static_cast<int>(idx % dims_[0]);
    const std::size_t r = idx / dims_[0];
    return {i, static_cast<int>(r % dims_[1]), static_cast<int>(r / dims_[1])};
  }
  std::size_t stride(int axis) const noexcept {
    return axis == 0 ? 1
                     : (axis == 1 ? static_cast<std::size_t>(dims_[0])
                                  : static_cast<std::size_t>(dims_[0]) * dims_[1]);
  }

  double coord(int axis, int i) const noexcept { return lo_[axis] + i * h_[axis]; }
  Vec3 position(int i, int j, int k) const noexcept {
    return {coord(0, i), coord(1, j), coord(2, k)};
  }
  Vec3 position(const std::array<int, 3>& ijk) const noexcept {
    return position(ijk[0], ijk[1], ijk[2]);
  }

  int face_layer(Face f) const noexcept { return f.side == Side::Low ? 0 : dims_[f.axis] - 1; }
  bool on_face(const std::array<int, 3>& ijk, Face f) const noexcept {
    return ijk[f.axis] == face_layer(f);
  }
  bool on_boundary(const std::array<int, 3>& ijk) const noexcept {
    for (int a = 0; a < 3; ++a)
      if (ijk[a] == 0 || ijk[a] == dims_[a] - 1) return true;
    return false;
  }

  /// Node indices of a face, ordered with the lower remaining axis fastest.
  std::vector<std::size_t> face_nodes(Face f) const {
    const int a = f.axis == 0 ? 1 : 0;
    const int b = f.axis == 2 ? 1 : 2;
    std::vector<std::size_t> out;
    out.reserve(static_cast<std::size_t>(dims_[a]) * dims_[b]);
    std::array<int, 3> ijk{};
    ijk[f.axis] = face_layer(f);
    for (int q = 0; q < dims_[b]; ++q)
      for (int p = 0; p < dims_[a]; ++p) {
        ijk[a] = p;
        ijk[b] = q;
        out.push_back(index(ijk));
      }
    return out;
  }

  /// Node indices along an edge in increasing coordinate order.
  std::vector<std::size_t> edge_nodes(Edge e) const {
    std::vector<std::size_t> out;
    std::array<int, 3> ijk{};
    ijk[e.axis_a()] = face_layer(e.face_a());
    ijk[e.axis_b()] = face_layer(e.face_b());
    for (int s = 0; s < dims_[e.axis]; ++s) {
      ijk[e.axis] = s;
      out.push_back(index(ijk));
    }
    return out;
  }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.dims_ == b.dims_ && a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  std::array<int, 3> dims_{5, 5, 5};
  std::array<double, 3> lo_{0, 0, 0};
  std::array<double, 3> hi_{1, 1, 1};
  std::array<double, 3> h_{0.25, 0.25, 0.25};
};

}  // namespace dihedral

#endif  // DIHEDRAL_GRID_HPP
