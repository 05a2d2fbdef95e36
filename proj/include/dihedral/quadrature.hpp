#ifndef DIHEDRAL_QUADRATURE_HPP
#define DIHEDRAL_QUADRATURE_HPP

// Tensor-product trapezoid rules with metric weights. Summation order is
// fixed (lexicographic), so results are reproducible bit for bit.

#include <vector>

#include "dihedral/initial_data.hpp"

namespace dihedral {

inline double trapezoid_weight(const Grid& grid, const std::array<int, 3>& ijk) {
  double w = 1.0;
  for (int a = 0; a < 3; ++a) {
    const bool end = ijk[a] == 0 || ijk[a] == grid.n(a) - 1;
    w *= end ? 0.5 * grid.h(a) : grid.h(a);
  }
  return w;
}

/// int_M f dV_g.
inline double volume_integral(const InitialData& data, const ScalarField& f) {
  const Grid& grid = data.grid;
  double s = 0.0;
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) {
        const std::size_t n = grid.index(i, j, k);
        s += trapezoid_weight(grid, {i, j, k}) * std::sqrt(det(data.g[n])) * f[n];
      }
  return s;
}

/// Area element of a coordinate face at a node.
inline double face_area_element(const Sym3& g, Face f) {
  const int a = f.axis == 0 ? 1 : 0;
  const int b = f.axis == 2 ? 1 : 2;
  return std::sqrt(g(a, a) * g(b, b) - g(a, b) * g(a, b));
}

/// Trapezoid weights on a face, in the order of Grid::face_nodes.
inline std::vector<double> face_weights(const Grid& grid, Face f) {
  const int a = f.axis == 0 ? 1 : 0;
  const int b = f.axis == 2 ? 1 : 2;
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(grid.n(a)) * grid.n(b));
  for (int q = 0; q < grid.n(b); ++q)
    for (int p = 0; p < grid.n(a); ++p) {
      const double wa = (p == 0 || p == grid.n(a) - 1) ? 0.5 * grid.h(a) : grid.h(a);
      const double wb = (q == 0 || q == grid.n(b) - 1) ? 0.5 * grid.h(b) : grid.h(b);
      w.push_back(wa * wb);
    }
  return w;
}

/// int_F f dsigma_g for values given at the face nodes.
inline double face_integral(const InitialData& data, Face f, const std::vector<double>& values) {
  const auto nodes = data.grid.face_nodes(f);
  const auto w = face_weights(data.grid, f);
  double s = 0.0;
  for (std::size_t q = 0; q < nodes.size(); ++q) s += w[q] * face_area_element(data.g[nodes[q]], f) * values[q];
  return s;
}

}  // namespace dihedral

#endif  // DIHEDRAL_QUADRATURE_HPP
