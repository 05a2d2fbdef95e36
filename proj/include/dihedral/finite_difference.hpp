#ifndef DIHEDRAL_FINITE_DIFFERENCE_HPP
#define DIHEDRAL_FINITE_DIFFERENCE_HPP

// Second-order finite differences on node-centered grids: central in the
// interior, one-sided at boundary layers, tensor products at edges.

#include <array>

#include "dihedral/fields.hpp"

namespace dihedral::fd {

struct Stencil {
  std::array<int, 4> offset{};
  std::array<double, 4> weight{};
  int count = 0;
};

/// d/dx at node i of n nodes with spacing h.
inline Stencil first(int i, int n, double h) noexcept {
  const double s = 1.0 / (2.0 * h);
  if (i == 0) return {{0, 1, 2, 0}, {-3 * s, 4 * s, -s, 0}, 3};
  if (i == n - 1) return {{0, -1, -2, 0}, {3 * s, -4 * s, s, 0}, 3};
  return {{-1, 1, 0, 0}, {-s, s, 0, 0}, 2};
}

/// d^2/dx^2 at node i of n nodes with spacing h.
inline Stencil second(int i, int n, double h) noexcept {
  const double s = 1.0 / (h * h);
  if (i == 0) return {{0, 1, 2, 3}, {2 * s, -5 * s, 4 * s, -s}, 4};
  if (i == n - 1) return {{0, -1, -2, -3}, {2 * s, -5 * s, 4 * s, -s}, 4};
  return {{-1, 0, 1, 0}, {s, -2 * s, s, 0}, 3};
}

/// Partial derivative along `axis` at node `ijk`.
template <class T>
T d1(const Field<T>& f, const std::array<int, 3>& ijk, int axis) {
  const Grid& g = f.grid();
  const Stencil st = first(ijk[axis], g.n(axis), g.h(axis));
  const std::size_t base = g.index(ijk);
  const auto stride = static_cast<std::ptrdiff_t>(g.stride(axis));
  T acc{};
  for (int s = 0; s < st.count; ++s)
    acc = acc + st.weight[s] * f[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(base) +
                                                          st.offset[s] * stride)];
  return acc;
}

/// Second partial derivative d_a d_b at node `ijk`.
template <class T>
T d2(const Field<T>& f, const std::array<int, 3>& ijk, int a, int b) {
  const Grid& g = f.grid();
  const std::size_t base = g.index(ijk);
  T acc{};
  if (a == b) {
    const Stencil st = second(ijk[a], g.n(a), g.h(a));
    const auto stride = static_cast<std::ptrdiff_t>(g.stride(a));
    for (int s = 0; s < st.count; ++s)
      acc = acc + st.weight[s] * f[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(base) +
                                                            st.offset[s] * stride)];
    return acc;
  }
  const Stencil sa = first(ijk[a], g.n(a), g.h(a));
  const Stencil sb = first(ijk[b], g.n(b), g.h(b));
  const auto stra = static_cast<std::ptrdiff_t>(g.stride(a));
  const auto strb = static_cast<std::ptrdiff_t>(g.stride(b));
  for (int p = 0; p < sa.count; ++p)
    for (int q = 0; q < sb.count; ++q)
      acc = acc + (sa.weight[p] * sb.weight[q]) *
                      f[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(base) +
                                                 sa.offset[p] * stra + sb.offset[q] * strb)];
  return acc;
}

/// Gradient of a scalar field as a covector field.
inline CoVectorField gradient(const ScalarField& u) {
  const Grid& g = u.grid();
  CoVectorField out(g, Variance::Covariant);
  for (int k = 0; k < g.n(2); ++k)
    for (int j = 0; j < g.n(1); ++j)
      for (int i = 0; i < g.n(0); ++i) {
        const std::array<int, 3> ijk{i, j, k};
        out.at(i, j, k) = {d1(u, ijk, 0), d1(u, ijk, 1), d1(u, ijk, 2)};
      }
  return out;
}

/// Coordinate second derivatives d_i d_j u.
inline SymTensorField second_derivatives(const ScalarField& u) {
  const Grid& g = u.grid();
  SymTensorField out(g);
  for (int k = 0; k < g.n(2); ++k)
    for (int j = 0; j < g.n(1); ++j)
      for (int i = 0; i < g.n(0); ++i) {
        const std::array<int, 3> ijk{i, j, k};
        Sym3 s;
        for (int a = 0; a < 3; ++a)
          for (int b = a; b < 3; ++b) s(a, b) = d2(u, ijk, a, b);
        out.at(i, j, k) = s;
      }
  return out;
}

}  // namespace dihedral::fd

#endif  // DIHEDRAL_FINITE_DIFFERENCE_HPP
