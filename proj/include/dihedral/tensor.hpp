#ifndef DIHEDRAL_TENSOR_HPP
#define DIHEDRAL_TENSOR_HPP

// Small fixed-size tensors in three dimensions. Index placement is the
// caller's business: the same types hold covariant and contravariant data.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace dihedral {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Symmetric 3x3 tensor stored as (xx, xy, xz, yy, yz, zz).
struct Sym3 {
  std::array<double, 6> c{};

  static constexpr std::size_t slot(int i, int j) noexcept {
    constexpr std::size_t table[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return table[i][j];
  }

  constexpr double operator()(int i, int j) const noexcept { return c[slot(i, j)]; }
  constexpr double& operator()(int i, int j) noexcept { return c[slot(i, j)]; }

  static constexpr Sym3 identity() noexcept { return Sym3{{1, 0, 0, 1, 0, 1}}; }
  static constexpr Sym3 diagonal(double a, double b, double d) noexcept {
    return Sym3{{a, 0, 0, b, 0, d}};
  }
};

constexpr Vec3 operator+(const Vec3& a, const Vec3& b) noexcept {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
constexpr Vec3 operator-(const Vec3& a, const Vec3& b) noexcept {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
constexpr Vec3 operator*(double s, const Vec3& a) noexcept {
  return {s * a[0], s * a[1], s * a[2]};
}
constexpr Vec3 operator*(const Vec3& a, double s) noexcept { return s * a; }
constexpr Vec3& operator+=(Vec3& a, const Vec3& b) noexcept {
  for (int i = 0; i < 3; ++i) a[i] += b[i];
  return a;
}

constexpr Sym3 operator+(const Sym3& a, const Sym3& b) noexcept {
  Sym3 r;
  for (std::size_t i = 0; i < 6; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}
constexpr Sym3 operator-(const Sym3& a, const Sym3& b) noexcept {
  Sym3 r;
  for (std::size_t i = 0; i < 6; ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}
constexpr Sym3 operator*(double s, const Sym3& a) noexcept {
  Sym3 r;
  for (std::size_t i = 0; i < 6; ++i) r.c[i] = s * a.c[i];
  return r;
}
constexpr Sym3 operator*(const Sym3& a, double s) noexcept { return s * a; }
constexpr Sym3& operator+=(Sym3& a, const Sym3& b) noexcept {
  for (std::size_t i = 0; i < 6; ++i) a.c[i] += b.c[i];
  return a;
}

constexpr Mat3 operator+(const Mat3& a, const Mat3& b) noexcept {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] + b[i][j];
  return r;
}
constexpr Mat3 operator-(const Mat3& a, const Mat3& b) noexcept {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] - b[i][j];
  return r;
}
constexpr Mat3 operator*(double s, const Mat3& a) noexcept {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = s * a[i][j];
  return r;
}
constexpr Mat3& operator+=(Mat3& a, const Mat3& b) noexcept {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] += b[i][j];
  return a;
}

constexpr double dot(const Vec3& a, const Vec3& b) noexcept {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double det(const Sym3& g) noexcept {
  return g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(1, 2)) -
         g(0, 1) * (g(0, 1) * g(2, 2) - g(1, 2) * g(0, 2)) +
         g(0, 2) * (g(0, 1) * g(1, 2) - g(1, 1) * g(0, 2));
}

inline Sym3 inverse(const Sym3& g) noexcept {
  const double d = det(g);
  Sym3 r;
  r(0, 0) = (g(1, 1) * g(2, 2) - g(1, 2) * g(1, 2)) / d;
  r(0, 1) = (g(0, 2) * g(1, 2) - g(0, 1) * g(2, 2)) / d;
  r(0, 2) = (g(0, 1) * g(1, 2) - g(0, 2) * g(1, 1)) / d;
  r(1, 1) = (g(0, 0) * g(2, 2) - g(0, 2) * g(0, 2)) / d;
  r(1, 2) = (g(0, 1) * g(0, 2) - g(0, 0) * g(1, 2)) / d;
  r(2, 2) = (g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1)) / d;
  return r;
}

/// Leading principal minors all positive.
inline bool is_positive_definite(const Sym3& g) noexcept {
  const double m1 = g(0, 0);
  const double m2 = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
  return m1 > 0.0 && m2 > 0.0 && det(g) > 0.0;
}

/// a^i = m^{ij} b_j
inline Vec3 raise(const Sym3& m, const Vec3& b) noexcept {
  Vec3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i] += m(i, j) * b[j];
  return r;
}

/// m(a, b) = m_{ij} a^i b^j
inline double contract(const Sym3& m, const Vec3& a, const Vec3& b) noexcept {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += m(i, j) * a[i] * b[j];
  return s;
}

/// g^{ij} t_{ij}
inline double trace(const Sym3& ginv, const Sym3& t) noexcept {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += ginv(i, j) * t(i, j);
  return s;
}

/// g^{ik} g^{jl} a_{ij} b_{kl}
inline double inner(const Sym3& ginv, const Sym3& a, const Sym3& b) noexcept {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) s += ginv(i, k) * ginv(j, l) * a(i, j) * b(k, l);
  return s;
}

inline double norm(const Sym3& ginv, const Sym3& a) noexcept {
  return std::sqrt(std::max(0.0, inner(ginv, a, a)));
}

/// |w|_g for a covector w.
inline double conorm(const Sym3& ginv, const Vec3& w) noexcept {
  return std::sqrt(std::max(0.0, contract(ginv, w, w)));
}

/// Symmetrized outer product a_i b_j + a_j b_i.
inline Sym3 sym_outer(const Vec3& a, const Vec3& b) noexcept {
  Sym3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) r(i, j) = a[i] * b[j] + a[j] * b[i];
  return r;
}

inline Sym3 outer(const Vec3& a) noexcept {
  Sym3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) r(i, j) = a[i] * a[j];
  return r;
}

/// Covariant tensor P^a_i P^b_j t_ab with P^a_i = delta^a_i - n^a n_i.
inline Sym3 project_tangential(const Sym3& t, const Vec3& n_up, const Vec3& n_down) noexcept {
  Mat3 p{};
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i) p[a][i] = (a == i ? 1.0 : 0.0) - n_up[a] * n_down[i];
  Sym3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) s += p[a][i] * p[b][j] * t(a, b);
      r(i, j) = s;
    }
  return r;
}

}  // namespace dihedral

#endif  // DIHEDRAL_TENSOR_HPP
