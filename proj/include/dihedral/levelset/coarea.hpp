#ifndef DIHEDRAL_LEVELSET_COAREA_HPP
#define DIHEDRAL_LEVELSET_COAREA_HPP

// Coarea binning. Each grid cell is split into six Kuhn tetrahedra (each
// face cell into two triangles) on which u and the integrand are linear; the
// portion of a simplex below a level t is cut out exactly, so per-bin
// integrals telescope to the integral over the whole box.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "dihedral/grid.hpp"

namespace dihedral::levelset {

/// Uniform bins on [0,1]; the outer bins absorb values outside the range.
struct Bins {
  int count = 20;

  double width() const noexcept { return 1.0 / count; }
  double edge(int b) const noexcept { return static_cast<double>(b) / count; }
  double center(int b) const noexcept { return (b + 0.5) / count; }
  int of(double v) const noexcept {
    const int b = static_cast<int>(std::floor(v * count));
    return std::clamp(b, 0, count - 1);
  }
};

namespace detail {

inline double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const Vec3 u = b - a, v = c - a, w = d - a;
  return std::abs(u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) +
                  u[2] * (v[0] * w[1] - v[1] * w[0])) /
         6.0;
}

inline double tri_area(const std::array<double, 2>& a, const std::array<double, 2>& b,
                       const std::array<double, 2>& c) {
  return 0.5 * std::abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
}

template <std::size_t K>
struct Vertex3 {
  Vec3 x;
  double u;
  std::array<double, K> f;
};

template <std::size_t K>
Vertex3<K> cut(const Vertex3<K>& a, const Vertex3<K>& b, double t) {
  const double s = (t - a.u) / (b.u - a.u);
  Vertex3<K> r;
  for (int i = 0; i < 3; ++i) r.x[i] = a.x[i] + s * (b.x[i] - a.x[i]);
  r.u = t;
  for (std::size_t k = 0; k < K; ++k) r.f[k] = a.f[k] + s * (b.f[k] - a.f[k]);
  return r;
}

template <std::size_t K>
void add_tet(const Vertex3<K>& a, const Vertex3<K>& b, const Vertex3<K>& c, const Vertex3<K>& d,
             std::array<double, K>& acc) {
  const double v = tet_volume(a.x, b.x, c.x, d.x) / 4.0;
  for (std::size_t k = 0; k < K; ++k) acc[k] += v * (a.f[k] + b.f[k] + c.f[k] + d.f[k]);
}

/// Integral of the linear interpolants over {u < t} within the tetrahedron.
template <std::size_t K>
std::array<double, K> below(std::array<Vertex3<K>, 4> v, double t, const std::array<double, K>& full) {
  std::sort(v.begin(), v.end(), [](const auto& p, const auto& q) { return p.u < q.u; });
  int m = 0;
  while (m < 4 && v[m].u < t) ++m;
  std::array<double, K> acc{};
  switch (m) {
    case 0:
      return acc;
    case 1:
      add_tet(v[0], cut(v[0], v[1], t), cut(v[0], v[2], t), cut(v[0], v[3], t), acc);
      return acc;
    case 2: {
      const auto pac = cut(v[0], v[2], t), pad = cut(v[0], v[3], t);
      const auto pbc = cut(v[1], v[2], t), pbd = cut(v[1], v[3], t);
      // prism (a, pac, pad) - (b, pbc, pbd)
      add_tet(v[0], pac, pad, pbd, acc);
      add_tet(v[0], pac, pbc, pbd, acc);
      add_tet(v[0], v[1], pbc, pbd, acc);
      return acc;
    }
    case 3: {
      add_tet(v[3], cut(v[3], v[0], t), cut(v[3], v[1], t), cut(v[3], v[2], t), acc);
      for (std::size_t k = 0; k < K; ++k) acc[k] = full[k] - acc[k];
      return acc;
    }
    default:
      return full;
  }
}

template <std::size_t K>
struct Vertex2 {
  std::array<double, 2> x;
  double u;
  std::array<double, K> f;
};

template <std::size_t K>
Vertex2<K> cut(const Vertex2<K>& a, const Vertex2<K>& b, double t) {
  const double s = (t - a.u) / (b.u - a.u);
  Vertex2<K> r;
  for (int i = 0; i < 2; ++i) r.x[i] = a.x[i] + s * (b.x[i] - a.x[i]);
  r.u = t;
  for (std::size_t k = 0; k < K; ++k) r.f[k] = a.f[k] + s * (b.f[k] - a.f[k]);
  return r;
}

template <std::size_t K>
void add_tri(const Vertex2<K>& a, const Vertex2<K>& b, const Vertex2<K>& c, std::array<double, K>& acc) {
  const double s = tri_area(a.x, b.x, c.x) / 3.0;
  for (std::size_t k = 0; k < K; ++k) acc[k] += s * (a.f[k] + b.f[k] + c.f[k]);
}

template <std::size_t K>
std::array<double, K> below(std::array<Vertex2<K>, 3> v, double t, const std::array<double, K>& full) {
  std::sort(v.begin(), v.end(), [](const auto& p, const auto& q) { return p.u < q.u; });
  int m = 0;
  while (m < 3 && v[m].u < t) ++m;
  std::array<double, K> acc{};
  switch (m) {
    case 0:
      return acc;
    case 1:
      add_tri(v[0], cut(v[0], v[1], t), cut(v[0], v[2], t), acc);
      return acc;
    case 2:
      add_tri(v[2], cut(v[2], v[0], t), cut(v[2], v[1], t), acc);
      for (std::size_t k = 0; k < K; ++k) acc[k] = full[k] - acc[k];
      return acc;
    default:
      return full;
  }
}

/// Distributes one simplex over the bins.
template <class V, std::size_t K, std::size_t NV>
void scatter(const std::array<V, NV>& v, const std::array<double, K>& full, const Bins& bins,
             std::vector<std::array<double, K>>& out) {
  double lo = v[0].u, hi = v[0].u;
  for (const auto& p : v) {
    lo = std::min(lo, p.u);
    hi = std::max(hi, p.u);
  }
  const int blo = bins.of(lo), bhi = bins.of(hi);
  std::array<double, K> prev{};
  for (int b = blo; b < bhi; ++b) {
    const auto F = below(v, bins.edge(b + 1), full);
    for (std::size_t k = 0; k < K; ++k) out[b][k] += F[k] - prev[k];
    prev = F;
  }
  for (std::size_t k = 0; k < K; ++k) out[bhi][k] += full[k] - prev[k];
}

// Kuhn decomposition: vertex offsets as bit masks (x = 1, y = 2, z = 4).
inline const std::array<std::array<int, 4>, 6>& kuhn_tets() {
  static const std::array<std::array<int, 4>, 6> tets = {{{0, 1, 3, 7},
                                                          {0, 1, 5, 7},
                                                          {0, 2, 3, 7},
                                                          {0, 2, 6, 7},
                                                          {0, 4, 5, 7},
                                                          {0, 4, 6, 7}}};
  return tets;
}

}  // namespace detail

/// Per-bin integrals of densities (coordinate measure d^3x) over the slabs
/// {t_b <= u < t_b+1}. out[b][k] for density k.
template <std::size_t K>
std::vector<std::array<double, K>> slab_integrals(const Grid& grid, std::span<const double> u,
                                                  const std::array<std::span<const double>, K>& dens,
                                                  const Bins& bins) {
  std::vector<std::array<double, K>> out(bins.count, std::array<double, K>{});
  for (int k = 0; k + 1 < grid.n(2); ++k)
    for (int j = 0; j + 1 < grid.n(1); ++j)
      for (int i = 0; i + 1 < grid.n(0); ++i) {
        std::array<detail::Vertex3<K>, 8> corner;
        for (int c = 0; c < 8; ++c) {
          const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
          const std::size_t p = grid.index(i + di, j + dj, k + dk);
          corner[c].x = {di * grid.h(0), dj * grid.h(1), dk * grid.h(2)};
          corner[c].u = u[p];
          for (std::size_t q = 0; q < K; ++q) corner[c].f[q] = dens[q][p];
        }
        for (const auto& tet : detail::kuhn_tets()) {
          std::array<detail::Vertex3<K>, 4> v{corner[tet[0]], corner[tet[1]], corner[tet[2]], corner[tet[3]]};
          std::array<double, K> full{};
          detail::add_tet(v[0], v[1], v[2], v[3], full);
          detail::scatter(v, full, bins, out);
        }
      }
  return out;
}

/// Same on a face: densities w.r.t. the face coordinate measure d^2x.
template <std::size_t K>
std::vector<std::array<double, K>> face_slab_integrals(const Grid& grid, Face face, std::span<const double> u,
                                                       const std::array<std::span<const double>, K>& dens,
                                                       const Bins& bins) {
  std::vector<std::array<double, K>> out(bins.count, std::array<double, K>{});
  const int a = face.axis == 0 ? 1 : 0;
  const int b = face.axis == 2 ? 1 : 2;
  std::array<int, 3> ijk{};
  ijk[face.axis] = grid.face_layer(face);
  for (int q = 0; q + 1 < grid.n(b); ++q)
    for (int p = 0; p + 1 < grid.n(a); ++p) {
      std::array<detail::Vertex2<K>, 4> c;
      for (int s = 0; s < 4; ++s) {
        const int dp = s & 1, dq = (s >> 1) & 1;
        ijk[a] = p + dp;
        ijk[b] = q + dq;
        const std::size_t n = grid.index(ijk);
        c[s].x = {dp * grid.h(a), dq * grid.h(b)};
        c[s].u = u[n];
        for (std::size_t m = 0; m < K; ++m) c[s].f[m] = dens[m][n];
      }
      for (const auto& tri : {std::array<int, 3>{0, 1, 3}, std::array<int, 3>{0, 2, 3}}) {
        std::array<detail::Vertex2<K>, 3> v{c[tri[0]], c[tri[1]], c[tri[2]]};
        std::array<double, K> full{};
        detail::add_tri(v[0], v[1], v[2], full);
        detail::scatter(v, full, bins, out);
      }
    }
  return out;
}

/// Euler characteristic V - E + F of the marching-tetrahedra triangulation
/// of {u = t} (nodes with u < t count as inside).
inline int euler_characteristic(const Grid& grid, std::span<const double> u, double t) {
  using Key = std::uint64_t;
  auto vkey = [](std::size_t a, std::size_t b) -> Key {
    if (a > b) std::swap(a, b);
    return (static_cast<Key>(a) << 32) | static_cast<Key>(b);
  };
  struct PairHash {
    std::size_t operator()(const std::pair<Key, Key>& p) const noexcept {
      return std::hash<Key>{}(p.first * 0x9E3779B97F4A7C15ULL ^ p.second);
    }
  };
  std::unordered_set<Key> verts;
  std::unordered_set<std::pair<Key, Key>, PairHash> edges;
  long faces = 0;
  auto add_edge = [&](Key x, Key y) {
    if (x > y) std::swap(x, y);
    edges.insert({x, y});
  };
  for (int k = 0; k + 1 < grid.n(2); ++k)
    for (int j = 0; j + 1 < grid.n(1); ++j)
      for (int i = 0; i + 1 < grid.n(0); ++i) {
        std::array<std::size_t, 8> node;
        for (int c = 0; c < 8; ++c) node[c] = grid.index(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
        for (const auto& tet : detail::kuhn_tets()) {
          std::array<std::size_t, 4> in{}, out{};
          int ni = 0, no = 0;
          for (int c : tet) {
            if (u[node[c]] < t) in[ni++] = node[c];
            else out[no++] = node[c];
          }
          if (ni == 0 || no == 0) continue;
          if (ni == 1 || no == 1) {
            const std::size_t apex = ni == 1 ? in[0] : out[0];
            const auto& rest = ni == 1 ? out : in;
            const Key v0 = vkey(apex, rest[0]), v1 = vkey(apex, rest[1]), v2 = vkey(apex, rest[2]);
            verts.insert(v0);
            verts.insert(v1);
            verts.insert(v2);
            add_edge(v0, v1);
            add_edge(v1, v2);
            add_edge(v2, v0);
            faces += 1;
          } else {
            const Key ac = vkey(in[0], out[0]), ad = vkey(in[0], out[1]);
            const Key bd = vkey(in[1], out[1]), bc = vkey(in[1], out[0]);
            for (Key v : {ac, ad, bd, bc}) verts.insert(v);
            add_edge(ac, ad);
            add_edge(ad, bd);
            add_edge(bd, bc);
            add_edge(bc, ac);
            add_edge(ac, bd);
            faces += 2;
          }
        }
      }
  return static_cast<int>(static_cast<long>(verts.size()) - static_cast<long>(edges.size()) + faces);
}

}  // namespace dihedral::levelset

#endif  // DIHEDRAL_LEVELSET_COAREA_HPP
