#ifndef DIHEDRAL_GEOMETRY_HPP
#define DIHEDRAL_GEOMETRY_HPP

// Intrinsic and extrinsic geometry of an initial data set on the grid.
//
// Conventions: for a hypersurface with unit normal n, the second fundamental
// form is Pi(X, Y) = g(nabla_X n, Y) and the mean curvature is its trace. For
// box faces n is the outward normal. Dihedral angles are interior angles
// (pi/2 for the flat cube).

#include <numbers>
#include <vector>

#include "dihedral/initial_data.hpp"

namespace dihedral {

struct MetricFields {
  SymTensorField ginv;
  ScalarField sqrtg;
};

inline MetricFields metric_fields(const InitialData& data) {
  MetricFields m{SymTensorField(data.grid), ScalarField(data.grid)};
  for (std::size_t n = 0; n < data.grid.size(); ++n) {
    m.ginv[n] = inverse(data.g[n]);
    m.sqrtg[n] = std::sqrt(det(data.g[n]));
  }
  return m;
}

/// Gamma^k_ij = 1/2 g^kl (d_i g_lj + d_j g_li - d_l g_ij).
inline ConnectionField christoffel(const InitialData& data) {
  validate(data);
  const Grid& grid = data.grid;
  ConnectionField out(grid);
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) {
        const std::array<int, 3> ijk{i, j, k};
        const std::array<Sym3, 3> dg{fd::d1(data.g, ijk, 0), fd::d1(data.g, ijk, 1),
                                     fd::d1(data.g, ijk, 2)};
        const Sym3 ginv = inverse(data.g.at(i, j, k));
        Connection c;
        for (int a = 0; a < 3; ++a)
          for (int b = a; b < 3; ++b) {
            Vec3 lowered{};
            for (int l = 0; l < 3; ++l) lowered[l] = 0.5 * (dg[a](l, b) + dg[b](l, a) - dg[l](a, b));
            const Vec3 up = raise(ginv, lowered);
            for (int m = 0; m < 3; ++m) c.gamma[m](a, b) = up[m];
          }
        out.at(i, j, k) = c;
      }
  return out;
}

struct Curvature {
  ScalarField scalar;
  SymTensorField ricci;
};

/// Ricci tensor and scalar curvature. Derivatives of the connection are
/// expanded in first and second differences of g, so the one-sided boundary
/// stencils keep second order (differencing Gamma again would not).
inline Curvature curvature(const InitialData& data, const ConnectionField& gamma) {
  const Grid& grid = data.grid;
  Curvature out{ScalarField(grid), SymTensorField(grid)};
  for (int kk = 0; kk < grid.n(2); ++kk)
    for (int jj = 0; jj < grid.n(1); ++jj)
      for (int ii = 0; ii < grid.n(0); ++ii) {
        const std::array<int, 3> ijk{ii, jj, kk};
        const Connection& c = gamma.at(ii, jj, kk);
        const Sym3 ginv = inverse(data.g.at(ii, jj, kk));
        std::array<Sym3, 3> dg;
        for (int a = 0; a < 3; ++a) dg[a] = fd::d1(data.g, ijk, a);
        std::array<std::array<Sym3, 3>, 3> ddg;
        for (int a = 0; a < 3; ++a)
          for (int b = a; b < 3; ++b) ddg[a][b] = ddg[b][a] = fd::d2(data.g, ijk, a, b);
        // Gamma_{l,ij} and d_c Gamma_{l,ij}
        auto low = [&](int l, int i, int j) { return 0.5 * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j)); };
        auto dlow = [&](int cc, int l, int i, int j) {
          return 0.5 * (ddg[i][cc](l, j) + ddg[j][cc](l, i) - ddg[l][cc](i, j));
        };
        // d_c g^{ab}
        std::array<Sym3, 3> dginv;
        for (int cc = 0; cc < 3; ++cc)
          for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b) {
              double v = 0.0;
              for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 3; ++q) v -= ginv(a, p) * ginv(b, q) * dg[cc](p, q);
              dginv[cc](a, b) = v;
            }
        auto dgam = [&](int cc, int k, int i, int j) {  // d_c Gamma^k_ij
          double v = 0.0;
          for (int l = 0; l < 3; ++l) v += dginv[cc](k, l) * low(l, i, j) + ginv(k, l) * dlow(cc, l, i, j);
          return v;
        };
        Sym3 ric;
        for (int i = 0; i < 3; ++i)
          for (int j = i; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += dgam(k, k, i, j) - dgam(j, k, i, k);
            for (int k = 0; k < 3; ++k)
              for (int l = 0; l < 3; ++l)
                s += c.gamma[k](k, l) * c.gamma[l](i, j) - c.gamma[k](j, l) * c.gamma[l](i, k);
            ric(i, j) = s;
          }
        out.ricci.at(ii, jj, kk) = ric;
        out.scalar.at(ii, jj, kk) = trace(ginv, ric);
      }
  return out;
}

inline Curvature curvature(const InitialData& data) { return curvature(data, christoffel(data)); }

struct ConstraintBundle {
  ScalarField mu;
  CoVectorField J;
  SymTensorField pi;
  ScalarField dec_margin;
};

/// pi = k - (tr k) g.
inline Sym3 conjugate_momentum(const Sym3& g, const Sym3& ginv, const Sym3& k) {
  return k - trace(ginv, k) * g;
}

/// mu = 1/2 (R + (tr k)^2 - |k|^2), J = div pi, dec_margin = mu - |J|.
inline ConstraintBundle constraints(const InitialData& data, const ConnectionField& gamma,
                                    const Curvature& curv) {
  const Grid& grid = data.grid;
  ConstraintBundle out{ScalarField(grid), CoVectorField(grid), SymTensorField(grid),
                       ScalarField(grid)};
  for (std::size_t n = 0; n < grid.size(); ++n)
    out.pi[n] = conjugate_momentum(data.g[n], inverse(data.g[n]), data.k[n]);
  for (int kk = 0; kk < grid.n(2); ++kk)
    for (int jj = 0; jj < grid.n(1); ++jj)
      for (int ii = 0; ii < grid.n(0); ++ii) {
        const std::array<int, 3> ijk{ii, jj, kk};
        const std::size_t n = grid.index(ijk);
        const Sym3 ginv = inverse(data.g[n]);
        const double trk = trace(ginv, data.k[n]);
        out.mu[n] = 0.5 * (curv.scalar[n] + trk * trk - inner(ginv, data.k[n], data.k[n]));
        const std::array<Sym3, 3> dpi{fd::d1(out.pi, ijk, 0), fd::d1(out.pi, ijk, 1),
                                      fd::d1(out.pi, ijk, 2)};
        const Connection& c = gamma[n];
        const Sym3& pi = out.pi[n];
        Vec3 J{};
        for (int i = 0; i < 3; ++i) {
          double s = 0.0;
          for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
              double cov = dpi[k](i, j);
              for (int l = 0; l < 3; ++l)
                cov -= c.gamma[l](k, i) * pi(l, j) + c.gamma[l](k, j) * pi(i, l);
              s += ginv(j, k) * cov;
            }
          J[i] = s;
        }
        out.J[n] = J;
        out.dec_margin[n] = out.mu[n] - conorm(ginv, J);
      }
  return out;
}

inline ConstraintBundle constraints(const InitialData& data) {
  const ConnectionField gamma = christoffel(data);
  return constraints(data, gamma, curvature(data, gamma));
}

/// Everything derived from (g, k) that downstream modules consume.
struct GeometryBundle {
  MetricFields metric;
  ConnectionField gamma;
  Curvature curv;
  ConstraintBundle cons;
};

inline GeometryBundle analyze(const InitialData& data) {
  GeometryBundle b{metric_fields(data), christoffel(data), {}, {}};
  b.curv = curvature(data, b.gamma);
  b.cons = constraints(data, b.gamma, b.curv);
  return b;
}

/// Outward g-unit normal of a coordinate face at a node: (vector, covector).
inline std::pair<Vec3, Vec3> face_normal(const Sym3& ginv, Face f) {
  const double s = f.outward_sign() / std::sqrt(ginv(f.axis, f.axis));
  Vec3 down{};
  down[f.axis] = s;
  return {raise(ginv, down), down};
}

struct FaceGeometry {
  Face face;
  std::vector<std::size_t> nodes;
  std::vector<Vec3> nu_up;
  std::vector<Vec3> nu_down;
  std::vector<double> H;
  std::vector<Sym3> Pi;
  std::vector<double> tr_face_k;
  /// H - |pi(., nu)^T|
  std::vector<double> boundary_margin;
};

/// Second fundamental form of a coordinate face. For the coordinate normal
/// field nu_j = s delta_j^A / sqrt(g^AA) the tangential projection of
/// nabla nu reduces to -Gamma^A_ab nu_A.
inline FaceGeometry face_geometry(const InitialData& data, const ConnectionField& gamma, Face f) {
  FaceGeometry out;
  out.face = f;
  out.nodes = data.grid.face_nodes(f);
  const std::size_t m = out.nodes.size();
  out.nu_up.resize(m);
  out.nu_down.resize(m);
  out.H.resize(m);
  out.Pi.resize(m);
  out.tr_face_k.resize(m);
  out.boundary_margin.resize(m);
  for (std::size_t q = 0; q < m; ++q) {
    const std::size_t n = out.nodes[q];
    const Sym3& g = data.g[n];
    const Sym3 ginv = inverse(g);
    const auto [up, down] = face_normal(ginv, f);
    Sym3 raw;
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) raw(a, b) = -gamma[n].gamma[f.axis](a, b) * down[f.axis];
    const Sym3 Pi = project_tangential(raw, up, down);
    out.nu_up[q] = up;
    out.nu_down[q] = down;
    out.Pi[q] = Pi;
    out.H[q] = trace(ginv, Pi);
    const Sym3& k = data.k[n];
    out.tr_face_k[q] = trace(ginv, k) - contract(k, up, up);
    const Sym3 pi = conjugate_momentum(g, ginv, k);
    Vec3 w = raise(pi, up);  // pi(., nu) as a covector
    const double wn = dot(w, up);
    for (int a = 0; a < 3; ++a) w[a] -= wn * down[a];
    out.boundary_margin[q] = out.H[q] - conorm(ginv, w);
  }
  return out;
}

inline FaceGeometry face_geometry(const InitialData& data, Face f) {
  return face_geometry(data, christoffel(data), f);
}

struct EdgeAngles {
  Edge edge;
  std::vector<std::size_t> nodes;
  std::vector<double> arc;    ///< g-arclength from the low end
  std::vector<double> alpha;  ///< interior dihedral angle
  double reference = std::numbers::pi / 2;
};

/// Interior angle between two coordinate faces: pi - arccos g(nu_a, nu_b).
inline double dihedral_angle(const Sym3& ginv, Face fa, Face fb) {
  const double c = fa.outward_sign() * fb.outward_sign() * ginv(fa.axis, fb.axis) /
                   std::sqrt(ginv(fa.axis, fa.axis) * ginv(fb.axis, fb.axis));
  return std::numbers::pi - std::acos(std::clamp(c, -1.0, 1.0));
}

inline EdgeAngles dihedral_angles(const InitialData& data, Edge e) {
  validate(data);
  EdgeAngles out;
  out.edge = e;
  out.nodes = data.grid.edge_nodes(e);
  const double h = data.grid.h(e.axis);
  double s = 0.0;
  for (std::size_t q = 0; q < out.nodes.size(); ++q) {
    const Sym3& g = data.g[out.nodes[q]];
    if (q > 0) {
      const Sym3& gp = data.g[out.nodes[q - 1]];
      s += 0.5 * h * (std::sqrt(gp(e.axis, e.axis)) + std::sqrt(g(e.axis, e.axis)));
    }
    out.arc.push_back(s);
    out.alpha.push_back(dihedral_angle(inverse(g), e.face_a(), e.face_b()));
  }
  return out;
}

struct NullExpansions {
  ScalarField theta_plus;
  ScalarField theta_minus;
  ScalarField mean_curvature;
};

/// theta_pm = H +- tr_S k for surfaces with unit normal field `normal`
/// (a one-form), where H = div_g normal.
inline NullExpansions null_expansions(const InitialData& data, const CoVectorField& normal) {
  const Grid& grid = data.grid;
  Field<Vec3> flux(grid);
  ScalarField sqrtg(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    sqrtg[n] = std::sqrt(det(data.g[n]));
    const Vec3 up = normal.variance == Variance::Covariant ? raise(inverse(data.g[n]), normal[n])
                                                           : normal[n];
    flux[n] = sqrtg[n] * up;
  }
  NullExpansions out{ScalarField(grid), ScalarField(grid), ScalarField(grid)};
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) {
        const std::array<int, 3> ijk{i, j, k};
        const std::size_t n = grid.index(ijk);
        double div = 0.0;
        for (int a = 0; a < 3; ++a) div += fd::d1(flux, ijk, a)[a];
        const double H = div / sqrtg[n];
        const Sym3 ginv = inverse(data.g[n]);
        const Vec3 up = normal.variance == Variance::Covariant ? raise(ginv, normal[n]) : normal[n];
        const double trS = trace(ginv, data.k[n]) - contract(data.k[n], up, up);
        out.mean_curvature[n] = H;
        out.theta_plus[n] = H + trS;
        out.theta_minus[n] = H - trS;
      }
  return out;
}

}  // namespace dihedral

#endif  // DIHEDRAL_GEOMETRY_HPP
