#ifndef DIHEDRAL_ADM_ADM_HPP
#define DIHEDRAL_ADM_ADM_HPP

// ADM energy-momentum and the polyhedral mass functional on coordinate cubes
// [-L, L]^3. The flux integrals use the Euclidean normal and area; the
// polyhedral functional uses g throughout. The two paths share only the
// sampling of the model.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "dihedral/errors.hpp"
#include "dihedral/grid.hpp"
#include "dihedral/models.hpp"

namespace dihedral::adm {

inline constexpr double c3 = 8.0 * std::numbers::pi;  // (n-1)|S^{n-1}| for n = 3

enum class EdgeMeasure { Metric, Euclidean };

struct AdmOptions {
  double spacing = 0.25;  ///< node spacing on faces and edges, fixed as L grows
  EdgeMeasure edge_measure = EdgeMeasure::Metric;
};

struct Deficit {
  double mean_curvature = 0.0;  ///< -oint H dsigma
  double momentum = 0.0;        ///< oint pi(a, nu) dsigma
  double angle = 0.0;           ///< oint (alpha - pi/2) dmu
  double total() const { return mean_curvature + momentum + angle; }
};

struct AdmRecord {
  double L = 0.0;
  double E = 0.0;
  Vec3 P{};
  double F = 0.0;
  Deficit deficit;
};

struct AdmReport {
  std::string model;
  Vec3 a{0.0, 0.0, 1.0};
  double c = c3;
  std::vector<AdmRecord> records;  ///< sorted by L
};

namespace detail {

inline void check(const Model& model, double L, const AdmOptions& opt) {
  if (!model.asymptotically_flat)
    throw InputError("model '" + model.name + "' is not asymptotically flat");
  if (!(opt.spacing > 0.0) || !std::isfinite(opt.spacing)) throw InputError("ADM spacing must be positive");
  if (!(L > 0.0) || !std::isfinite(L)) throw InputError("cube half-width L must be positive");
  if (2.0 * L / opt.spacing < 4.0) throw InputError("cube half-width L is below four face spacings");
  if (2.0 * L / opt.spacing > 4096.0) throw InputError("cube half-width L needs more than 4096 nodes per side");
}

inline Sym3 metric_at(const Model& model, const Vec3& x, double L) {
  if (!model.defined_at(x)) {
    std::ostringstream os;
    os << "L = " << L << " exceeds the validity of model '" << model.name << "'";
    throw InputError(os.str());
  }
  return model.metric(x);
}

// Face nodes of the cube with trapezoid weights (Euclidean area).
struct FaceNode {
  Vec3 x;
  double w;
};

inline std::vector<FaceNode> face_nodes(Face f, double L, double spacing) {
  const int n = static_cast<int>(std::ceil(2.0 * L / spacing - 1e-9)) + 1;
  const double h = 2.0 * L / (n - 1);
  const int a = f.axis == 0 ? 1 : 0;
  const int b = f.axis == 2 ? 1 : 2;
  std::vector<FaceNode> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) {
      Vec3 x{};
      x[f.axis] = f.outward_sign() * L;
      x[a] = -L + p * h;
      x[b] = -L + q * h;
      const double wa = (p == 0 || p == n - 1) ? 0.5 * h : h;
      const double wb = (q == 0 || q == n - 1) ? 0.5 * h : h;
      out.push_back({x, wa * wb});
    }
  return out;
}

// Central differences of the closed-form metric.
inline std::array<Sym3, 3> metric_derivatives(const Model& model, const Vec3& x, double s, double L) {
  std::array<Sym3, 3> d;
  for (int k = 0; k < 3; ++k) {
    Vec3 xp = x, xm = x;
    xp[k] += s;
    xm[k] -= s;
    d[k] = (1.0 / (2.0 * s)) * (metric_at(model, xp, L) - metric_at(model, xm, L));
  }
  return d;
}

}  // namespace detail

/// E = 1/(2 c3) oint (g_ij,i - g_ii,j) nu^j dA, P_i = 1/c3 oint pi_ij nu^j dA,
/// Euclidean normal and area.
inline std::pair<double, Vec3> adm_energy_momentum(const Model& model, double L, const AdmOptions& opt = {}) {
  detail::check(model, L, opt);
  const double s = 0.5 * opt.spacing;
  double E = 0.0;
  Vec3 P{};
  for (Face f : all_faces()) {
    const int A = f.axis;
    const double sign = f.outward_sign();
    for (const auto& node : detail::face_nodes(f, L, opt.spacing)) {
      const auto dg = detail::metric_derivatives(model, node.x, s, L);
      double flux = 0.0;  // (g_iA,i - g_ii,A) nu^A
      for (int i = 0; i < 3; ++i) flux += dg[i](i, A) - dg[A](i, i);
      E += node.w * sign * flux;
      const Sym3 g = detail::metric_at(model, node.x, L);
      const Sym3 k = model.extrinsic(node.x);
      const Sym3 pi = k - trace(inverse(g), k) * g;
      for (int i = 0; i < 3; ++i) P[i] += node.w * sign * pi(i, A);
    }
  }
  return {E / (2.0 * c3), (1.0 / c3) * P};
}

/// The three addends of F(L, a) = -oint H + oint pi(a, nu) + oint (alpha - pi/2),
/// all with respect to g.
inline Deficit deficit_decomposition(const Model& model, double L, const Vec3& a, const AdmOptions& opt = {}) {
  detail::check(model, L, opt);
  const double an = std::sqrt(dot(a, a));
  if (std::abs(an - 1.0) > 1e-12) throw InputError("direction a must be a unit vector");
  const double s = 0.5 * opt.spacing;
  Deficit out;
  for (Face f : all_faces()) {
    const int A = f.axis;
    const int ta = A == 0 ? 1 : 0;
    const int tb = A == 2 ? 1 : 2;
    for (const auto& node : detail::face_nodes(f, L, opt.spacing)) {
      const Sym3 g = detail::metric_at(model, node.x, L);
      const Sym3 ginv = inverse(g);
      const auto dg = detail::metric_derivatives(model, node.x, s, L);
      // Gamma^A_ij for the face normal
      const Vec3 gA{ginv(A, 0), ginv(A, 1), ginv(A, 2)};
      Sym3 gamA;
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          double v = 0.0;
          for (int l = 0; l < 3; ++l) v += gA[l] * 0.5 * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
          gamA(i, j) = v;
        }
      Vec3 down{};
      down[A] = f.outward_sign() / std::sqrt(ginv(A, A));
      const Vec3 up = raise(ginv, down);
      Sym3 raw;
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) raw(i, j) = -gamA(i, j) * down[A];
      const double H = trace(ginv, project_tangential(raw, up, down));
      const double dA = std::sqrt(g(ta, ta) * g(tb, tb) - g(ta, tb) * g(ta, tb));
      const Sym3 k = model.extrinsic(node.x);
      const Sym3 pi = k - trace(ginv, k) * g;
      out.mean_curvature -= node.w * dA * H;
      out.momentum += node.w * dA * contract(pi, a, up);
    }
  }
  for (Edge e : all_edges()) {
    const int n = static_cast<int>(std::ceil(2.0 * L / opt.spacing - 1e-9)) + 1;
    const double h = 2.0 * L / (n - 1);
    const Face fa = e.face_a(), fb = e.face_b();
    for (int p = 0; p < n; ++p) {
      Vec3 x{};
      x[e.axis] = -L + p * h;
      x[fa.axis] = fa.outward_sign() * L;
      x[fb.axis] = fb.outward_sign() * L;
      const Sym3 g = detail::metric_at(model, x, L);
      const double w = (p == 0 || p == n - 1) ? 0.5 * h : h;
      const double dmu = opt.edge_measure == EdgeMeasure::Metric ? std::sqrt(g(e.axis, e.axis)) : 1.0;
      const double c = fa.outward_sign() * fb.outward_sign() * inverse(g)(fa.axis, fb.axis) /
                       std::sqrt(inverse(g)(fa.axis, fa.axis) * inverse(g)(fb.axis, fb.axis));
      const double alpha = std::numbers::pi - std::acos(std::clamp(c, -1.0, 1.0));
      out.angle += w * dmu * (alpha - std::numbers::pi / 2);
    }
  }
  return out;
}

inline double polyhedral_functional(const Model& model, double L, const Vec3& a, const AdmOptions& opt = {}) {
  return deficit_decomposition(model, L, a, opt).total();
}

/// E, P and F over a list of half-widths, sorted by L.
inline AdmReport adm_sweep(const Model& model, std::vector<double> Ls, const Vec3& a, const AdmOptions& opt = {}) {
  if (Ls.empty()) throw InputError("ADM sweep needs at least one L");
  std::sort(Ls.begin(), Ls.end());
  AdmReport rep;
  rep.model = model.name;
  rep.a = a;
  for (double L : Ls) {
    AdmRecord r;
    r.L = L;
    std::tie(r.E, r.P) = adm_energy_momentum(model, L, opt);
    r.deficit = deficit_decomposition(model, L, a, opt);
    r.F = r.deficit.total();
    rep.records.push_back(r);
  }
  return rep;
}

}  // namespace dihedral::adm

#endif  // DIHEDRAL_ADM_ADM_HPP
