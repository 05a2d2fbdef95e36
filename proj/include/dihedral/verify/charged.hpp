#ifndef DIHEDRAL_VERIFY_CHARGED_HPP
#define DIHEDRAL_VERIFY_CHARGED_HPP

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "dihedral/verify/master.hpp"

namespace dihedral::verify {

struct ChargedMargins {
  ScalarField interior;                  ///< R - 2|E|^2
  std::array<std::vector<double>, 6> face;  ///< H - 2<E, nu>, in face_nodes order
  double interior_min = 0.0;
  double face_min = 0.0;
};

inline ChargedMargins charged_margins(const InitialData& data, const GeometryBundle& geo) {
  if (!data.electric) throw InputError("charged margins need an electric field");
  const CoVectorField& E = *data.electric;
  ChargedMargins out{ScalarField(data.grid), {}, std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity()};
  for (std::size_t n = 0; n < data.grid.size(); ++n) {
    const double e = conorm(geo.metric.ginv[n], E[n]);
    out.interior[n] = geo.curv.scalar[n] - 2.0 * e * e;
    out.interior_min = std::min(out.interior_min, out.interior[n]);
  }
  for (Face f : all_faces()) {
    const FaceGeometry fg = face_geometry(data, geo.gamma, f);
    auto& v = out.face[static_cast<std::size_t>(f.index())];
    v.resize(fg.nodes.size());
    for (std::size_t q = 0; q < fg.nodes.size(); ++q) {
      v[q] = fg.H[q] - 2.0 * dot(E[fg.nodes[q]], fg.nu_up[q]);
      out.face_min = std::min(out.face_min, v[q]);
    }
  }
  return out;
}

/// Charged master formula:
///   int (1/2 |hat hess u|^2 / |du| + 1/2 (R - 2|E|^2) |du|)
///   + oint (H - 2<E, nu>) |du|  <=  int_0^1 (2 pi chi - sum (pi - alpha_j)) dt,
/// with hat hess u = hess u + E (x) du + du (x) E - <E, du> g. The Dirichlet
/// face term (Delta u - <E, du>) nu(u) / |du| vanishes for exact solutions and
/// is reported on its own.
inline MasterReport charged_master_inequality(const InitialData& data, const ScalarField& u, const MixedBVP& bvp,
                                              const GeometryBundle& geo, const levelset::FoliationReport& fol,
                                              const MasterOptions& opt = {}) {
  if (!data.electric) throw InputError("charged master formula needs an electric field");
  const Grid& grid = data.grid;
  const CoVectorField& E = *data.electric;
  MasterReport rep;
  rep.charged = true;
  rep.h = grid.max_spacing();
  rep.band = opt.band_constant * rep.h;
  rep.hypothesis_band = opt.hypothesis_band_constant * rep.h;
  const double dq = quadrature_delta(grid);
  const double thr = opt.threshold < 0.0 ? levelset::default_gradient_threshold(grid) : opt.threshold;
  const CoVectorField du = fd::gradient(u);
  const SymTensorField hess = charged_hessian(data, u, geo.gamma);
  const SymTensorField plain = covariant_hessian(u, geo.gamma);
  const ChargedMargins cm = charged_margins(data, geo);

  ScalarField fh(grid), fe(grid), sreg(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Sym3& ginv = geo.metric.ginv[n];
    const double s = conorm(ginv, du[n]);
    if (!(s > thr)) ++rep.excluded_nodes;
    sreg[n] = std::sqrt(s * s + dq * dq);
    fh[n] = 0.5 * inner(ginv, hess[n], hess[n]) / sreg[n];
    fe[n] = 0.5 * cm.interior[n] * sreg[n];
  }
  rep.interior_hessian = volume_integral(data, fh);
  rep.interior_energy = volume_integral(data, fe);
  rep.interior = rep.interior_hessian + rep.interior_energy;
  rep.dec_min = cm.interior_min;

  double face_min = std::numeric_limits<double>::infinity();
  for (Face f : all_faces()) {
    const FaceGeometry fg = face_geometry(data, geo.gamma, f);
    const auto& margin = cm.face[static_cast<std::size_t>(f.index())];
    const std::size_t m = fg.nodes.size();
    std::vector<double> v(m), corr(m, 0.0);
    FaceMargins fmg;
    fmg.face = f;
    fmg.dirichlet = bvp.is_dirichlet(f);
    fmg.boundary_dec = fmg.lemma = fmg.mean_curvature_min = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < m; ++q) {
      const std::size_t n = fg.nodes[q];
      const Sym3& ginv = geo.metric.ginv[n];
      v[q] = margin[q] * sreg[n];
      if (fmg.dirichlet) {
        const double lap = trace(ginv, plain[n]);
        corr[q] = (lap - contract(ginv, E[n], du[n])) * dot(du[n], fg.nu_up[q]) / sreg[n];
      }
      fmg.boundary_dec = std::min(fmg.boundary_dec, margin[q]);
      fmg.lemma = fmg.boundary_dec;
      fmg.mean_curvature_min = std::min(fmg.mean_curvature_min, fg.H[q]);
    }
    const auto [total, edge] = detail::face_integral_split(data, f, v);
    rep.boundary_by_face[static_cast<std::size_t>(f.index())] = total;
    rep.boundary += total;
    rep.edge_budget += edge;
    if (fmg.dirichlet) rep.dirichlet_correction += face_integral(data, f, corr);
    rep.faces[static_cast<std::size_t>(f.index())] = fmg;
    face_min = std::min(face_min, fmg.boundary_dec);
  }

  rep.hypotheses.push_back(make_check("charged-dec", rep.dec_min, rep.hypothesis_band));
  rep.hypotheses.push_back(make_check("charged-boundary-dec", face_min, rep.hypothesis_band));
  detail::angle_hypothesis(data, rep);
  detail::assemble_rhs(fol, rep);
  detail::finish(rep);
  return rep;
}

inline MasterReport charged_master_inequality(const InitialData& data, const ScalarField& u, const MixedBVP& bvp,
                                              const MasterOptions& opt = {}) {
  if (!data.electric) throw InputError("charged master formula needs an electric field");
  const GeometryBundle geo = analyze(data);
  levelset::FoliationOptions fo;
  fo.bins = opt.bins;
  fo.threshold = opt.threshold;
  const auto fol = levelset::foliate(data, u, bvp, geo, fo);
  return charged_master_inequality(data, u, bvp, geo, fol, opt);
}

/// Covariant derivative nabla_i E_j, symmetrized.
inline SymTensorField electric_gradient(const InitialData& data, const ConnectionField& gamma) {
  const Grid& grid = data.grid;
  const CoVectorField& E = *data.electric;
  SymTensorField out(grid);
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) {
        const std::array<int, 3> ijk{i, j, k};
        const std::size_t n = grid.index(ijk);
        const std::array<Vec3, 3> dE{fd::d1(E, ijk, 0), fd::d1(E, ijk, 1), fd::d1(E, ijk, 2)};
        Sym3 t;
        for (int a = 0; a < 3; ++a)
          for (int b = a; b < 3; ++b) {
            double v = 0.5 * (dE[a][b] + dE[b][a]);
            for (int c = 0; c < 3; ++c) v -= gamma[n].gamma[c](a, b) * E[n][c];
            t(a, b) = v;
          }
        out[n] = t;
      }
  return out;
}

/// Ric - |E|^2 g + E (x) E + nabla E, pointwise.
inline SymTensorField charged_rigidity_residual(const InitialData& data) {
  if (!data.electric) throw InputError("rigidity residual needs an electric field");
  const ConnectionField gamma = christoffel(data);
  const Curvature curv = curvature(data, gamma);
  const SymTensorField dE = electric_gradient(data, gamma);
  const CoVectorField& E = *data.electric;
  SymTensorField out(data.grid);
  for (std::size_t n = 0; n < data.grid.size(); ++n) {
    const double e = conorm(inverse(data.g[n]), E[n]);
    Sym3 ee;
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) ee(a, b) = E[n][a] * E[n][b];
    out[n] = curv.ricci[n] - (e * e) * data.g[n] + ee + dE[n];
  }
  return out;
}

struct FlattenResult {
  ScalarField potential;        ///< h along the first path, h = 0 at the low corner
  SymTensorField metric;        ///< e^{-2h} g
  double ricci_sup = 0.0;       ///< sup |Ric(e^{-2h} g)|
  double path_difference = 0.0; ///< sup |h_path1 - h_path2|
  double curl_sup = 0.0;        ///< sup |d_i E_j - d_j E_i|
};

namespace detail {

// Cumulative trapezoid of E_axis along the grid line through node `start`.
inline void integrate_line(const Grid& grid, const CoVectorField& E, ScalarField& h, std::array<int, 3> start,
                           int axis) {
  const double dx = grid.h(axis);
  std::array<int, 3> p = start;
  double acc = h[grid.index(p)];
  for (int s = start[axis] + 1; s < grid.n(axis); ++s) {
    std::array<int, 3> prev = p;
    p[axis] = s;
    acc += 0.5 * dx * (E[grid.index(prev)][axis] + E[grid.index(p)][axis]);
    h[grid.index(p)] = acc;
  }
}

// Potential by integrating along the axes in the given order.
inline ScalarField path_potential(const Grid& grid, const CoVectorField& E, std::array<int, 3> order) {
  ScalarField h(grid);
  const int a = order[0], b = order[1], c = order[2];
  integrate_line(grid, E, h, {0, 0, 0}, a);
  for (int i = 0; i < grid.n(a); ++i) {
    std::array<int, 3> p{0, 0, 0};
    p[a] = i;
    integrate_line(grid, E, h, p, b);
  }
  for (int i = 0; i < grid.n(a); ++i)
    for (int j = 0; j < grid.n(b); ++j) {
      std::array<int, 3> p{0, 0, 0};
      p[a] = i;
      p[b] = j;
      integrate_line(grid, E, h, p, c);
    }
  return h;
}

}  // namespace detail

/// Recover h with E = dh and measure how flat e^{-2h} g is.
inline FlattenResult conformal_flatten(const InitialData& data) {
  if (!data.electric) throw InputError("conformal flattening needs an electric field");
  const Grid& grid = data.grid;
  const CoVectorField& E = *data.electric;
  FlattenResult out;
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) {
        const std::array<int, 3> ijk{i, j, k};
        const std::array<Vec3, 3> dE{fd::d1(E, ijk, 0), fd::d1(E, ijk, 1), fd::d1(E, ijk, 2)};
        for (int a = 0; a < 3; ++a)
          for (int b = a + 1; b < 3; ++b)
            out.curl_sup = std::max(out.curl_sup, std::abs(dE[a][b] - dE[b][a]));
      }
  if (out.curl_sup > closedness_tolerance(data)) {
    std::ostringstream os;
    os << "electric field is not closed: sup |curl E| = " << out.curl_sup;
    throw InputError(os.str());
  }
  out.potential = detail::path_potential(grid, E, {0, 1, 2});
  const ScalarField other = detail::path_potential(grid, E, {2, 1, 0});
  for (std::size_t n = 0; n < grid.size(); ++n)
    out.path_difference = std::max(out.path_difference, std::abs(out.potential[n] - other[n]));

  InitialData flat;
  flat.grid = grid;
  flat.g = SymTensorField(grid);
  flat.k = SymTensorField(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) flat.g[n] = std::exp(-2.0 * out.potential[n]) * data.g[n];
  const Curvature curv = curvature(flat);
  for (std::size_t n = 0; n < grid.size(); ++n)
    out.ricci_sup = std::max(out.ricci_sup, norm(inverse(flat.g[n]), curv.ricci[n]));
  out.metric = std::move(flat.g);
  return out;
}

}  // namespace dihedral::verify

#endif  // DIHEDRAL_VERIFY_CHARGED_HPP
