#ifndef DIHEDRAL_VERIFY_MASTER_HPP
#define DIHEDRAL_VERIFY_MASTER_HPP

// Both sides of the level-set integral formula on the box, the boundary
// identities for d_nu |du| and the divergence identity behind them.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "dihedral/bvp.hpp"
#include "dihedral/geometry.hpp"
#include "dihedral/levelset/foliation.hpp"
#include "dihedral/quadrature.hpp"
#include "dihedral/solver/harmonic.hpp"
#include "dihedral/verify/verdict.hpp"

namespace dihedral::verify {

/// Regularization of |du| inside integrands.
inline double quadrature_delta(const Grid& grid) { return 1e-8 / grid.diameter(); }

/// d_i |du| at a node by the chain rule on one-sided/central differences of
/// u and g: (1/2 d_i g^ab u_a u_b + g^ab u_a u_bi) / |du|.
inline Vec3 gradient_norm_derivative(const InitialData& data, const ScalarField& u, const std::array<int, 3>& ijk) {
  const std::size_t n = data.grid.index(ijk);
  const Sym3 ginv = inverse(data.g[n]);
  const Vec3 du{fd::d1(u, ijk, 0), fd::d1(u, ijk, 1), fd::d1(u, ijk, 2)};
  const Vec3 up = raise(ginv, du);
  const double s = std::sqrt(std::max(0.0, dot(du, up)));
  Vec3 out{};
  if (!(s > 0.0)) return out;
  for (int i = 0; i < 3; ++i) {
    const Sym3 dg = fd::d1(data.g, ijk, i);
    double v = -0.5 * contract(dg, up, up);
    for (int b = 0; b < 3; ++b) v += up[b] * fd::d2(u, ijk, b, i);
    out[i] = v / s;
  }
  return out;
}

struct BoundaryTermCheck {
  Face face;
  bool dirichlet = false;
  std::vector<std::size_t> nodes;
  std::vector<double> direct;    ///< one-sided d_nu |du|
  std::vector<double> formula;
  std::vector<double> residual;  ///< |direct - formula|, 0 at excluded nodes
  std::size_t excluded = 0;
  double max_residual = 0.0;
};

/// Normal derivative of |du| on a face (chain rule, see above), compared with its expression in
/// terms of the face geometry. Dirichlet faces: s Delta u - H |du| with
/// s = sign nu(u), where Delta u comes from the equation. Side faces:
/// -|du| Pi(N, N).
inline BoundaryTermCheck boundary_term_check(const InitialData& data, const ScalarField& u, Face face,
                                             const MixedBVP& bvp, double threshold = -1.0) {
  const Grid& grid = data.grid;
  if (threshold < 0.0) threshold = levelset::default_gradient_threshold(grid);
  const ConnectionField gamma = christoffel(data);
  const FaceGeometry fg = face_geometry(data, gamma, face);
  const CoVectorField du = fd::gradient(u);
  ScalarField s(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) s[n] = conorm(inverse(data.g[n]), du[n]);

  BoundaryTermCheck out;
  out.face = face;
  out.dirichlet = bvp.is_dirichlet(face);
  out.nodes = fg.nodes;
  const std::size_t m = fg.nodes.size();
  out.direct.assign(m, 0.0);
  out.formula.assign(m, 0.0);
  out.residual.assign(m, 0.0);
  for (std::size_t q = 0; q < m; ++q) {
    const std::size_t n = fg.nodes[q];
    if (!(s[n] > threshold)) {
      ++out.excluded;
      continue;
    }
    const Sym3 ginv = inverse(data.g[n]);
    const Vec3& nu = fg.nu_up[q];
    out.direct[q] = dot(gradient_norm_derivative(data, u, grid.ijk(n)), nu);
    if (out.dirichlet) {
      const double nu_u = dot(du[n], nu);
      double lap = 0.0;  // Delta u from the equation
      switch (bvp.drift) {
        case DriftKind::None: break;
        case DriftKind::Spacetime: lap = -trace(ginv, data.k[n]) * s[n]; break;
        case DriftKind::Charged:
          if (!data.electric) throw InputError("charged boundary check needs an electric field");
          lap = contract(ginv, (*data.electric)[n], du[n]);
          break;
      }
      out.formula[q] = (nu_u >= 0.0 ? 1.0 : -1.0) * lap - fg.H[q] * s[n];
    } else {
      const Vec3 N = (1.0 / s[n]) * raise(ginv, du[n]);
      out.formula[q] = -s[n] * contract(fg.Pi[q], N, N);
    }
    out.residual[q] = std::abs(out.direct[q] - out.formula[q]);
    out.max_residual = std::max(out.max_residual, out.residual[q]);
  }
  return out;
}

/// Delta |du| in flux form, (1/sqrt g) d_i (sqrt g g^ij d_j |du|), with the
/// inner derivative taken by the chain rule and regularized by dq.
inline ScalarField gradient_norm_laplacian(const InitialData& data, const ScalarField& u, double dq) {
  const Grid& grid = data.grid;
  Field<Vec3> flux(grid);
  ScalarField sqrtg(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const auto ijk = grid.ijk(n);
    const Sym3 ginv = inverse(data.g[n]);
    const Vec3 du{fd::d1(u, ijk, 0), fd::d1(u, ijk, 1), fd::d1(u, ijk, 2)};
    const double s = conorm(ginv, du);
    const double damp = s / std::sqrt(s * s + dq * dq);
    sqrtg[n] = std::sqrt(det(data.g[n]));
    flux[n] = (sqrtg[n] * damp) * raise(ginv, gradient_norm_derivative(data, u, ijk));
  }
  ScalarField out(grid);
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) {
        const std::array<int, 3> ijk{i, j, k};
        double div = 0.0;
        for (int a = 0; a < 3; ++a) div += fd::d1(flux, ijk, a)[a];
        out.at(i, j, k) = div / sqrtg.at(i, j, k);
      }
  return out;
}

struct DivergenceCheck {
  double boundary = 0.0;  ///< oint d_nu |du|
  double volume = 0.0;    ///< int Delta |du|
  double scale = 0.0;     ///< max of the two absolute integrals
  double residual = 0.0;  ///< relative; absolute when scale is at roundoff
  bool absolute = false;
  std::size_t excluded = 0;
};

inline DivergenceCheck divergence_identity_check(const InitialData& data, const ScalarField& u,
                                                 double threshold = -1.0) {
  const Grid& grid = data.grid;
  if (threshold < 0.0) threshold = levelset::default_gradient_threshold(grid);
  const double dq = quadrature_delta(grid);
  const CoVectorField du = fd::gradient(u);
  DivergenceCheck out;
  for (std::size_t n = 0; n < grid.size(); ++n)
    if (!(conorm(inverse(data.g[n]), du[n]) > threshold)) ++out.excluded;
  const ScalarField lap = gradient_norm_laplacian(data, u, dq);
  out.volume = volume_integral(data, lap);
  const double abs_volume = volume_integral(data, map(lap, [](double v) { return std::abs(v); }));
  double abs_boundary = 0.0;
  for (Face f : all_faces()) {
    const auto nodes = grid.face_nodes(f);
    std::vector<double> v(nodes.size()), va(nodes.size());
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      const auto [up, down] = face_normal(inverse(data.g[nodes[q]]), f);
      v[q] = dot(gradient_norm_derivative(data, u, grid.ijk(nodes[q])), up);
      va[q] = std::abs(v[q]);
    }
    out.boundary += face_integral(data, f, v);
    abs_boundary += face_integral(data, f, va);
  }
  out.scale = std::max(abs_volume, abs_boundary);
  const double diff = std::abs(out.boundary - out.volume);
  if (out.scale > 1e-9) {
    out.residual = diff / out.scale;
  } else {
    out.residual = diff;
    out.absolute = true;
  }
  return out;
}

struct FaceMargins {
  Face face;
  bool dirichlet = false;
  double boundary_dec = 0.0;  ///< min of H - |pi(., nu)^T|
  double lemma = 0.0;         ///< min of the orientation-dependent margin (see master_inequality)
  double mean_curvature_min = 0.0;
};

struct MasterOptions {
  int bins = 20;
  double band_constant = 10.0;       ///< slack band C h
  double hypothesis_band_constant = 1.0;  ///< pointwise hypotheses: margin >= -c h
  double threshold = -1.0;
};

struct MasterReport {
  double h = 0.0;
  double band = 0.0;             ///< for the slack
  double hypothesis_band = 0.0;

  double interior = 0.0;
  double interior_hessian = 0.0;  ///< int 1/2 |hess|^2 / |du|
  double interior_energy = 0.0;   ///< int mu |du| (charged: 1/2 (R - 2|E|^2) |du|)
  double interior_current = 0.0;  ///< int <J, du>

  std::array<double, 6> boundary_by_face{};
  double boundary = 0.0;
  double edge_budget = 0.0;  ///< part of `boundary` carried by nodes on box edges

  double rhs = 0.0;            ///< sum_bins dt (2 pi chi - sum (pi - alpha))
  double rhs_curvature = 0.0;  ///< sum_bins dt (int 1/2 R_Sigma + oint kappa)
  double slack = 0.0;          ///< rhs - (interior + boundary)
  Verdict slack_verdict = Verdict::WithinBand;

  double dec_min = 0.0;
  double angle_max = 0.0;
  std::array<FaceMargins, 6> faces{};
  std::vector<HypothesisCheck> hypotheses;

  double dirichlet_correction = 0.0;  ///< charged only: int_{T,B} (Delta u - <E, du>) nu(u) / |du|
  bool charged = false;

  bool inconsistent = false;  ///< interior > 0 = RHS
  std::string diagnosis;
  std::vector<std::string> anomalies;
  std::size_t excluded_nodes = 0;
};

namespace detail {

// Integral over a face with the edge nodes' share separated out.
inline std::pair<double, double> face_integral_split(const InitialData& data, Face f, const std::vector<double>& v) {
  const Grid& grid = data.grid;
  const auto nodes = grid.face_nodes(f);
  const auto w = face_weights(grid, f);
  double total = 0.0, edge = 0.0;
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const double c = w[q] * face_area_element(data.g[nodes[q]], f) * v[q];
    total += c;
    const auto ijk = grid.ijk(nodes[q]);
    int on = 0;
    for (int a = 0; a < 3; ++a)
      if (ijk[a] == 0 || ijk[a] == grid.n(a) - 1) ++on;
    if (on >= 2) edge += c;
  }
  return {total, edge};
}

inline void assemble_rhs(const levelset::FoliationReport& fol, MasterReport& rep) {
  const double dt = 1.0 / fol.bins;
  for (const auto& r : fol.rows) {
    double corners = 0.0;
    for (double a : r.angles) corners += std::numbers::pi - a;
    rep.rhs += dt * (2.0 * std::numbers::pi * r.chi - corners);
    rep.rhs_curvature += dt * (r.half_R + r.kappa);
  }
  rep.anomalies.insert(rep.anomalies.end(), fol.anomalies.begin(), fol.anomalies.end());
}

inline void angle_hypothesis(const InitialData& data, MasterReport& rep) {
  rep.angle_max = 0.0;
  for (Edge e : all_edges()) {
    const EdgeAngles ea = dihedral_angles(data, e);
    for (double a : ea.alpha) rep.angle_max = std::max(rep.angle_max, a);
  }
  rep.hypotheses.push_back(make_check("angles", std::numbers::pi / 2 - rep.angle_max, rep.hypothesis_band));
}

inline void finish(MasterReport& rep) {
  rep.slack = rep.rhs - (rep.interior + rep.boundary);
  rep.slack_verdict = judge(rep.slack, rep.band);
  if (rep.interior > rep.band && rep.rhs <= rep.band) {
    rep.inconsistent = true;
    std::string failed;
    for (const auto& c : rep.hypotheses)
      if (c.verdict == Verdict::Violated) failed += (failed.empty() ? "" : ", ") + c.name;
    if (failed.empty())
      rep.diagnosis = "interior term > 0 with RHS = 0 although every hypothesis holds: discretization inconsistency";
    else
      rep.diagnosis = "interior term > 0 with RHS = 0: the hypotheses cannot hold simultaneously; violated: " + failed;
  } else if (rep.slack_verdict == Verdict::Violated) {
    std::string failed;
    for (const auto& c : rep.hypotheses)
      if (c.verdict == Verdict::Violated) failed += (failed.empty() ? "" : ", ") + c.name;
    rep.diagnosis = failed.empty() ? "inequality violated beyond the band with all hypotheses holding"
                                   : "inequality violated; hypotheses violated: " + failed;
  } else {
    rep.diagnosis = "consistent";
  }
}

}  // namespace detail

/// Master formula for a spacetime harmonic u:
///   int (1/2 |hess u + |du| k|^2 / |du| + mu |du| + <J, du>)
///   + oint (H |du| - pi(du, nu))  <=  int_0^1 (2 pi chi - sum (pi - alpha_j)) dt.
/// Verdict margins on T/B are the orientation-aware ones, H + tr_T k on the
/// top face and H - tr_B k on the bottom, and H - |pi^T(., nu)| on the sides.
inline MasterReport master_inequality(const InitialData& data, const ScalarField& u, const MixedBVP& bvp,
                                      const GeometryBundle& geo, const levelset::FoliationReport& fol,
                                      const MasterOptions& opt = {}) {
  const Grid& grid = data.grid;
  MasterReport rep;
  rep.h = grid.max_spacing();
  rep.band = opt.band_constant * rep.h;
  rep.hypothesis_band = opt.hypothesis_band_constant * rep.h;
  const double dq = quadrature_delta(grid);
  const CoVectorField du = fd::gradient(u);
  const SymTensorField hess = spacetime_hessian(data, u, geo.gamma);
  const double thr = opt.threshold < 0.0 ? levelset::default_gradient_threshold(grid) : opt.threshold;

  ScalarField fh(grid), fm(grid), fj(grid), sreg(grid);
  rep.dec_min = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Sym3& ginv = geo.metric.ginv[n];
    const double s = conorm(ginv, du[n]);
    if (!(s > thr)) ++rep.excluded_nodes;
    const double sq = std::sqrt(s * s + dq * dq);
    sreg[n] = sq;
    fh[n] = 0.5 * inner(ginv, hess[n], hess[n]) / sq;
    fm[n] = geo.cons.mu[n] * sq;
    fj[n] = contract(ginv, geo.cons.J[n], du[n]);
    rep.dec_min = std::min(rep.dec_min, geo.cons.dec_margin[n]);
  }
  rep.interior_hessian = volume_integral(data, fh);
  rep.interior_energy = volume_integral(data, fm);
  rep.interior_current = volume_integral(data, fj);
  rep.interior = rep.interior_hessian + rep.interior_energy + rep.interior_current;

  double lemma = std::numeric_limits<double>::infinity();
  for (Face f : all_faces()) {
    const FaceGeometry fg = face_geometry(data, geo.gamma, f);
    const std::size_t m = fg.nodes.size();
    std::vector<double> v(m);
    FaceMargins fmg;
    fmg.face = f;
    fmg.dirichlet = bvp.is_dirichlet(f);
    fmg.boundary_dec = fmg.lemma = fmg.mean_curvature_min = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < m; ++q) {
      const std::size_t n = fg.nodes[q];
      v[q] = fg.H[q] * sreg[n] - contract(geo.cons.pi[n], raise(geo.metric.ginv[n], du[n]), fg.nu_up[q]);
      double lm = fg.boundary_margin[q];
      if (f == bvp.top()) lm = fg.H[q] + fg.tr_face_k[q];
      if (f == bvp.bottom()) lm = fg.H[q] - fg.tr_face_k[q];
      fmg.boundary_dec = std::min(fmg.boundary_dec, fg.boundary_margin[q]);
      fmg.lemma = std::min(fmg.lemma, lm);
      fmg.mean_curvature_min = std::min(fmg.mean_curvature_min, fg.H[q]);
    }
    const auto [total, edge] = detail::face_integral_split(data, f, v);
    rep.boundary_by_face[static_cast<std::size_t>(f.index())] = total;
    rep.boundary += total;
    rep.edge_budget += edge;
    rep.faces[static_cast<std::size_t>(f.index())] = fmg;
    lemma = std::min(lemma, fmg.lemma);
  }

  rep.hypotheses.push_back(make_check("dec", rep.dec_min, rep.hypothesis_band));
  rep.hypotheses.push_back(make_check("boundary-dec", lemma, rep.hypothesis_band));
  detail::angle_hypothesis(data, rep);
  detail::assemble_rhs(fol, rep);
  detail::finish(rep);
  return rep;
}

inline MasterReport master_inequality(const InitialData& data, const ScalarField& u, const MixedBVP& bvp,
                                      const MasterOptions& opt = {}) {
  const GeometryBundle geo = analyze(data);
  levelset::FoliationOptions fo;
  fo.bins = opt.bins;
  fo.threshold = opt.threshold;
  const auto fol = levelset::foliate(data, u, bvp, geo, fo);
  return master_inequality(data, u, bvp, geo, fol, opt);
}

}  // namespace dihedral::verify

#endif  // DIHEDRAL_VERIFY_MASTER_HPP
