#ifndef DIHEDRAL_LEVELSET_FOLIATION_HPP
#define DIHEDRAL_LEVELSET_FOLIATION_HPP

// Geometry of the level sets Sigma_t = {u = t}.

#include <array>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "dihedral/bvp.hpp"
#include "dihedral/geometry.hpp"
#include "dihedral/levelset/coarea.hpp"
#include "dihedral/solver/harmonic.hpp"

namespace dihedral::levelset {

/// Volumetric fields of the foliation; entries at excluded nodes are zero.
struct InducedGeometry {
  CoVectorField N;       ///< unit normal du/|du| (one-form)
  Field<Vec3> N_up;      ///< same, index raised
  SymTensorField h;      ///< second fundamental form w.r.t. N
  SymTensorField k_sigma;
  ScalarField H;
  ScalarField tr_k;      ///< tr_Sigma k
  ScalarField theta_plus;
  ScalarField theta_minus;
  ScalarField R_sigma;
  ScalarField grad;      ///< |du|
  std::vector<char> valid;
  std::size_t excluded = 0;
  double threshold = 0.0;
};

inline double default_gradient_threshold(const Grid& grid) { return 1e-6 / grid.diameter(); }

inline InducedGeometry induced_geometry(const InitialData& data, const ScalarField& u, const GeometryBundle& geo,
                                        double threshold) {
  const Grid& grid = data.grid;
  const std::size_t N = grid.size();
  InducedGeometry out{CoVectorField(grid), Field<Vec3>(grid), SymTensorField(grid), SymTensorField(grid),
                      ScalarField(grid), ScalarField(grid), ScalarField(grid), ScalarField(grid),
                      ScalarField(grid), ScalarField(grid), std::vector<char>(N, 0), 0, threshold};
  const CoVectorField du = fd::gradient(u);
  const SymTensorField hess = covariant_hessian(u, geo.gamma);
  for (std::size_t n = 0; n < N; ++n) {
    const Sym3& ginv = geo.metric.ginv[n];
    const double s = conorm(ginv, du[n]);
    out.grad[n] = s;
    if (!(s > threshold)) {
      ++out.excluded;
      continue;
    }
    out.valid[n] = 1;
    const Vec3 nd = (1.0 / s) * du[n];
    const Vec3 nu = raise(ginv, nd);
    out.N[n] = nd;
    out.N_up[n] = nu;
    const Sym3 h = (1.0 / s) * project_tangential(hess[n], nu, nd);
    const Sym3 ks = project_tangential(data.k[n], nu, nd);
    out.h[n] = h;
    out.k_sigma[n] = ks;
    out.H[n] = trace(ginv, h);
    out.tr_k[n] = trace(ginv, data.k[n]) - contract(data.k[n], nu, nu);
    out.theta_plus[n] = out.H[n] + out.tr_k[n];
    out.theta_minus[n] = out.H[n] - out.tr_k[n];
    out.R_sigma[n] = geo.curv.scalar[n] - 2.0 * contract(geo.curv.ricci[n], nu, nu) + out.H[n] * out.H[n] -
                     inner(ginv, h, h);
  }
  return out;
}

inline InducedGeometry induced_geometry(const InitialData& data, const ScalarField& u) {
  return induced_geometry(data, u, analyze(data), default_gradient_threshold(data.grid));
}

/// Per-node stability-form ingredients.
struct StabilityFields {
  ScalarField Q;          ///< 1/2 R_Sigma - mu - J(N) - 1/2 |k_Sigma + h|^2
  ScalarField W_residual; ///< |P(k(N,.) + d|du| / |du|)|
  ScalarField hk;         ///< |h + k_Sigma|
};

inline StabilityFields stability_fields(const InitialData& data, const GeometryBundle& geo, const InducedGeometry& ig) {
  const Grid& grid = data.grid;
  StabilityFields out{ScalarField(grid), ScalarField(grid), ScalarField(grid)};
  const CoVectorField dgrad = fd::gradient(ig.grad);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!ig.valid[n]) continue;
    const Sym3& ginv = geo.metric.ginv[n];
    const Vec3& nu = ig.N_up[n];
    const Vec3& nd = ig.N[n];
    const Sym3 hk = ig.h[n] + ig.k_sigma[n];
    out.hk[n] = norm(ginv, hk);
    out.Q[n] = 0.5 * ig.R_sigma[n] - geo.cons.mu[n] - dot(geo.cons.J[n], nu) - 0.5 * inner(ginv, hk, hk);
    Vec3 w = raise(data.k[n], nu) + (1.0 / ig.grad[n]) * dgrad[n];
    const double wn = dot(w, nu);
    w = w - wn * nd;
    out.W_residual[n] = conorm(ginv, w);
  }
  return out;
}

/// Side-face quantities along the level curves.
struct FaceCurveFields {
  Face face;
  std::vector<double> sqrt_area;   ///< sqrt det of the induced face metric
  std::vector<double> grad_face;   ///< |d_F u|
  std::vector<double> kappa;       ///< H_F - Pi_F(N_F, N_F)
  std::vector<double> boundary;    ///< Pi_F(N, N) - k(N, nu)
  std::vector<double> u;
  std::size_t excluded = 0;
};

inline FaceCurveFields face_curve_fields(const InitialData& data, const ScalarField& u, const ConnectionField& gamma,
                                         Face face, double threshold) {
  const FaceGeometry fg = face_geometry(data, gamma, face);
  const CoVectorField du = fd::gradient(u);
  const int a = face.axis == 0 ? 1 : 0;
  const int b = face.axis == 2 ? 1 : 2;
  FaceCurveFields out;
  out.face = face;
  const std::size_t m = fg.nodes.size();
  out.sqrt_area.resize(m);
  out.grad_face.assign(m, 0.0);
  out.kappa.assign(m, 0.0);
  out.boundary.assign(m, 0.0);
  out.u.resize(m);
  for (std::size_t q = 0; q < m; ++q) {
    const std::size_t n = fg.nodes[q];
    const Sym3& g = data.g[n];
    const Sym3 ginv = inverse(g);
    out.sqrt_area[q] = std::sqrt(g(a, a) * g(b, b) - g(a, b) * g(a, b));
    out.u[q] = u[n];
    const Vec3& nu_up = fg.nu_up[q];
    const Vec3& nu_dn = fg.nu_down[q];
    Vec3 dF = du[n] - dot(du[n], nu_up) * nu_dn;
    const double sF = conorm(ginv, dF);
    out.grad_face[q] = sF;
    if (!(sF > threshold)) {
      ++out.excluded;
      continue;
    }
    const Vec3 NF = (1.0 / sF) * raise(ginv, dF);
    out.kappa[q] = fg.H[q] - contract(fg.Pi[q], NF, NF);
    const double s = conorm(ginv, du[n]);
    if (s > threshold) {
      const Vec3 N = (1.0 / s) * raise(ginv, du[n]);
      out.boundary[q] = contract(fg.Pi[q], N, N) - contract(data.k[n], N, nu_up);
    }
  }
  return out;
}

/// Line integrals over the level curves on a face, binned:
/// out[b][k] = (1/dt) int_{F cap slab_b} f_k |d_F u| dsigma.
template <std::size_t K>
std::vector<std::array<double, K>> face_coarea(const Grid& grid, const FaceCurveFields& fc,
                                               const std::array<const std::vector<double>*, K>& f, const Bins& bins) {
  const std::size_t N = grid.size();
  // face densities scattered into full-size arrays indexed by node
  std::vector<std::vector<double>> dens(K, std::vector<double>(N, 0.0));
  std::vector<double> uu(N, 0.0);
  const auto nodes = grid.face_nodes(fc.face);
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    uu[nodes[q]] = fc.u[q];
    for (std::size_t k = 0; k < K; ++k) dens[k][nodes[q]] = (*f[k])[q] * fc.grad_face[q] * fc.sqrt_area[q];
  }
  std::array<std::span<const double>, K> spans;
  for (std::size_t k = 0; k < K; ++k) spans[k] = dens[k];
  auto out = face_slab_integrals<K>(grid, fc.face, uu, spans, bins);
  for (auto& row : out)
    for (auto& v : row) v /= bins.width();
  return out;
}

/// Per-bin coarea averages (1/dt) int_slab f |du| dV.
template <std::size_t K>
std::vector<std::array<double, K>> coarea(const Grid& grid, const ScalarField& u, const ScalarField& grad,
                                          const ScalarField& sqrtg, const std::array<const ScalarField*, K>& f,
                                          const Bins& bins) {
  std::vector<std::vector<double>> dens(K, std::vector<double>(grid.size()));
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t n = 0; n < grid.size(); ++n) dens[k][n] = (*f[k])[n] * grad[n] * sqrtg[n];
  std::array<std::span<const double>, K> spans;
  for (std::size_t k = 0; k < K; ++k) spans[k] = dens[k];
  auto out = slab_integrals<K>(grid, u.values(), spans, bins);
  for (auto& row : out)
    for (auto& v : row) v /= bins.width();
  return out;
}

struct CoareaResult {
  std::vector<double> bins;  ///< (1/dt) int_slab f |du| dV
  double total = 0.0;        ///< same quadrature over the whole box
  double partition_sum = 0.0;
  std::vector<char> degenerate;
};

/// Public form: one integrand, with the partition identity reported.
inline CoareaResult coarea_integrate(const InitialData& data, const ScalarField& u, const ScalarField& f, int nbins) {
  if (nbins < 4) throw InputError("coarea binning needs at least 4 bins");
  const Grid& grid = data.grid;
  const MetricFields mf = metric_fields(data);
  const ScalarField grad = gradient_magnitude(data, u);
  ScalarField one(grid, 1.0);
  const Bins bins{nbins};
  const auto rows = coarea<2>(grid, u, grad, mf.sqrtg, {&f, &one}, bins);
  CoareaResult out;
  for (const auto& r : rows) {
    out.bins.push_back(r[0]);
    out.partition_sum += r[0] * bins.width();
    out.degenerate.push_back(r[1] <= 0.0);
  }
  // whole-box integral with the same piecewise-linear quadrature
  std::vector<double> dens(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) dens[n] = f[n] * grad[n] * mf.sqrtg[n];
  std::vector<double> flat(grid.size(), 0.5);
  const Bins one_bin{1};
  out.total = slab_integrals<1>(grid, flat, {std::span<const double>(dens)}, one_bin)[0][0];
  return out;
}

/// Interior angle where the level set meets an edge parallel to the BVP axis.
inline double corner_angle(const EdgeAngles& ea, const ScalarField& u, double t) {
  const std::size_t m = ea.nodes.size();
  for (std::size_t s = 0; s + 1 < m; ++s) {
    const double u0 = u[ea.nodes[s]], u1 = u[ea.nodes[s + 1]];
    if ((u0 - t) * (u1 - t) <= 0.0 && u0 != u1) {
      const double w = (t - u0) / (u1 - u0);
      return (1.0 - w) * ea.alpha[s] + w * ea.alpha[s + 1];
    }
  }
  // level outside the range of u on this edge: nearest end
  return std::abs(u[ea.nodes.front()] - t) < std::abs(u[ea.nodes.back()] - t) ? ea.alpha.front() : ea.alpha.back();
}

struct BinRecord {
  double t_lo = 0.0, t_hi = 0.0, t = 0.0;
  double area = 0.0;
  double half_R = 0.0;       ///< int 1/2 R_Sigma dA
  double kappa = 0.0;        ///< oint kappa dtau
  std::array<double, 4> angles{};
  double angle_sum = 0.0;
  int chi = 1;
  bool chi_computed = false;
  double theta_mean = 0.0, theta_max = 0.0;
  double hk_mean = 0.0, hk_max = 0.0;
  double grad_variation = 0.0;
  double Q_mean = 0.0, Q_min = 0.0, Q_max = 0.0;
  double W_mean = 0.0, W_max = 0.0;
  double boundary_term = 0.0;  ///< oint (Pi(N,N) - k(N,nu)) dtau
  double G11 = 0.0;
  double gauss_bonnet = 0.0;
  bool degenerate = false;
};

struct FoliationOptions {
  int bins = 20;
  double threshold = -1.0;  ///< negative: 1e-6 / diameter
  bool triangulate = false;
};

struct FoliationReport {
  MixedBVP bvp;
  int bins = 0;
  std::vector<BinRecord> rows;
  std::size_t excluded_nodes = 0;
  std::size_t excluded_face_nodes = 0;
  std::vector<std::string> anomalies;
};

/// int K dA + oint kappa + sum(pi - alpha_j) - 2 pi chi, per bin.
inline std::vector<double> gauss_bonnet_check(const FoliationReport& rep) {
  std::vector<double> out;
  for (const auto& r : rep.rows) {
    double corners = 0.0;
    for (double a : r.angles) corners += std::numbers::pi - a;
    out.push_back(r.half_R + r.kappa + corners - 2.0 * std::numbers::pi * r.chi);
  }
  return out;
}

/// Bin-wise analysis of the foliation by level sets of u.
inline FoliationReport foliate(const InitialData& data, const ScalarField& u, const MixedBVP& bvp,
                               const GeometryBundle& geo, const FoliationOptions& opt = {}) {
  if (opt.bins < 4) throw InputError("foliation needs at least 4 bins");
  const Grid& grid = data.grid;
  const double thr = opt.threshold < 0.0 ? default_gradient_threshold(grid) : opt.threshold;
  const InducedGeometry ig = induced_geometry(data, u, geo, thr);
  const StabilityFields st = stability_fields(data, geo, ig);
  const Bins bins{opt.bins};

  // moments for the detrended |du| variation and the area-weighted means
  const std::size_t N = grid.size();
  ScalarField one(grid, 1.0), s1(grid), s2(grid), su(grid), uu(grid), abs_theta(grid), halfR(grid);
  for (std::size_t n = 0; n < N; ++n) {
    s1[n] = ig.grad[n];
    s2[n] = ig.grad[n] * ig.grad[n];
    su[n] = ig.grad[n] * u[n];
    uu[n] = u[n] * u[n];
    abs_theta[n] = std::abs(ig.theta_plus[n]);
    halfR[n] = 0.5 * ig.R_sigma[n];
  }
  const auto vol = coarea<11>(grid, u, ig.grad, geo.metric.sqrtg,
                              {&one, &halfR, &abs_theta, &st.hk, &st.Q, &st.W_residual, &s1, &s2, &su, &u, &uu},
                              bins);

  FoliationReport rep;
  rep.bvp = bvp;
  rep.bins = opt.bins;
  rep.excluded_nodes = ig.excluded;
  rep.rows.resize(opt.bins);

  std::vector<std::array<double, 2>> side(opt.bins, std::array<double, 2>{});
  for (Face f : all_faces()) {
    if (!bvp.is_side(f)) continue;
    const FaceCurveFields fc = face_curve_fields(data, u, geo.gamma, f, thr);
    rep.excluded_face_nodes += fc.excluded;
    const auto li = face_coarea<2>(grid, fc, {&fc.kappa, &fc.boundary}, bins);
    for (int b = 0; b < opt.bins; ++b) {
      side[b][0] += li[b][0];
      side[b][1] += li[b][1];
    }
  }

  std::vector<EdgeAngles> corner_edges;
  for (Edge e : all_edges())
    if (e.axis == bvp.axis) corner_edges.push_back(dihedral_angles(data, e));

  // node-wise maxima per bin
  std::vector<double> theta_max(opt.bins, 0.0), hk_max(opt.bins, 0.0), W_max(opt.bins, 0.0);
  std::vector<double> Q_min(opt.bins, std::numeric_limits<double>::infinity());
  std::vector<double> Q_max(opt.bins, -std::numeric_limits<double>::infinity());
  for (std::size_t n = 0; n < N; ++n) {
    if (!ig.valid[n]) continue;
    const int b = bins.of(u[n]);
    theta_max[b] = std::max(theta_max[b], std::abs(ig.theta_plus[n]));
    hk_max[b] = std::max(hk_max[b], st.hk[n]);
    W_max[b] = std::max(W_max[b], st.W_residual[n]);
    Q_min[b] = std::min(Q_min[b], st.Q[n]);
    Q_max[b] = std::max(Q_max[b], st.Q[n]);
  }

  for (int b = 0; b < opt.bins; ++b) {
    BinRecord& r = rep.rows[b];
    const auto& v = vol[b];
    r.t_lo = bins.edge(b);
    r.t_hi = bins.edge(b + 1);
    r.t = bins.center(b);
    r.area = v[0];
    r.degenerate = !(r.area > 0.0);
    r.half_R = v[1];
    const double A = r.degenerate ? 1.0 : r.area;
    r.theta_mean = v[2] / A;
    r.hk_mean = v[3] / A;
    r.Q_mean = v[4] / A;
    r.W_mean = v[5] / A;
    // |du| variation after removing the linear trend in u across the bin
    const double ms = v[6] / A, mss = v[7] / A, msu = v[8] / A, mu = v[9] / A, muu = v[10] / A;
    const double var_s = mss - ms * ms, var_u = muu - mu * mu, cov = msu - ms * mu;
    double resid = var_s - (var_u > 0.0 ? cov * cov / var_u : 0.0);
    r.grad_variation = ms > 0.0 ? std::sqrt(std::max(0.0, resid)) / ms : 0.0;
    r.theta_max = theta_max[b];
    r.hk_max = hk_max[b];
    r.W_max = W_max[b];
    r.Q_min = std::isfinite(Q_min[b]) ? Q_min[b] : 0.0;
    r.Q_max = std::isfinite(Q_max[b]) ? Q_max[b] : 0.0;
    r.kappa = side[b][0];
    r.boundary_term = side[b][1];
    r.G11 = v[4] - r.boundary_term;
    for (std::size_t j = 0; j < corner_edges.size() && j < 4; ++j) r.angles[j] = corner_angle(corner_edges[j], u, r.t);
    r.angle_sum = r.angles[0] + r.angles[1] + r.angles[2] + r.angles[3];
    if (opt.triangulate) {
      const int chi = euler_characteristic(grid, u.values(), r.t);
      r.chi_computed = true;
      if (chi != 1)
        rep.anomalies.push_back("bin " + std::to_string(b) + ": triangulated level set has chi = " +
                                std::to_string(chi) + " (expected 1)");
      r.chi = chi;
    }
    if (r.degenerate) rep.anomalies.push_back("bin " + std::to_string(b) + " is empty");
  }
  const auto gb = gauss_bonnet_check(rep);
  for (int b = 0; b < opt.bins; ++b) rep.rows[b].gauss_bonnet = gb[b];
  return rep;
}

inline FoliationReport foliate(const InitialData& data, const ScalarField& u, const MixedBVP& bvp,
                               const FoliationOptions& opt = {}) {
  return foliate(data, u, bvp, analyze(data), opt);
}

/// Per-bin oint kappa over the side faces.
inline std::vector<double> boundary_geodesic_curvature(const InitialData& data, const ScalarField& u, Face face,
                                                       const MixedBVP& bvp, int nbins) {
  if (!bvp.is_side(face)) throw InputError("geodesic curvature is defined on the Neumann faces only");
  const FaceCurveFields fc =
      face_curve_fields(data, u, christoffel(data), face, default_gradient_threshold(data.grid));
  const auto li = face_coarea<1>(data.grid, fc, {&fc.kappa}, Bins{nbins});
  std::vector<double> out;
  for (const auto& r : li) out.push_back(r[0]);
  return out;
}

struct ComparisonResult {
  ScalarField residual;  ///< max(0, |d|X-Y|^2| - 2|k| |X-Y|^2)
  ScalarField lhs;
  ScalarField rhs;
  std::size_t excluded = 0;
};

/// Pointwise check of |d(|X - Y|^2)| <= 2 |k| |X - Y|^2 for the unit
/// gradient fields of two solutions.
inline ComparisonResult gradient_field_comparison(const InitialData& data, const ScalarField& u1, const ScalarField& u2,
                                                  double threshold = -1.0) {
  const Grid& grid = data.grid;
  if (threshold < 0.0) threshold = default_gradient_threshold(grid);
  const CoVectorField d1 = fd::gradient(u1), d2 = fd::gradient(u2);
  ScalarField f(grid);
  std::vector<char> ok(grid.size(), 1);
  ComparisonResult out{ScalarField(grid), ScalarField(grid), ScalarField(grid), 0};
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Sym3 ginv = inverse(data.g[n]);
    const double s1 = conorm(ginv, d1[n]), s2 = conorm(ginv, d2[n]);
    if (!(s1 > threshold) || !(s2 > threshold)) {
      ok[n] = 0;
      ++out.excluded;
      continue;
    }
    const Vec3 diff = (1.0 / s1) * d1[n] - (1.0 / s2) * d2[n];
    f[n] = contract(ginv, diff, diff);
  }
  const CoVectorField df = fd::gradient(f);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!ok[n]) continue;
    const Sym3 ginv = inverse(data.g[n]);
    out.lhs[n] = conorm(ginv, df[n]);
    out.rhs[n] = 2.0 * norm(ginv, data.k[n]) * f[n];
    out.residual[n] = std::max(0.0, out.lhs[n] - out.rhs[n]);
  }
  return out;
}

}  // namespace dihedral::levelset

#endif  // DIHEDRAL_LEVELSET_FOLIATION_HPP
