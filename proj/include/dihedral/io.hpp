#ifndef DIHEDRAL_IO_HPP
#define DIHEDRAL_IO_HPP

// Plain-text exports. Numbers go out with %.17g so a rerun with the same
// inputs reproduces files byte for byte.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "dihedral/adm/adm.hpp"
#include "dihedral/levelset/foliation.hpp"
#include "dihedral/solver/harmonic.hpp"
#include "dihedral/verify/master.hpp"

namespace dihedral::io {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string sci(double v, int digits = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*e", digits, v);
  return buf;
}

/// Columns `i j k x y z <names...>`, one node per line.
inline void write_fields(std::ostream& os, const std::vector<std::string>& names,
                         const std::vector<const ScalarField*>& fields) {
  if (fields.empty() || names.size() != fields.size()) throw InputError("field export: names/fields mismatch");
  const Grid& grid = fields.front()->grid();
  os << "# i j k x y z";
  for (const auto& n : names) os << ' ' << n;
  os << '\n';
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) {
        const Vec3 x = grid.position(i, j, k);
        os << i << ' ' << j << ' ' << k << ' ' << num(x[0]) << ' ' << num(x[1]) << ' ' << num(x[2]);
        for (const auto* f : fields) os << ' ' << num(f->at(i, j, k));
        os << '\n';
      }
}

inline void write_solver_log(std::ostream& os, const SolutionBundle& sol) {
  os << "# delta iteration residual update omega linear_iterations\n";
  for (const auto& r : sol.log)
    os << num(r.delta) << ' ' << r.iteration << ' ' << num(r.residual) << ' ' << num(r.update) << ' '
       << num(r.omega) << ' ' << r.linear_iterations << '\n';
}

inline const std::vector<std::string>& foliation_columns() {
  static const std::vector<std::string> cols{
      "bin", "t_lo", "t_hi", "t", "area", "half_R", "kappa", "angle1", "angle2", "angle3", "angle4", "angle_sum",
      "chi", "theta_mean", "theta_max", "hk_mean", "hk_max", "grad_variation", "Q_mean", "Q_min", "Q_max",
      "W_mean", "W_max", "boundary_term", "G11", "gauss_bonnet", "degenerate"};
  return cols;
}

/// One bin per row. half_R = int 1/2 R_Sigma dA, kappa = oint kappa over the
/// side faces, angles in radians, theta = |theta_+|, hk = |h + k_Sigma|,
/// G11 = int Q dA - oint boundary_term, gauss_bonnet = closure residual.
inline void write_foliation(std::ostream& os, const levelset::FoliationReport& rep) {
  os << "# axis " << rep.bvp.axis + 1 << " top " << (rep.bvp.top_side == Side::High ? "high" : "low") << " bins "
     << rep.bins << " excluded_nodes " << rep.excluded_nodes << " excluded_face_nodes " << rep.excluded_face_nodes
     << '\n';
  os << '#';
  for (const auto& c : foliation_columns()) os << ' ' << c;
  os << '\n';
  for (std::size_t b = 0; b < rep.rows.size(); ++b) {
    const auto& r = rep.rows[b];
    os << b;
    for (double v : {r.t_lo, r.t_hi, r.t, r.area, r.half_R, r.kappa, r.angles[0], r.angles[1], r.angles[2],
                     r.angles[3], r.angle_sum})
      os << ' ' << num(v);
    os << ' ' << r.chi;
    for (double v : {r.theta_mean, r.theta_max, r.hk_mean, r.hk_max, r.grad_variation, r.Q_mean, r.Q_min, r.Q_max,
                     r.W_mean, r.W_max, r.boundary_term, r.G11, r.gauss_bonnet})
      os << ' ' << num(v);
    os << ' ' << (r.degenerate ? 1 : 0) << '\n';
  }
  for (const auto& a : rep.anomalies) os << "# anomaly: " << a << '\n';
}

/// `key: value` lines, grouped in blocks, followed by a table for people.
inline void write_master(std::ostream& os, const verify::MasterReport& r) {
  os << "[master]\n";
  os << "charged: " << (r.charged ? "true" : "false") << '\n';
  os << "h: " << num(r.h) << '\n';
  os << "band: " << num(r.band) << '\n';
  os << "hypothesis_band: " << num(r.hypothesis_band) << '\n';
  os << "\n[interior]\n";
  os << "total: " << num(r.interior) << '\n';
  os << "hessian: " << num(r.interior_hessian) << '\n';
  os << "energy: " << num(r.interior_energy) << '\n';
  os << "current: " << num(r.interior_current) << '\n';
  os << "\n[boundary]\n";
  os << "total: " << num(r.boundary) << '\n';
  for (Face f : all_faces()) os << f.name() << ": " << num(r.boundary_by_face[static_cast<std::size_t>(f.index())]) << '\n';
  os << "edge_budget: " << num(r.edge_budget) << '\n';
  if (r.charged) os << "dirichlet_correction: " << num(r.dirichlet_correction) << '\n';
  os << "\n[rhs]\n";
  os << "gauss_bonnet: " << num(r.rhs) << '\n';
  os << "curvature: " << num(r.rhs_curvature) << '\n';
  os << "\n[slack]\n";
  os << "value: " << num(r.slack) << '\n';
  os << "verdict: " << verify::to_string(r.slack_verdict) << '\n';
  os << "\n[margins]\n";
  os << "dec_min: " << num(r.dec_min) << '\n';
  os << "angle_max: " << num(r.angle_max) << '\n';
  for (const auto& f : r.faces) {
    os << f.face.name() << ".boundary_dec: " << num(f.boundary_dec) << '\n';
    os << f.face.name() << ".orientation_margin: " << num(f.lemma) << '\n';
    os << f.face.name() << ".mean_curvature_min: " << num(f.mean_curvature_min) << '\n';
  }
  os << "\n[hypotheses]\n";
  for (const auto& c : r.hypotheses)
    os << c.name << ": " << verify::to_string(c.verdict) << " margin " << num(c.margin) << '\n';
  os << "\n[diagnosis]\n";
  os << "inconsistent: " << (r.inconsistent ? "true" : "false") << '\n';
  os << "message: " << r.diagnosis << '\n';
  os << "excluded_nodes: " << r.excluded_nodes << '\n';
  for (const auto& a : r.anomalies) os << "anomaly: " << a << '\n';

  os << "\n# term                      value\n";
  auto row = [&](const std::string& name, double v) {
    std::string pad = name;
    pad.resize(26, ' ');
    os << "# " << pad << sci(v) << '\n';
  };
  row("interior", r.interior);
  row("boundary", r.boundary);
  row("lhs", r.interior + r.boundary);
  row("rhs", r.rhs);
  row("slack", r.slack);
  row("edge budget", r.edge_budget);
}

/// Columns L E P1 P2 P3 F minus_H momentum angle.
inline void write_adm(std::ostream& os, const adm::AdmReport& r) {
  os << "# model " << r.model << " a " << num(r.a[0]) << ',' << num(r.a[1]) << ',' << num(r.a[2]) << " c "
     << num(r.c) << '\n';
  os << "# L E P1 P2 P3 F minus_H momentum angle\n";
  for (const auto& x : r.records)
    os << num(x.L) << ' ' << num(x.E) << ' ' << num(x.P[0]) << ' ' << num(x.P[1]) << ' ' << num(x.P[2]) << ' '
       << num(x.F) << ' ' << num(x.deficit.mean_curvature) << ' ' << num(x.deficit.momentum) << ' '
       << num(x.deficit.angle) << '\n';
}

}  // namespace dihedral::io

#endif  // DIHEDRAL_IO_HPP
