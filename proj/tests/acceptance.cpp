// Acceptance run: one PASS/FAIL line per criterion, itemized checks above it.
// Exit status is the number of failing criteria.

#include <chrono>
#include <cstdio>

#include "support.hpp"

using namespace dihedral;
using namespace oracle;

namespace {

struct Criterion {
  int id;
  std::string title;
  bool ok = true;

  // value <= limit
  void le(const std::string& what, double value, double limit) {
    const bool pass = value <= limit;
    ok = ok && pass;
    std::printf("    %-4s %-58s %12.4e  <= %.4e\n", pass ? "ok" : "FAIL", what.c_str(), value, limit);
  }
  void in(const std::string& what, double value, double lo, double hi) {
    const bool pass = value >= lo && value <= hi;
    ok = ok && pass;
    std::printf("    %-4s %-58s %12.4f  in [%.2f, %.2f]\n", pass ? "ok" : "FAIL", what.c_str(), value, lo, hi);
  }
  void holds(const std::string& what, bool pass, const std::string& note = "") {
    ok = ok && pass;
    std::printf("    %-4s %-58s %s\n", pass ? "ok" : "FAIL", what.c_str(), note.c_str());
  }
  // order >= lo, where both errors at roundoff count as converged
  void order_ge(const std::string& what, double e1, double e2, double lo) {
    if (e1 <= 1e-12 && e2 <= 1e-12) {
      holds(what, true, "at machine precision (" + io::sci(std::max(e1, e2), 2) + "), order undefined");
      return;
    }
    const double o = order(e1, e2);
    const bool pass = o >= lo;
    ok = ok && pass;
    std::printf("    %-4s %-58s %12.4f  >= %.2f  (%.3e -> %.3e)\n", pass ? "ok" : "FAIL", what.c_str(), o, lo, e1, e2);
  }
};

std::vector<Criterion> results;

Criterion& open(int id, const std::string& title) {
  std::printf("[%d] %s\n", id, title.c_str());
  results.push_back({id, title});
  return results.back();
}

const MixedBVP hyp_bvp{0, Side::Low, DriftKind::Spacetime};
const MixedBVP z_bvp{2, Side::High, DriftKind::Spacetime};
const MixedBVP charged_bvp{2, Side::High, DriftKind::Charged};

double sup_tensor(const InitialData& d, const SymTensorField& t) {
  double m = 0.0;
  for (std::size_t n = 0; n < d.grid.size(); ++n) m = std::max(m, norm(inverse(d.g[n]), t[n]));
  return m;
}

double sup_J(const InitialData& d, const ConstraintBundle& cb) {
  double m = 0.0;
  for (std::size_t n = 0; n < d.grid.size(); ++n) m = std::max(m, conorm(inverse(d.g[n]), cb.J[n]));
  return m;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double gb_max(const levelset::FoliationReport& rep) { return max_abs(levelset::gauss_bonnet_check(rep)); }

std::string h_label(const Grid& g) { return std::to_string(g.n(0)) + "^3"; }

void euclidean_suite() {
  auto& c = open(1, "Euclidean exactness (33^3)");
  const auto d = sample(euclidean_cube(), 33);
  const auto sol = solve_harmonic(d, z_bvp, newton_config());
  c.le("sup |u - x3|", sup_error(sol.u, [](const Vec3& x) { return x[2]; }), 1e-12);
  const auto geo = analyze(d);
  c.le("sup |mu|", sup_abs(geo.cons.mu), 1e-10);
  c.le("sup |J|", sup_J(d, geo.cons), 1e-10);
  double H = 0.0, Pi = 0.0;
  for (Face f : all_faces()) {
    const auto fg = face_geometry(d, geo.gamma, f);
    H = std::max(H, max_abs(fg.H));
    for (std::size_t q = 0; q < fg.nodes.size(); ++q) Pi = std::max(Pi, norm(Sym3::identity(), fg.Pi[q]));
  }
  c.le("sup |H| over faces", H, 1e-10);
  c.le("sup |Pi| over faces", Pi, 1e-10);
  double angle = 0.0;
  for (Edge e : all_edges())
    for (double a : dihedral_angles(d, e).alpha) angle = std::max(angle, std::abs(a - std::numbers::pi / 2));
  c.le("sup |alpha - pi/2|", angle, 1e-10);
  levelset::FoliationOptions fo;
  fo.triangulate = true;
  const auto fol = levelset::foliate(d, sol.u, z_bvp, geo, fo);
  const auto m = verify::master_inequality(d, sol.u, z_bvp, geo, fol);
  const double terms = std::max({std::abs(m.interior_hessian), std::abs(m.interior_energy), std::abs(m.interior_current),
                                 std::abs(m.boundary), std::abs(m.rhs), std::abs(m.slack)});
  c.le("max |master-formula term|", terms, 1e-10);
  c.le("sup Gauss-Bonnet residual", gb_max(fol), 1e-10);
  const auto [E, P] = adm::adm_energy_momentum(euclidean_cube(), 8.0);
  const auto F = adm::deficit_decomposition(euclidean_cube(), 8.0, {0, 0, 1});
  c.le("|E|, |P|, |F| at L = 8", std::max({std::abs(E), std::sqrt(dot(P, P)), std::abs(F.total())}), 1e-10);
}

void hyperbolic_suite() {
  auto& c = open(2, "Hyperbolic prism (17^3 / 33^3 / 65^3)");
  std::vector<double> err, slack, gb;
  for (int n : {17, 33, 65}) {
    const auto d = sample(hyperbolic_prism(), n);
    const double h = d.grid.max_spacing();
    const auto geo = analyze(d);
    const auto sol = solve_harmonic(d, hyp_bvp, newton_config());
    err.push_back(sup_error(sol.u, [](const Vec3& x) { return hyp_u(x[0]); }));
    const auto fol = levelset::foliate(d, sol.u, hyp_bvp, geo);
    double var = 0.0, theta = 0.0, hk = 0.0;
    for (const auto& r : fol.rows) {
      var = std::max(var, r.grad_variation);
      theta = std::max(theta, r.theta_mean);
      hk = std::max(hk, r.hk_mean);
    }
    const std::string at = " (" + h_label(d.grid) + ")";
    c.le("per-bin |grad u| variation / h" + at, var / h, 5.0);
    c.le("per-bin mean |theta+| / h^2" + at, theta / (h * h), 10.0);
    c.le("per-bin mean |h + k_Sigma| / h^2" + at, hk / (h * h), 10.0);
    const auto fg = face_geometry(d, geo.gamma, Face{0, Side::High});
    double dH = 0.0;
    for (double v : fg.H) dH = std::max(dH, std::abs(v - 2.0));
    c.le("|H - 2| on x1 = 1, in units of h" + at, dH / h, 10.0);
    const auto m = verify::master_inequality(d, sol.u, hyp_bvp, geo, fol);
    slack.push_back(std::abs(m.slack) / h);
    gb.push_back(gb_max(fol));
  }
  c.in("solution order 17 -> 33", order(err[0], err[1]), 1.8, 2.2);
  c.in("solution order 33 -> 65", order(err[1], err[2]), 1.8, 2.2);
  // one constant for all three grids
  const double C = 10.0;
  for (std::size_t i = 0; i < slack.size(); ++i) c.le("|slack| / h, grid " + std::to_string(i), slack[i], C);
  c.order_ge("Gauss-Bonnet closure order 17 -> 33", gb[0], gb[1], 0.8);
  c.order_ge("Gauss-Bonnet closure order 33 -> 65", gb[1], gb[2], 0.8);
}

void graph_suite() {
  auto& c = open(3, "Minkowski graph f = 0.2 z^2 (33^3 / 65^3), two-orientation comparison");
  std::vector<double> err;
  for (int n : {33, 65}) {
    const auto d = sample(minkowski_graph(), n);
    const double h = d.grid.max_spacing();
    const auto geo = analyze(d);
    const auto sol = solve_harmonic(d, z_bvp, newton_config());
    err.push_back(sup_error(sol.u, [](const Vec3& x) { return graph_u(x[2]); }));
    const std::string at = " (" + h_label(d.grid) + ")";
    c.le("sup |mu| / h^2" + at, sup_abs(geo.cons.mu) / (h * h), 10.0);
    c.le("sup |J| / h^2" + at, sup_J(d, geo.cons) / (h * h), 10.0);
    c.le("sup |spacetime Hessian| / h^2" + at, sup_tensor(d, spacetime_hessian(d, sol.u, geo.gamma)) / (h * h), 10.0);
  }
  c.in("solution order 33 -> 65", order(err[0], err[1]), 1.8, 2.2);
  for (int n : {17, 33}) {
    const auto d = sample(hyperbolic_prism(), n);
    const auto u1 = solve_harmonic(d, hyp_bvp, newton_config());
    const auto u2 = solve_harmonic(d, MixedBVP{1, Side::Low, DriftKind::Spacetime}, newton_config());
    const auto cmp = levelset::gradient_field_comparison(d, u1.u, u2.u);
    c.le("comparison residual / h, x1 vs x2 (" + h_label(d.grid) + ")", sup_abs(cmp.residual) / d.grid.max_spacing(),
         10.0);
  }
}

void boundary_term_suite() {
  auto& c = open(4, "Normal derivative of |grad u| vs face formula");
  struct Case {
    const char* name;
    Model model;
    MixedBVP bvp;
  };
  for (const auto& cs : {Case{"hyperbolic", hyperbolic_prism(), hyp_bvp}, Case{"graph", minkowski_graph(), z_bvp}}) {
    std::vector<double> dir, neu;
    for (int n : {17, 33}) {
      const auto d = sample(cs.model, n);
      const auto sol = solve_harmonic(d, cs.bvp, newton_config());
      double a = 0.0, b = 0.0;
      for (Face f : all_faces()) {
        const auto chk = verify::boundary_term_check(d, sol.u, f, cs.bvp);
        (chk.dirichlet ? a : b) = std::max(chk.dirichlet ? a : b, chk.max_residual);
      }
      dir.push_back(a);
      neu.push_back(b);
    }
    c.order_ge(std::string(cs.name) + " Dirichlet faces, order 17 -> 33", dir[0], dir[1], 0.8);
    c.order_ge(std::string(cs.name) + " Neumann faces, order 17 -> 33", neu[0], neu[1], 0.8);
  }
}

void divergence_suite() {
  auto& c = open(5, "Divergence identity on saturating models");
  struct Case {
    const char* name;
    Model model;
    MixedBVP bvp;
  };
  const MP mp;
  for (const auto& cs : {Case{"hyperbolic", hyperbolic_prism(), hyp_bvp}, Case{"graph", minkowski_graph(), z_bvp},
                         Case{"mp", mp_slice(mp.q, mp.x0), charged_bvp}}) {
    std::vector<double> res;
    for (int n : {17, 33}) {
      const auto d = sample(cs.model, n);
      const auto sol = solve_harmonic(d, cs.bvp, newton_config());
      const auto chk = verify::divergence_identity_check(d, sol.u);
      res.push_back(chk.residual);
      c.le(std::string(cs.name) + " relative residual / h (" + h_label(d.grid) + ")", chk.residual / d.grid.max_spacing(),
           20.0);
    }
    c.holds(std::string(cs.name) + " residual decreases", res[1] < res[0], io::sci(res[0], 3) + " -> " + io::sci(res[1], 3));
  }
}

void adm_suite() {
  auto& c = open(6, "ADM and polyhedral functional, Schwarzschild m = 1");
  const auto t0 = std::chrono::steady_clock::now();
  const auto model = schwarzschild_slice(1.0, Box{{1, 1, 1}, {2, 2, 2}});
  const auto rep = adm::adm_sweep(model, {8.0, 16.0, 32.0}, {0, 0, 1});
  std::vector<double> dE, dF;
  bool P_zero = true;
  for (const auto& r : rep.records) {
    dE.push_back(std::abs(r.E - 1.0));
    dF.push_back(std::abs(r.F / adm::c3 - 1.0));
    P_zero = P_zero && r.P[0] == 0.0 && r.P[1] == 0.0 && r.P[2] == 0.0;
    std::printf("         L = %4.0f  E = %.6f  F/8pi = %.6f\n", r.L, r.E, r.F / adm::c3);
  }
  for (std::size_t i = 1; i < dE.size(); ++i) {
    c.le("|E - 1| ratio per doubling, inverted (" + std::to_string(i) + ")", dE[i] / dE[i - 1], 1.0 / 1.5);
    c.holds("|F/8pi - 1| decreasing (" + std::to_string(i) + ")", dF[i] < dF[i - 1]);
  }
  c.le("|F/8pi - 1| at L = 32", dF.back(), 0.10);
  c.holds("P == 0 exactly", P_zero);
  // momentum addend against a boosted flat model, k = c / r^2
  Model boosted = euclidean_cube();
  Sym3 kc;
  kc(0, 0) = 0.3;
  kc(0, 2) = 0.1;
  kc(1, 2) = 0.2;
  boosted.extrinsic = [kc](const Vec3& x) { return (1.0 / dot(x, x)) * kc; };
  std::array<double, 3> basis{};
  for (int i = 0; i < 3; ++i) {
    Vec3 a{};
    a[i] = 1.0;
    basis[i] = adm::deficit_decomposition(boosted, 8.0, a).momentum;
  }
  const Vec3 a{0.48, 0.6, 0.64};
  const double lin = adm::deficit_decomposition(boosted, 8.0, a).momentum;
  c.le("momentum addend linearity defect", std::abs(lin - (a[0] * basis[0] + a[1] * basis[1] + a[2] * basis[2])),
       1e-12 * (1 + std::abs(lin)));
  c.le("momentum addend with P = 0 (Schwarzschild, any a)",
       std::abs(adm::deficit_decomposition(model, 8.0, a).momentum), 0.0);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.le("sweep runtime [s]", secs, 300.0);
}

void charged_suite() {
  auto& c = open(7, "Charged suite, Majumdar-Papapetrou q = 1 (33^3)");
  const MP mp;
  const auto d = sample(mp_slice(mp.q, mp.x0), 33);
  const double h = d.grid.max_spacing(), h2 = h * h;
  const auto geo = analyze(d);
  const auto sol = solve_charged_harmonic(d, charged_bvp, newton_config());
  c.le("sup |u - x3|", sup_error(sol.u, [](const Vec3& x) { return x[2]; }), 1e-12);
  const auto m = verify::charged_margins(d, geo);
  c.le("sup |R - 2|E|^2| / h^2", sup_abs(m.interior) / h2, 10.0);
  double face = 0.0;
  for (const auto& v : m.face) face = std::max(face, max_abs(v));
  c.le("sup |H - 2<E, nu>| / h^2", face / h2, 10.0);
  c.le("sup |rigidity residual| / h^2", sup_tensor(d, verify::charged_rigidity_residual(d)) / h2, 10.0);
  c.le("sup |charged Hessian| / h^2", sup_tensor(d, charged_hessian(d, sol.u, geo.gamma)) / h2, 10.0);
  const auto fl = verify::conformal_flatten(d);
  c.le("sup |Ric(e^{-2h} g)| / h^2", fl.ricci_sup / h2, 10.0);
  c.le("potential path difference / h^2", fl.path_difference / h2, 10.0);
}

void robustness_suite() {
  auto& c = open(8, "Robustness, 20 seeded conformal perturbations (17^3)");
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> U01(0.0, 1.0);
  double lo = 0.0, hi = 0.0, partition = 0.0;
  bool deterministic = true;
  for (int trial = 0; trial < 20; ++trial) {
    ProfileSum phi;
    const int terms = 1 + trial % 3;
    for (int t = 0; t < terms; ++t) {
      Profile p;
      p.kind = Profile::Kind::Gaussian;
      p.center = {U01(rng), U01(rng), U01(rng)};
      p.width = 0.2 + 0.3 * U01(rng);
      p.weight = U01(rng) < 0.5 ? -1.0 : 1.0;
      phi.terms.push_back(p);
    }
    const double eps = 0.05 + 0.15 * U01(rng);
    const bool hyp = trial % 2 == 1;
    const auto bvp = hyp ? hyp_bvp : z_bvp;
    const auto d = sample(perturb(hyp ? hyperbolic_prism() : euclidean_cube(), phi, eps), 17);
    const auto a = solve_harmonic(d, bvp, newton_config());
    const auto b = solve_harmonic(d, bvp, newton_config());
    for (std::size_t n = 0; n < d.grid.size(); ++n) {
      lo = std::min(lo, a.u[n]);
      hi = std::max(hi, a.u[n]);
      deterministic = deterministic && a.u[n] == b.u[n];
    }
    const auto f = ScalarField::sample(d.grid, [](const Vec3& x) { return 1.0 + x[0] * x[1] - 0.5 * x[2]; });
    const auto co = levelset::coarea_integrate(d, a.u, f, 20);
    partition = std::max(partition, std::abs(co.partition_sum - co.total) / std::abs(co.total));
  }
  c.le("max(-min u, 0)", std::max(0.0, -lo), 0.0);
  c.le("max(max u - 1, 0)", std::max(0.0, hi - 1.0), 0.0);
  c.le("coarea partition identity, relative", partition, 1e-12);
  c.holds("two runs bit-identical", deterministic);

  struct Case {
    const char* name;
    Model model;
    MixedBVP bvp;
  };
  const MP mp;
  for (const auto& cs : {Case{"euclidean", euclidean_cube(), z_bvp}, Case{"hyperbolic", hyperbolic_prism(), hyp_bvp},
                         Case{"graph", minkowski_graph(), z_bvp}, Case{"mp", mp_slice(mp.q, mp.x0), charged_bvp}}) {
    const auto d = sample(cs.model, 17);
    const auto sol = solve_harmonic(d, cs.bvp, newton_config());
    const auto r = cs.bvp.drift == DriftKind::Charged ? verify::charged_master_inequality(d, sol.u, cs.bvp)
                                                      : verify::master_inequality(d, sol.u, cs.bvp);
    bool none = r.slack_verdict != verify::Verdict::Violated && !r.inconsistent;
    std::string worst = std::string("slack ") + verify::to_string(r.slack_verdict);
    for (const auto& hc : r.hypotheses) {
      none = none && hc.verdict != verify::Verdict::Violated;
      worst += ", " + hc.name + " " + verify::to_string(hc.verdict);
    }
    c.holds(std::string(cs.name) + ": no 'violated' verdict", none, worst);
  }
}

void nonexistence_suite() {
  auto& c = open(9, "Non-existence diagnostic: Euclidean cube with R > 0, k = 0 (17^3)");
  Profile p;
  p.kind = Profile::Kind::Paraboloid;
  p.width = 1.0;
  const auto d = sample(perturb(euclidean_cube(), ProfileSum{{p}}, 0.1), 17);
  const auto geo = analyze(d);
  double Rmin = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < d.grid.size(); ++n) Rmin = std::min(Rmin, geo.curv.scalar[n]);
  c.holds("inf R > 0", Rmin > 0.0, io::sci(Rmin, 3));
  const auto sol = solve_harmonic(d, z_bvp, newton_config());
  const auto r = verify::master_inequality(d, sol.u, z_bvp);
  c.holds("interior term > 0 beyond the band", r.interior > r.band,
          io::sci(r.interior, 3) + " vs band " + io::sci(r.band, 3));
  c.le("|RHS|", std::abs(r.rhs), 1e-12);
  c.holds("inconsistency flagged", r.inconsistent, r.diagnosis);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<void (*)()> suites{euclidean_suite,  hyperbolic_suite, graph_suite,
                                       boundary_term_suite, divergence_suite, adm_suite,
                                       charged_suite,    robustness_suite, nonexistence_suite};
  for (auto* s : suites) {
    try {
      s();
    } catch (const std::exception& e) {
      results.back().holds("exception", false, e.what());
    }
    std::fflush(stdout);
  }
  std::printf("\n");
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s criterion %d: %s\n", r.ok ? "PASS" : "FAIL", r.id, r.title.c_str());
    failed += r.ok ? 0 : 1;
  }
  std::printf("total %.1f s\n", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return failed;
}
