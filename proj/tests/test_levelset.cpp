#include <gtest/gtest.h>

#include "support.hpp"

using namespace dihedral;
using namespace oracle;

namespace {

const MixedBVP hyp_bvp{0, Side::Low, DriftKind::Spacetime};
const MixedBVP z_bvp{2, Side::High, DriftKind::Spacetime};

ScalarField hyp_exact(const Grid& g) {
  return ScalarField::sample(g, [](const Vec3& x) { return hyp_u(x[0]); });
}

// bin average of the horosphere area e^{2 x(t)}, x(t) = log(e - t (e - 1))
double horosphere_bin(double t0, double t1) {
  const int m = 400;
  const double h = (t1 - t0) / m;
  double s = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double t = t0 + i * h;
    const double x = std::log(e - t * (e - 1.0));
    s += ((i == 0 || i == m) ? 1 : (i % 2 ? 4 : 2)) * std::exp(2 * x);
  }
  return s * h / 3.0 / (t1 - t0);
}

}  // namespace

TEST(Coarea, EuclideanUnitAreas) {
  const auto d = sample(euclidean_cube(), 17);
  const auto u = ScalarField::sample(d.grid, [](const Vec3& x) { return x[2]; });
  const auto r = levelset::coarea_integrate(d, u, ScalarField(d.grid, 1.0), 8);
  for (double b : r.bins) EXPECT_NEAR(b, 1.0, 1e-12);
  EXPECT_NEAR(r.partition_sum, r.total, 1e-12 * std::abs(r.total));
}

TEST(Coarea, HorosphereAreas) {
  for (int n : {17, 33}) {
    const auto d = sample(hyperbolic_prism(), n);
    const auto r = levelset::coarea_integrate(d, hyp_exact(d.grid), ScalarField(d.grid, 1.0), 10);
    const double h = d.grid.max_spacing();
    for (int b = 0; b < 10; ++b) {
      const double a = horosphere_bin(0.1 * b, 0.1 * (b + 1));
      EXPECT_NEAR(r.bins[b], a, 10 * h * h * a) << n;
    }
  }
}

TEST(Coarea, PartitionIdentity) {
  Profile p;
  p.box = Box::unit();
  const auto d = sample(perturb(hyperbolic_prism(), ProfileSum{{p}}, 0.2), 17);
  const auto sol = solve_harmonic(d, hyp_bvp, newton_config());
  const auto f = ScalarField::sample(d.grid, [](const Vec3& x) { return 1.0 + x[1] * std::sin(3 * x[2]); });
  for (int bins : {4, 7, 20}) {
    const auto r = levelset::coarea_integrate(d, sol.u, f, bins);
    EXPECT_NEAR(r.partition_sum, r.total, 1e-12 * std::abs(r.total));
  }
  EXPECT_THROW(levelset::coarea_integrate(d, sol.u, f, 3), InputError);
}

TEST(Coarea, VanishingGradientFlagsDegenerateBins) {
  const auto d = sample(euclidean_cube(), 9);
  const auto u = ScalarField::sample(d.grid, [](const Vec3& x) { return 0.5 * x[2]; });
  const auto r = levelset::coarea_integrate(d, u, ScalarField(d.grid, 1.0), 4);
  EXPECT_FALSE(r.degenerate[0]);
  EXPECT_TRUE(r.degenerate[3]);
}

TEST(Induced, EuclideanPlanes) {
  const auto d = sample(euclidean_cube(), 9);
  const auto u = ScalarField::sample(d.grid, [](const Vec3& x) { return x[2]; });
  const auto ig = levelset::induced_geometry(d, u);
  EXPECT_EQ(ig.excluded, 0u);
  EXPECT_LT(sup_abs(ig.H), 1e-12);
  EXPECT_LT(sup_abs(ig.R_sigma), 1e-12);
}

TEST(Induced, Horospheres) {
  const auto d = sample(hyperbolic_prism(), 33);
  const auto ig = levelset::induced_geometry(d, hyp_exact(d.grid));
  const double tol = 10.0 / 32 / 32;
  EXPECT_LT(sup_error(ig.H, [](const Vec3&) { return -2.0; }), tol);
  EXPECT_LT(sup_abs(ig.R_sigma), tol);
  EXPECT_LT(sup_abs(ig.theta_plus), tol);
  // h = -g_Sigma
  for (std::size_t n = 0; n < d.grid.size(); ++n) {
    const Sym3 gs = project_tangential(d.g[n], ig.N_up[n], ig.N[n]);
    EXPECT_LT(norm(inverse(d.g[n]), ig.h[n] + gs), tol);
  }
}

TEST(Induced, ThresholdExcludesFlatNodes) {
  const auto d = sample(euclidean_cube(), 9);
  const auto u = ScalarField(d.grid, 0.3);
  const auto ig = levelset::induced_geometry(d, u, analyze(d), 1e-6);
  EXPECT_EQ(ig.excluded, d.grid.size());
}

TEST(Induced, GraphMOTS) {
  const auto d = sample(minkowski_graph(), 33);
  const auto sol = solve_harmonic(d, z_bvp, newton_config());
  const auto ig = levelset::induced_geometry(d, sol.u);
  EXPECT_LT(sup_abs(ig.theta_plus), 10.0 / 32 / 32);
}

TEST(GeodesicCurvature, FlatAndTotallyGeodesicFaces) {
  const auto e = sample(euclidean_cube(), 9);
  const auto ue = ScalarField::sample(e.grid, [](const Vec3& x) { return x[2]; });
  for (double k : levelset::boundary_geodesic_curvature(e, ue, Face{0, Side::Low}, z_bvp, 8)) EXPECT_NEAR(k, 0.0, 1e-12);
  const auto h = sample(hyperbolic_prism(), 33);
  const auto uh = hyp_exact(h.grid);
  for (Face f : {Face{1, Side::Low}, Face{2, Side::High}})
    for (double k : levelset::boundary_geodesic_curvature(h, uh, f, hyp_bvp, 10)) EXPECT_NEAR(k, 0.0, 10.0 / 32 / 32);
  EXPECT_THROW(levelset::boundary_geodesic_curvature(h, uh, Face{0, Side::Low}, hyp_bvp, 10), InputError);
}

TEST(Foliation, EuclideanClosure) {
  const auto d = sample(euclidean_cube(), 17);
  const auto u = ScalarField::sample(d.grid, [](const Vec3& x) { return x[2]; });
  levelset::FoliationOptions opt;
  opt.triangulate = true;
  const auto rep = levelset::foliate(d, u, z_bvp, opt);
  ASSERT_EQ(rep.rows.size(), 20u);
  for (const auto& r : rep.rows) {
    EXPECT_NEAR(r.gauss_bonnet, 0.0, 1e-12);
    EXPECT_NEAR(r.area, 1.0, 1e-12);
    EXPECT_NEAR(r.angle_sum, 2 * std::numbers::pi, 1e-12);
    EXPECT_EQ(r.chi, 1);
    EXPECT_NEAR(r.Q_mean, 0.0, 1e-12);
    EXPECT_NEAR(r.W_max, 0.0, 1e-12);
    EXPECT_NEAR(r.G11, 0.0, 1e-12);
  }
  EXPECT_TRUE(rep.anomalies.empty());
}

TEST(Foliation, HyperbolicSaturation) {
  const auto d = sample(hyperbolic_prism(), 33);
  const auto sol = solve_harmonic(d, hyp_bvp, newton_config());
  levelset::FoliationOptions opt;
  opt.triangulate = true;
  const auto rep = levelset::foliate(d, sol.u, hyp_bvp, opt);
  const double h = d.grid.max_spacing();
  for (const auto& r : rep.rows) {
    EXPECT_LE(r.grad_variation, 5 * h);
    EXPECT_LE(r.theta_mean, 10 * h * h);
    EXPECT_LE(r.hk_mean, 10 * h * h);
    EXPECT_LE(std::abs(r.gauss_bonnet), h);
    EXPECT_NEAR(r.angle_sum, 2 * std::numbers::pi, h);
    EXPECT_LE(std::abs(r.Q_mean), 10 * h * h);
    EXPECT_LE(r.W_mean, 10 * h * h);
    EXPECT_LE(std::abs(r.G11), 2 * h);
    EXPECT_EQ(r.chi, 1);
  }
}

TEST(Foliation, PerturbedGaussBonnetConverges) {
  Profile p;
  p.box = Box::unit();
  std::vector<double> gb;
  for (int n : {9, 17, 33}) {
    const auto d = sample(perturb(euclidean_cube(), ProfileSum{{p}}, 0.1), n);
    const auto sol = solve_harmonic(d, z_bvp, newton_config());
    const auto rep = levelset::foliate(d, sol.u, z_bvp);
    double m = 0.0;
    for (double r : levelset::gauss_bonnet_check(rep)) m = std::max(m, std::abs(r));
    gb.push_back(m);
  }
  EXPECT_GE(order(gb[0], gb[1]), 0.8);
  EXPECT_GE(order(gb[1], gb[2]), 0.8);
}

TEST(Foliation, ChargedSliceStabilityReported) {
  const auto d = sample(mp_slice(1.0, {0.5, 0.5, -1.0}), 17);
  const auto u = ScalarField::sample(d.grid, [](const Vec3& x) { return x[2]; });
  const auto rep = levelset::foliate(d, u, z_bvp);
  for (const auto& r : rep.rows) {
    EXPECT_TRUE(std::isfinite(r.G11));
    EXPECT_TRUE(std::isfinite(r.Q_mean));
  }
}

TEST(Comparison, IdenticalFields) {
  const auto d = sample(hyperbolic_prism(), 9);
  const auto u = hyp_exact(d.grid);
  const auto c = levelset::gradient_field_comparison(d, u, u);
  EXPECT_EQ(sup_abs(c.residual), 0.0);
  EXPECT_EQ(sup_abs(c.lhs), 0.0);
}

TEST(Comparison, EuclideanOrthogonalPair) {
  const auto d = sample(euclidean_cube(), 9);
  const auto u1 = ScalarField::sample(d.grid, [](const Vec3& x) { return x[2]; });
  const auto u2 = ScalarField::sample(d.grid, [](const Vec3& x) { return x[0]; });
  const auto c = levelset::gradient_field_comparison(d, u1, u2);
  EXPECT_LT(sup_abs(c.lhs), 1e-12);
  EXPECT_EQ(sup_abs(c.rhs), 0.0);
}

TEST(Comparison, HyperbolicTwoOrientations) {
  const auto d = sample(hyperbolic_prism(), 17);
  const auto u1 = solve_harmonic(d, hyp_bvp, newton_config());
  const auto u2 = solve_harmonic(d, MixedBVP{1, Side::Low, DriftKind::Spacetime}, newton_config());
  const auto c = levelset::gradient_field_comparison(d, u1.u, u2.u);
  EXPECT_LE(sup_abs(c.residual), 10 * d.grid.max_spacing());
  EXPECT_EQ(c.excluded, 0u);
}
