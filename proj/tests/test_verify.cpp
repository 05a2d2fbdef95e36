#include <gtest/gtest.h>

#include "support.hpp"

using namespace dihedral;
using namespace oracle;

namespace {

const MixedBVP hyp_bvp{0, Side::Low, DriftKind::Spacetime};
const MixedBVP z_bvp{2, Side::High, DriftKind::Spacetime};
const MixedBVP charged_bvp{2, Side::High, DriftKind::Charged};

ScalarField hyp_exact(const Grid& g) {
  return ScalarField::sample(g, [](const Vec3& x) { return hyp_u(x[0]); });
}

double sup_tensor(const InitialData& d, const SymTensorField& t) {
  double m = 0.0;
  for (std::size_t n = 0; n < d.grid.size(); ++n) m = std::max(m, norm(inverse(d.g[n]), t[n]));
  return m;
}

Model paraboloid() {
  Profile p;
  p.kind = Profile::Kind::Paraboloid;
  p.width = 1.0;
  return perturb(euclidean_cube(), ProfileSum{{p}}, 0.1);
}

}  // namespace

TEST(Verdict, Judge) {
  using verify::Verdict;
  EXPECT_EQ(verify::judge(0.2, 0.1), Verdict::Satisfied);
  EXPECT_EQ(verify::judge(0.1, 0.1), Verdict::WithinBand);
  EXPECT_EQ(verify::judge(-0.1, 0.1), Verdict::WithinBand);
  EXPECT_EQ(verify::judge(-0.2, 0.1), Verdict::Violated);
  EXPECT_STREQ(verify::to_string(Verdict::WithinBand), "within-band");
}

TEST(BoundaryTerm, HyperbolicDirichletFaces) {
  // |du| = e^x / (e - 1), so d_nu |du| = e/(e-1) at x = 1 and -1/(e-1) at x = 0
  std::vector<double> errs;
  for (int n : {17, 33}) {
    const auto d = sample(hyperbolic_prism(), n);
    const auto u = hyp_exact(d.grid);
    const auto far = verify::boundary_term_check(d, u, Face{0, Side::High}, hyp_bvp);
    const auto near = verify::boundary_term_check(d, u, Face{0, Side::Low}, hyp_bvp);
    EXPECT_TRUE(far.dirichlet);
    double err = 0.0;
    for (std::size_t q = 0; q < far.nodes.size(); ++q) {
      err = std::max(err, std::abs(far.direct[q] - e / (e - 1)));
      err = std::max(err, std::abs(far.formula[q] - e / (e - 1)));
      err = std::max(err, std::abs(near.direct[q] + 1 / (e - 1)));
      err = std::max(err, std::abs(near.formula[q] + 1 / (e - 1)));
    }
    errs.push_back(err);
  }
  EXPECT_LT(errs[1], 10.0 / 32);
  EXPECT_GT(order(errs[0], errs[1]), 0.8);
}

TEST(BoundaryTerm, HyperbolicSideFaces) {
  const auto d = sample(hyperbolic_prism(), 33);
  const auto u = hyp_exact(d.grid);
  for (Face f : {Face{1, Side::Low}, Face{1, Side::High}, Face{2, Side::Low}, Face{2, Side::High}}) {
    const auto c = verify::boundary_term_check(d, u, f, hyp_bvp);
    EXPECT_FALSE(c.dirichlet);
    EXPECT_LT(c.max_residual, 10.0 / 32 / 32);
  }
}

TEST(BoundaryTerm, EuclideanAllZero) {
  const auto d = sample(euclidean_cube(), 9);
  const auto u = ScalarField::sample(d.grid, [](const Vec3& x) { return x[2]; });
  for (Face f : all_faces()) EXPECT_LT(verify::boundary_term_check(d, u, f, z_bvp).max_residual, 1e-12);
}

TEST(Divergence, IdentityConverges) {
  std::vector<double> res;
  for (int n : {9, 17, 33}) {
    const auto d = sample(hyperbolic_prism(), n);
    const auto sol = solve_harmonic(d, hyp_bvp, newton_config());
    const auto c = verify::divergence_identity_check(d, sol.u);
    EXPECT_FALSE(c.absolute);
    res.push_back(c.residual);
  }
  EXPECT_LT(res[2], 20.0 / 32);
  EXPECT_GT(order(res[1], res[2]), 1.5);
}

TEST(Divergence, EuclideanAbsolute) {
  const auto d = sample(euclidean_cube(), 9);
  const auto u = ScalarField::sample(d.grid, [](const Vec3& x) { return x[2]; });
  const auto c = verify::divergence_identity_check(d, u);
  EXPECT_TRUE(c.absolute);
  EXPECT_LT(c.residual, 1e-12);
}

TEST(Master, EuclideanZero) {
  const auto d = sample(euclidean_cube(), 9);
  const auto u = ScalarField::sample(d.grid, [](const Vec3& x) { return x[2]; });
  const auto r = verify::master_inequality(d, u, z_bvp);
  EXPECT_NEAR(r.interior, 0.0, 1e-12);
  EXPECT_NEAR(r.boundary, 0.0, 1e-12);
  EXPECT_NEAR(r.rhs, 0.0, 1e-12);
  EXPECT_EQ(r.slack_verdict, verify::Verdict::WithinBand);
  EXPECT_FALSE(r.inconsistent);
  EXPECT_EQ(r.diagnosis, "consistent");
}

TEST(Master, HyperbolicSaturates) {
  std::vector<double> slack;
  for (int n : {9, 17, 33}) {
    const auto d = sample(hyperbolic_prism(), n);
    const auto sol = solve_harmonic(d, hyp_bvp, newton_config());
    const auto r = verify::master_inequality(d, sol.u, hyp_bvp);
    EXPECT_NE(r.slack_verdict, verify::Verdict::Violated);
    EXPECT_LE(std::abs(r.slack), r.band);
    EXPECT_NEAR(r.rhs, 0.0, 1e-12);
    for (const auto& hc : r.hypotheses) EXPECT_NE(hc.verdict, verify::Verdict::Violated) << hc.name;
    double faces = 0.0;
    for (double b : r.boundary_by_face) faces += b;
    EXPECT_NEAR(faces, r.boundary, 1e-12);
    EXPECT_NEAR(r.interior, r.interior_hessian + r.interior_energy + r.interior_current, 1e-12);
    slack.push_back(std::abs(r.slack));
  }
  EXPECT_GT(order(slack[0], slack[1]), 0.8);
  EXPECT_GT(order(slack[1], slack[2]), 0.8);
}

TEST(Master, StrictEnergyWithConcaveFaces) {
  const auto d = sample(paraboloid(), 17);
  const auto sol = solve_harmonic(d, z_bvp, newton_config());
  const auto r = verify::master_inequality(d, sol.u, z_bvp);
  EXPECT_GT(r.dec_min, 1.0);
  EXPECT_GT(r.interior, r.band);
  EXPECT_TRUE(r.inconsistent);
  EXPECT_NE(r.diagnosis.find("boundary-dec"), std::string::npos);
  for (const auto& hc : r.hypotheses)
    if (hc.name == "dec") EXPECT_EQ(hc.verdict, verify::Verdict::Satisfied);
}

TEST(Charged, MasterOnMP) {
  const MP mp;
  std::vector<double> slack;
  for (int n : {9, 17, 33}) {
    const auto d = sample(mp_slice(mp.q, mp.x0), n);
    const auto sol = solve_charged_harmonic(d, charged_bvp, newton_config());
    const auto r = verify::charged_master_inequality(d, sol.u, charged_bvp);
    EXPECT_TRUE(r.charged);
    EXPECT_NE(r.slack_verdict, verify::Verdict::Violated);
    for (const auto& hc : r.hypotheses) EXPECT_NE(hc.verdict, verify::Verdict::Violated) << hc.name;
    slack.push_back(std::abs(r.slack));
  }
  EXPECT_GT(order(slack[0], slack[2]), 1.6);
}

TEST(Charged, MarginsSaturateOnMP) {
  const MP mp;
  std::vector<double> in, face;
  for (int n : {17, 33}) {
    const auto d = sample(mp_slice(mp.q, mp.x0), n);
    const auto m = verify::charged_margins(d, analyze(d));
    in.push_back(sup_abs(m.interior));
    double f = 0.0;
    for (const auto& v : m.face)
      for (double x : v) f = std::max(f, std::abs(x));
    face.push_back(f);
  }
  EXPECT_LT(in[1], 10.0 / 32);
  EXPECT_LT(face[1], 10.0 / 32 / 32);
  EXPECT_GT(order(face[0], face[1]), 1.5);
}

TEST(Charged, NeedsField) {
  const auto d = sample(euclidean_cube(), 5);
  const auto u = ScalarField::sample(d.grid, [](const Vec3& x) { return x[2]; });
  EXPECT_THROW(verify::charged_master_inequality(d, u, charged_bvp), InputError);
  EXPECT_THROW(verify::charged_rigidity_residual(d), InputError);
  EXPECT_THROW(verify::conformal_flatten(d), InputError);
}

TEST(Rigidity, MPResidualConverges) {
  const MP mp;
  std::vector<double> r;
  for (int n : {17, 33}) {
    const auto d = sample(mp_slice(mp.q, mp.x0), n);
    r.push_back(sup_tensor(d, verify::charged_rigidity_residual(d)));
  }
  EXPECT_GT(r[0] / r[1], 3.0);
  EXPECT_LT(r[1], 0.05);
}

TEST(Rigidity, ConstantFieldOnFlatSpace) {
  // Ric = 0 and nabla E = 0, leaving E (x) E - |E|^2 g
  const Vec3 E{0.3, -0.2, 0.5};
  const auto d = sample(uniform_field(E), 5);
  const auto res = verify::charged_rigidity_residual(d);
  const double e2 = dot(E, E);
  for (std::size_t n = 0; n < d.grid.size(); ++n)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) EXPECT_NEAR(res[n](a, b), E[a] * E[b] - (a == b ? e2 : 0.0), 1e-12);
}

TEST(Flatten, MPIsConformallyFlat) {
  const MP mp;
  const auto d = sample(mp_slice(mp.q, mp.x0), 33);
  const auto f = verify::conformal_flatten(d);
  // h = log U up to the constant fixed at the low corner
  const double c = std::log(mp.U(d.grid.position({0, 0, 0})));
  EXPECT_LT(sup_error(f.potential, [&](const Vec3& x) { return std::log(mp.U(x)) - c; }), 10.0 / 32 / 32);
  EXPECT_LT(f.path_difference, 10.0 / 32 / 32);
  EXPECT_LT(f.ricci_sup, 0.05);
  EXPECT_LT(f.curl_sup, 10.0 / 32 / 32);
}

TEST(Flatten, ZeroField) {
  const auto d = sample(uniform_field({0, 0, 0}), 9);
  const auto f = verify::conformal_flatten(d);
  EXPECT_EQ(sup_abs(f.potential), 0.0);
  EXPECT_EQ(f.ricci_sup, 0.0);
}

TEST(Flatten, RejectsRotationalField) {
  auto d = sample(euclidean_cube(), 9);
  CoVectorField E(d.grid);
  for (std::size_t n = 0; n < d.grid.size(); ++n) {
    const Vec3 x = d.grid.position(d.grid.ijk(n));
    E[n] = {-x[1], x[0], 0.0};
  }
  d.electric = E;
  EXPECT_THROW(verify::conformal_flatten(d), InputError);
}
