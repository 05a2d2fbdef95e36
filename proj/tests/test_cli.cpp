#include <gtest/gtest.h>

#include <yaml-cpp/yaml.h>

#include "support.hpp"

using namespace dihedral;
using namespace oracle;
namespace fs = std::filesystem;

namespace {

cli::RunConfig config(const std::string& model, int n, const std::string& dir) {
  cli::RunConfig c;
  c.model.name = model;
  c.grid = {n, n, n};
  c.out = scratch_dir(dir).string();
  return c;
}

int run(const std::string& cmd, const cli::RunConfig& c, std::string* log = nullptr) {
  std::ostringstream l, e;
  const int rc = cli::run(cmd, c, l, e);
  if (log) *log = l.str() + e.str();
  return rc;
}

std::string status_of(const cli::RunConfig& c) { return slurp(fs::path(c.out) / "status.txt"); }

}  // namespace

TEST(Config, Yaml) {
  cli::RunConfig c;
  cli::apply_yaml(c, YAML::Load(R"(
model:
  name: mp
  charge: 0.5
  center: [0.5, 0.5, -2]
  perturbation: {amplitude: 0.1, profile: paraboloid, width: 1.0}
grid: [9, 17, 33]
axis: 1
top: low
charged: true
solver: {tol: 1e-9, linearization: picard}
adm: {L: [4, 8], edge_measure: euclidean}
)"));
  EXPECT_EQ(c.model.name, "mp");
  EXPECT_EQ(c.model.charge, 0.5);
  EXPECT_EQ(c.model.center[2], -2.0);
  EXPECT_EQ(c.model.perturbation.profile.kind, Profile::Kind::Paraboloid);
  EXPECT_EQ(c.grid[1], 17);
  EXPECT_EQ(*c.axis, 1);
  EXPECT_EQ(*c.top, Side::Low);
  EXPECT_TRUE(c.charged);
  EXPECT_EQ(c.solver.linearization, Linearization::Picard);
  EXPECT_EQ(c.L.size(), 2u);
  EXPECT_EQ(c.adm.edge_measure, adm::EdgeMeasure::Euclidean);
  const auto b = cli::make_bvp(c);
  EXPECT_EQ(b.axis, 0);
  EXPECT_EQ(b.drift, DriftKind::Charged);
}

TEST(Config, Rejections) {
  cli::RunConfig c;
  EXPECT_THROW(cli::apply_yaml(c, YAML::Load("gird: 9")), InputError);
  EXPECT_THROW(cli::apply_yaml(c, YAML::Load("top: middle")), InputError);
  EXPECT_THROW(cli::apply_yaml(c, YAML::Load("grid: [9, 9]")), InputError);
  EXPECT_THROW(cli::apply_yaml(c, YAML::Load("solver: {linearization: halley}")), InputError);
  EXPECT_THROW(cli::apply_yaml(c, YAML::Load("- 1")), InputError);
  EXPECT_THROW(cli::load_config("/nonexistent/dihedral.yaml"), InputError);
  c.model.name = "kerr";
  EXPECT_THROW(cli::make_model(c), InputError);
}

TEST(Cli, SolveEuclidean) {
  auto c = config("euclidean", 33, "solve-euc");
  ASSERT_EQ(run("solve", c), 0);
  const auto rows = read_table(fs::path(c.out) / "u.txt");
  ASSERT_EQ(rows.size(), 33u * 33u * 33u);
  double err = 0.0;
  for (const auto& r : rows) err = std::max(err, std::abs(r[6] - r[5]));
  EXPECT_LT(err, 1e-12);
  EXPECT_NE(status_of(c).find("status: ok"), std::string::npos);
  EXPECT_TRUE(fs::exists(fs::path(c.out) / "solver_log.txt"));
  EXPECT_FALSE(fs::exists(fs::path(c.out) / "u.txt.partial"));
}

TEST(Cli, SolveHyperbolicReportsReferenceError) {
  auto c = config("hyperbolic", 17, "solve-hyp");
  ASSERT_EQ(run("solve", c), 0);
  const auto summary = slurp(fs::path(c.out) / "summary.txt");
  const auto pos = summary.find("reference_error: ");
  ASSERT_NE(pos, std::string::npos);
  const double err = std::stod(summary.substr(pos + 17));
  EXPECT_GT(err, 0.0);
  EXPECT_LT(err, 10.0 / 16 / 16);
  double own = 0.0;
  for (const auto& r : read_table(fs::path(c.out) / "u.txt")) own = std::max(own, std::abs(r[6] - hyp_u(r[3])));
  EXPECT_NEAR(own, err, 1e-9);
}

TEST(Cli, ChargedNeedsField) {
  auto c = config("euclidean", 9, "charged-euc");
  c.charged = true;
  std::string log;
  EXPECT_EQ(run("solve", c, &log), 1);
  EXPECT_NE(log.find("electric"), std::string::npos);
  EXPECT_NE(status_of(c).find("kind: input"), std::string::npos);
}

TEST(Cli, VerifyMPCharged) {
  auto c = config("mp", 17, "verify-mp");
  c.charged = true;
  std::string log;
  ASSERT_EQ(run("verify", c, &log), 0);
  EXPECT_NE(log.find("inequality master"), std::string::npos);
  EXPECT_EQ(log.find("violated"), std::string::npos) << log;
  for (const char* f : {"master.txt", "foliation.txt", "identities.txt", "summary.txt"})
    EXPECT_TRUE(fs::exists(fs::path(c.out) / f)) << f;
}

TEST(Cli, VerifyHyperbolicAndParaboloid) {
  auto c = config("hyperbolic", 17, "verify-hyp");
  std::string log;
  ASSERT_EQ(run("verify", c, &log), 0);
  EXPECT_NE(log.find("diagnosis: consistent"), std::string::npos) << log;
  EXPECT_NE(log.find("gauss-bonnet"), std::string::npos);

  auto p = config("euclidean", 17, "verify-par");
  p.model.perturbation.amplitude = 0.1;
  p.model.perturbation.profile.kind = Profile::Kind::Paraboloid;
  p.model.perturbation.profile.width = 1.0;
  ASSERT_EQ(run("verify", p, &log), 0);
  EXPECT_NE(log.find("boundary-dec"), std::string::npos);
  EXPECT_NE(log.find("cannot hold simultaneously"), std::string::npos) << log;
}

TEST(Cli, Foliate) {
  auto c = config("hyperbolic", 9, "foliate");
  c.bins = 8;
  ASSERT_EQ(run("foliate", c), 0);
  EXPECT_EQ(read_table(fs::path(c.out) / "foliation.txt").size(), 8u);
}

TEST(Cli, AdmSchwarzschild) {
  auto c = config("schwarzschild", 9, "adm");
  c.L = {16.0, 8.0};
  ASSERT_EQ(run("adm", c), 0);
  const auto rows = read_table(fs::path(c.out) / "adm.txt");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][0], 8.0);
  EXPECT_GT(rows[0][1], rows[1][1]);
  EXPECT_GT(rows[1][1], 1.0);
  EXPECT_EQ(rows[0][2], 0.0);

  // the direction only enters the momentum addend, which vanishes here
  auto d = c;
  d.a = {1.0, 0.0, 0.0};
  d.out = scratch_dir("adm-a").string();
  ASSERT_EQ(run("adm", d), 0);
  const auto other = read_table(fs::path(d.out) / "adm.txt");
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i], other[i]);

  auto e = config("euclidean", 9, "adm-euc");
  e.L = {4.0};
  ASSERT_EQ(run("adm", e), 0);
  const auto flat = read_table(fs::path(e.out) / "adm.txt");
  ASSERT_EQ(flat.size(), 1u);
  for (std::size_t i = 1; i < flat[0].size(); ++i) EXPECT_NEAR(flat[0][i], 0.0, 1e-12);

  auto h = config("hyperbolic", 9, "adm-hyp");
  EXPECT_EQ(run("adm", h), 1);
  EXPECT_NE(status_of(h).find("asymptotically flat"), std::string::npos);
}

TEST(Cli, RefineOrders) {
  auto c = config("hyperbolic", 9, "refine-hyp");
  c.refine_grids = {9, 17, 33};
  ASSERT_EQ(run("refine", c), 0);
  const auto rows = read_table(fs::path(c.out) / "refine.txt");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_GE(rows[2][3], 1.8);
  EXPECT_LE(rows[2][3], 2.2);

  auto e = config("euclidean", 9, "refine-euc");
  e.refine_grids = {9, 17};
  ASSERT_EQ(run("refine", e), 0);
  const auto text = slurp(fs::path(e.out) / "refine.txt");
  EXPECT_NE(text.find("undefined"), std::string::npos);

  auto s = config("schwarzschild", 9, "refine-s");
  s.refine_grids = {9, 17};
  EXPECT_EQ(run("refine", s), 1);
}

TEST(Cli, NonConvergenceLeavesPartials) {
  auto c = config("hyperbolic", 9, "noconv");
  c.solver.tol = 1e-30;
  c.solver.max_iter = 3;
  EXPECT_EQ(run("solve", c), 2);
  const auto st = status_of(c);
  EXPECT_NE(st.find("kind: nonconvergence"), std::string::npos);
  EXPECT_NE(st.find("partial: u.txt.partial"), std::string::npos);
  EXPECT_TRUE(fs::exists(fs::path(c.out) / "u.txt.partial"));
  EXPECT_FALSE(fs::exists(fs::path(c.out) / "u.txt"));
}

TEST(Cli, BadInputs) {
  auto c = config("euclidean", 9, "bad");
  c.grid = {2, 9, 9};
  EXPECT_EQ(run("solve", c), 1);
  EXPECT_EQ(run("transmogrify", config("euclidean", 9, "bad2")), 1);
  std::string log;
  EXPECT_EQ(run("models-list", c, &log), 0);
  EXPECT_NE(log.find("hyperbolic"), std::string::npos);
  EXPECT_NE(log.find("mp"), std::string::npos);
}

TEST(Cli, Deterministic) {
  auto a = config("hyperbolic", 9, "det-a");
  auto b = config("hyperbolic", 9, "det-b");
  a.model.perturbation.amplitude = b.model.perturbation.amplitude = 0.1;
  ASSERT_EQ(run("verify", a), 0);
  ASSERT_EQ(run("verify", b), 0);
  for (const char* f : {"u.txt", "master.txt", "foliation.txt", "summary.txt"})
    EXPECT_EQ(slurp(fs::path(a.out) / f), slurp(fs::path(b.out) / f)) << f;
}
