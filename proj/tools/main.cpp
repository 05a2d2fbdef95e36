// dihedral-lab: solve, verify, foliate, adm, refine, models list.
// Flags override values read from --config.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dihedral/cli/commands.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> model;
  std::vector<int> grid;
  std::optional<int> axis;
  std::optional<std::string> top;
  std::optional<int> bins;
  std::optional<double> delta0, delta_min, delta_factor, tol;
  std::optional<std::string> linearization;
  std::optional<std::string> out;
  std::vector<double> a;
  std::vector<double> L;
  std::optional<double> spacing;
  bool charged = false;
  std::vector<int> grids;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "YAML run configuration")->check(CLI::ExistingFile);
  app->add_option("--model", f.model, "model name (see 'models list')");
  app->add_option("--grid", f.grid, "nodes per axis: N or Nx,Ny,Nz")->delimiter(',')->expected(1, 3);
  app->add_option("--axis", f.axis, "Dirichlet axis, 1..3");
  app->add_option("--top", f.top, "face carrying u = 1: low | high");
  app->add_option("--bins", f.bins, "level-set bins");
  app->add_option("--delta0", f.delta0, "initial regularization");
  app->add_option("--delta-min", f.delta_min, "final regularization");
  app->add_option("--delta-factor", f.delta_factor, "regularization reduction factor");
  app->add_option("--tol", f.tol, "nonlinear tolerance");
  app->add_option("--linearization", f.linearization, "newton | picard");
  app->add_option("--out", f.out, "output directory");
  app->add_flag("--charged", f.charged, "charged harmonic operator");
}

dihedral::cli::RunConfig build(const Flags& f) {
  using namespace dihedral;
  cli::RunConfig c = f.config.empty() ? cli::RunConfig{} : cli::load_config(f.config);
  if (f.model) c.model.name = *f.model;
  if (f.grid.size() == 1) c.grid = {f.grid[0], f.grid[0], f.grid[0]};
  else if (f.grid.size() == 3) c.grid = {f.grid[0], f.grid[1], f.grid[2]};
  else if (!f.grid.empty()) throw InputError("--grid takes 1 or 3 values");
  if (f.axis) c.axis = *f.axis;
  if (f.top) c.top = cli::detail::side(*f.top);
  if (f.bins) c.bins = *f.bins;
  if (f.delta0) c.solver.delta0 = *f.delta0;
  if (f.delta_min) c.solver.delta_min = *f.delta_min;
  if (f.delta_factor) c.solver.delta_factor = *f.delta_factor;
  if (f.tol) c.solver.tol = *f.tol;
  if (f.linearization) {
    if (*f.linearization == "newton") c.solver.linearization = Linearization::Newton;
    else if (*f.linearization == "picard") c.solver.linearization = Linearization::Picard;
    else throw InputError("--linearization must be newton or picard");
  }
  if (f.out) c.out = *f.out;
  if (f.charged) c.charged = true;
  if (!f.a.empty()) {
    if (f.a.size() != 3) throw InputError("--a takes three components");
    c.a = {f.a[0], f.a[1], f.a[2]};
  }
  if (!f.L.empty()) c.L = f.L;
  if (f.spacing) c.adm.spacing = *f.spacing;
  if (!f.grids.empty()) c.refine_grids = f.grids;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic level sets, dihedral rigidity and ADM diagnostics on coordinate boxes"};
  app.require_subcommand(1);
  Flags f;

  auto* solve = app.add_subcommand("solve", "solve the spacetime (or charged) harmonic problem");
  auto* verify = app.add_subcommand("verify", "solve, then check the master inequality and identities");
  auto* foliate = app.add_subcommand("foliate", "solve, then tabulate level-set quantities");
  auto* adm = app.add_subcommand("adm", "ADM energy-momentum and polyhedral functional on cubes [-L, L]^3");
  auto* refine = app.add_subcommand("refine", "grid refinement study against a closed-form solution");
  auto* models = app.add_subcommand("models", "model catalogue");
  models->add_subcommand("list", "list the built-in models")->final_callback([] {});
  models->require_subcommand(1);

  for (auto* s : {solve, verify, foliate, adm, refine}) add_common(s, f);
  adm->add_option("--a", f.a, "unit direction a, x,y,z")->delimiter(',')->expected(3);
  adm->add_option("--L", f.L, "cube half-widths")->delimiter(',');
  adm->add_option("--spacing", f.spacing, "face node spacing");
  refine->add_option("--grids", f.grids, "grid sizes, e.g. 17,33,65")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : dihedral::cli::BadInput;
  }

  if (models->parsed()) return dihedral::cli::run("models-list", {}, std::cout, std::cerr);

  std::string command;
  for (auto* s : {solve, verify, foliate, adm, refine})
    if (s->parsed()) command = s->get_name();

  dihedral::cli::RunConfig cfg;
  try {
    cfg = build(f);
  } catch (const dihedral::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dihedral::cli::BadInput;
  }
  return dihedral::cli::run(command, cfg, std::cout, std::cerr);
}
