#ifndef DIHEDRAL_CLI_COMMANDS_HPP
#define DIHEDRAL_CLI_COMMANDS_HPP

// Subcommands. Every file is written as <name>.partial and renamed once the
// command has finished; a failed run leaves the .partial files and a
// status.txt error record behind.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "dihedral/cli/config.hpp"
#include "dihedral/io.hpp"
#include "dihedral/verify/charged.hpp"

namespace dihedral::cli {

enum ExitCode { Ok = 0, BadInput = 1, NoConvergence = 2, Failure = 3 };

class Outputs {
 public:
  explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& fill) {
    const auto path = dir_ / (name + ".partial");
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    fill(os);
    if (!os) throw std::runtime_error("write failed for " + path.string());
    pending_.push_back(name);
  }

  void commit() {
    for (const auto& n : pending_) std::filesystem::rename(dir_ / (n + ".partial"), dir_ / n);
    pending_.clear();
  }

  void status(const std::string& command, const std::string& kind, const std::string& message) const {
    std::ofstream os(dir_ / "status.txt");
    os << "command: " << command << '\n';
    if (kind.empty()) {
      os << "status: ok\n";
      return;
    }
    os << "status: error\nkind: " << kind << "\nmessage: " << message << '\n';
    for (const auto& n : pending_) os << "partial: " << n << ".partial\n";
  }

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> pending_;
};

struct Problem {
  Model model;
  InitialData data;
  MixedBVP bvp;
};

inline Problem make_problem(const RunConfig& cfg, std::array<int, 3> dims) {
  Problem p{make_model(cfg), {}, make_bvp(cfg)};
  p.data = sample(p.model, Grid(dims, p.model.box.lo, p.model.box.hi));
  if (p.bvp.drift == DriftKind::Charged && !p.data.electric)
    throw InputError("model '" + cfg.model.name + "' carries no electric field; drop --charged");
  return p;
}

inline std::string describe(const MixedBVP& b) {
  return "axis x" + std::to_string(b.axis + 1) + ", u = 1 on the " + (b.top_side == Side::High ? "high" : "low") +
         " face, " + (b.drift == DriftKind::Charged ? "charged" : "spacetime") + " harmonic";
}

inline double reference_error(const RunConfig& cfg, const Problem& p, const ScalarField& u, bool& known) {
  const auto ref = reference(cfg, p.model);
  known = ref.has_value();
  if (!known) return 0.0;
  double e = 0.0;
  const Grid& g = p.data.grid;
  for (std::size_t n = 0; n < g.size(); ++n) e = std::max(e, std::abs(u[n] - (*ref)(g.position(g.ijk(n)))));
  return e;
}

// Solve and write u.txt and solver_log.txt; partial results are written on failure.
inline SolutionBundle solve_and_write(const Problem& p, const RunConfig& cfg, Outputs& out) {
  try {
    auto sol = solve_harmonic(p.data, p.bvp, cfg.solver);
    out.write("u.txt", [&](std::ostream& os) { io::write_fields(os, {"u", "grad"}, {&sol.u, &sol.grad_mag}); });
    out.write("solver_log.txt", [&](std::ostream& os) { io::write_solver_log(os, sol); });
    return sol;
  } catch (const SolveFailure& f) {
    const auto& s = f.partial();
    out.write("u.txt", [&](std::ostream& os) { io::write_fields(os, {"u", "grad"}, {&s.u, &s.grad_mag}); });
    out.write("solver_log.txt", [&](std::ostream& os) { io::write_solver_log(os, s); });
    throw;
  }
}

inline void cmd_solve(const RunConfig& cfg, Outputs& out, std::ostream& log) {
  const Problem p = make_problem(cfg, cfg.grid);
  const auto sol = solve_and_write(p, cfg, out);
  bool known = false;
  const double err = reference_error(cfg, p, sol.u, known);
  out.write("summary.txt", [&](std::ostream& os) {
    os << "model: " << p.model.name << "\n";
    os << "grid: " << cfg.grid[0] << 'x' << cfg.grid[1] << 'x' << cfg.grid[2] << "\n";
    os << "problem: " << describe(p.bvp) << "\n";
    os << "iterations: " << sol.total_iterations << "\n";
    os << "stages: " << sol.stages.size() << "\n";
    os << "final_residual: " << io::num(sol.stages.empty() ? 0.0 : sol.stages.back().residual) << "\n";
    os << "min_grad: " << io::num(sol.min_grad) << "\n";
    for (const auto& st : sol.stages)
      os << "stage: delta " << io::num(st.delta) << " iterations " << st.iterations << " drift " << io::num(st.drift)
         << "\n";
    if (known) os << "reference_error: " << io::num(err) << "\n";
  });
  log << "solved " << p.model.name << " on " << cfg.grid[0] << "^3 (" << describe(p.bvp) << ") in "
      << sol.total_iterations << " iterations\n";
  if (known) log << "sup error vs closed form: " << io::sci(err, 3) << "\n";
}

inline void cmd_foliate(const RunConfig& cfg, Outputs& out, std::ostream& log) {
  const Problem p = make_problem(cfg, cfg.grid);
  const auto sol = solve_and_write(p, cfg, out);
  levelset::FoliationOptions fo;
  fo.bins = cfg.bins;
  fo.triangulate = true;
  const auto rep = levelset::foliate(p.data, sol.u, p.bvp, fo);
  out.write("foliation.txt", [&](std::ostream& os) { io::write_foliation(os, rep); });
  double gb = 0.0;
  for (const auto& r : rep.rows) gb = std::max(gb, std::abs(r.gauss_bonnet));
  log << "foliation: " << rep.bins << " bins, max |Gauss-Bonnet residual| " << io::sci(gb, 3) << ", "
      << rep.anomalies.size() << " anomalies\n";
}

inline void cmd_verify(const RunConfig& cfg, Outputs& out, std::ostream& log) {
  const Problem p = make_problem(cfg, cfg.grid);
  const auto sol = solve_and_write(p, cfg, out);
  const GeometryBundle geo = analyze(p.data);
  levelset::FoliationOptions fo;
  fo.bins = cfg.bins;
  fo.triangulate = true;
  const auto fol = levelset::foliate(p.data, sol.u, p.bvp, geo, fo);
  verify::MasterOptions mo;
  mo.bins = cfg.bins;
  mo.band_constant = cfg.band_constant;
  const bool charged = p.bvp.drift == DriftKind::Charged;
  const auto master = charged ? verify::charged_master_inequality(p.data, sol.u, p.bvp, geo, fol, mo)
                              : verify::master_inequality(p.data, sol.u, p.bvp, geo, fol, mo);
  const auto div = verify::divergence_identity_check(p.data, sol.u);
  std::vector<verify::BoundaryTermCheck> btc;
  for (Face f : all_faces()) btc.push_back(verify::boundary_term_check(p.data, sol.u, f, p.bvp));
  double gb = 0.0;
  for (const auto& r : fol.rows) gb = std::max(gb, std::abs(r.gauss_bonnet));

  out.write("master.txt", [&](std::ostream& os) { io::write_master(os, master); });
  out.write("foliation.txt", [&](std::ostream& os) { io::write_foliation(os, fol); });
  std::vector<std::string> lines;
  for (const auto& c : master.hypotheses)
    lines.push_back("hypothesis " + c.name + ": " + verify::to_string(c.verdict) + " (margin " + io::sci(c.margin, 3) +
                    ", band " + io::sci(c.band, 3) + ")");
  auto identity = [&](const std::string& name, double r, double band) {
    lines.push_back("identity " + name + ": " + verify::to_string(verify::judge(-std::abs(r), band)) +
                    " (residual " + io::sci(r, 3) + ", band " + io::sci(band, 3) + ")");
  };
  lines.push_back("inequality master: " + std::string(verify::to_string(master.slack_verdict)) + " (slack " +
                  io::sci(master.slack, 3) + ", band " + io::sci(master.band, 3) + ")");
  identity("divergence", div.residual, 20.0 * master.h);
  for (const auto& b : btc) identity("boundary-term " + b.face.name(), b.max_residual, master.band);
  identity("gauss-bonnet", gb, master.band);
  if (charged) identity("dirichlet-correction", master.dirichlet_correction, master.band);
  lines.push_back("diagnosis: " + master.diagnosis);

  out.write("identities.txt", [&](std::ostream& os) {
    os << "divergence.boundary: " << io::num(div.boundary) << "\n";
    os << "divergence.volume: " << io::num(div.volume) << "\n";
    os << "divergence.residual: " << io::num(div.residual) << "\n";
    os << "divergence.absolute: " << (div.absolute ? "true" : "false") << "\n";
    for (const auto& b : btc) {
      os << "boundary_term." << b.face.name() << ".type: " << (b.dirichlet ? "dirichlet" : "neumann") << "\n";
      os << "boundary_term." << b.face.name() << ".max_residual: " << io::num(b.max_residual) << "\n";
      os << "boundary_term." << b.face.name() << ".excluded: " << b.excluded << "\n";
    }
    os << "gauss_bonnet.max_residual: " << io::num(gb) << "\n";
  });
  out.write("summary.txt", [&](std::ostream& os) {
    for (const auto& l : lines) os << l << "\n";
  });
  for (const auto& l : lines) log << l << "\n";
}

inline void cmd_adm(const RunConfig& cfg, Outputs& out, std::ostream& log) {
  const Model model = make_model(cfg);
  const auto rep = adm::adm_sweep(model, cfg.L, cfg.a, cfg.adm);
  out.write("adm.txt", [&](std::ostream& os) { io::write_adm(os, rep); });
  log << "# L E |P| F/(8pi)\n";
  for (const auto& r : rep.records)
    log << io::num(r.L) << ' ' << io::sci(r.E) << ' ' << io::sci(std::sqrt(dot(r.P, r.P))) << ' '
        << io::sci(r.F / rep.c) << '\n';
}

/// Observed order between two errors; nullopt when both sit at roundoff.
inline std::optional<double> observed_order(double e1, double e2, double h1, double h2, double floor = 1e-12) {
  if (e1 <= floor && e2 <= floor) return std::nullopt;
  if (!(e1 > 0.0) || !(e2 > 0.0)) return std::nullopt;
  return std::log(e1 / e2) / std::log(h1 / h2);
}

struct RefineRow {
  int n = 0;
  double h = 0.0;
  double error = 0.0;
  double gauss_bonnet = 0.0;
  std::optional<double> order, gb_order;
};

inline std::vector<RefineRow> refinement_study(const RunConfig& cfg) {
  std::vector<RefineRow> rows;
  for (int n : cfg.refine_grids) {
    const Problem p = make_problem(cfg, {n, n, n});
    const auto sol = solve_harmonic(p.data, p.bvp, cfg.solver);
    bool known = false;
    RefineRow r;
    r.n = n;
    r.h = p.data.grid.max_spacing();
    r.error = reference_error(cfg, p, sol.u, known);
    if (!known) throw InputError("model '" + cfg.model.name + "' has no closed-form solution for this problem");
    levelset::FoliationOptions fo;
    fo.bins = cfg.bins;
    const auto fol = levelset::foliate(p.data, sol.u, p.bvp, fo);
    for (const auto& b : fol.rows) r.gauss_bonnet = std::max(r.gauss_bonnet, std::abs(b.gauss_bonnet));
    if (!rows.empty()) {
      r.order = observed_order(rows.back().error, r.error, rows.back().h, r.h);
      r.gb_order = observed_order(rows.back().gauss_bonnet, r.gauss_bonnet, rows.back().h, r.h);
    }
    rows.push_back(r);
  }
  return rows;
}

inline void cmd_refine(const RunConfig& cfg, Outputs& out, std::ostream& log) {
  const auto rows = refinement_study(cfg);
  auto ord = [](const std::optional<double>& o, bool first) {
    return first ? std::string("-") : (o ? io::sci(*o, 3) : std::string("undefined"));
  };
  out.write("refine.txt", [&](std::ostream& os) {
    os << "# N h error order gauss_bonnet gb_order  (order 'undefined': errors at machine precision)\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
      os << rows[i].n << ' ' << io::num(rows[i].h) << ' ' << io::num(rows[i].error) << ' ' << ord(rows[i].order, i == 0)
         << ' ' << io::num(rows[i].gauss_bonnet) << ' ' << ord(rows[i].gb_order, i == 0) << '\n';
  });
  log << "# N error order gauss_bonnet gb_order\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    log << rows[i].n << ' ' << io::sci(rows[i].error, 3) << ' ' << ord(rows[i].order, i == 0) << ' '
        << io::sci(rows[i].gauss_bonnet, 3) << ' ' << ord(rows[i].gb_order, i == 0) << '\n';
}

inline void cmd_models_list(std::ostream& log) {
  for (const auto& [name, what] : model_catalog()) {
    std::string pad = name;
    pad.resize(17, ' ');
    log << pad << what << '\n';
  }
}

/// Runs a subcommand with error capture. Returns the process exit code.
inline int run(const std::string& command, const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  if (command == "models-list") {
    cmd_models_list(log);
    return Ok;
  }
  std::unique_ptr<Outputs> out;
  try {
    cfg.check();
    out = std::make_unique<Outputs>(cfg.out);
    if (command == "solve") cmd_solve(cfg, *out, log);
    else if (command == "verify") cmd_verify(cfg, *out, log);
    else if (command == "foliate") cmd_foliate(cfg, *out, log);
    else if (command == "adm") cmd_adm(cfg, *out, log);
    else if (command == "refine") cmd_refine(cfg, *out, log);
    else throw InputError("unknown command '" + command + "'");
    out->commit();
    out->status(command, "", "");
    return Ok;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    if (out) out->status(command, "input", e.what());
    return BadInput;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    if (out) out->status(command, "nonconvergence", e.what());
    return NoConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    if (out) out->status(command, "failure", e.what());
    return Failure;
  }
}

}  // namespace dihedral::cli

#endif  // DIHEDRAL_CLI_COMMANDS_HPP
