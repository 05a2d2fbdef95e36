#ifndef DIHEDRAL_CLI_CONFIG_HPP
#define DIHEDRAL_CLI_CONFIG_HPP

// Run configuration: a YAML document whose keys mirror the command-line flags.
//
//   model:
//     name: hyperbolic        # euclidean | hyperbolic | minkowski-graph |
//                             # schwarzschild | mp | uniform-field
//     mass: 1                 # schwarzschild
//     charge: 1               # mp
//     center: [0.5, 0.5, -1]  # mp
//     epsilon: 0.2            # minkowski-graph, f = epsilon z^2
//     field: [0, 0, 1]        # uniform-field
//     box: {lo: [0, 0, 0], hi: [1, 1, 1]}
//     perturbation: {amplitude: 0.1, profile: paraboloid, center: [.5, .5, .5], width: 1, weight: 1}
//   grid: 33                  # or [nx, ny, nz]
//   axis: 1                   # 1..3, the Dirichlet axis
//   top: low                  # face carrying u = 1
//   charged: false
//   bins: 20
//   out: out
//   solver: {delta0: 0.1, delta_min: 1e-9, delta_factor: 0.1, tol: 1e-10, max_iter: 200,
//            omega: 1, linear_tol: 1e-12, linearization: newton}
//   refine: {grids: [17, 33, 65]}
//   adm: {a: [0, 0, 1], L: [8, 16, 32], spacing: 0.25, edge_measure: metric}
//   verify: {band_constant: 10}

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "dihedral/adm/adm.hpp"
#include "dihedral/models.hpp"
#include "dihedral/solver/harmonic.hpp"

namespace dihedral::cli {

struct PerturbationSpec {
  double amplitude = 0.0;
  Profile profile;
};

struct ModelSpec {
  std::string name = "euclidean";
  double mass = 1.0;
  double charge = 1.0;
  Vec3 center{0.5, 0.5, -1.0};
  double epsilon = 0.2;
  Vec3 field{0.0, 0.0, 1.0};
  std::optional<Box> box;
  PerturbationSpec perturbation;
};

struct RunConfig {
  ModelSpec model;
  std::array<int, 3> grid{33, 33, 33};
  std::optional<int> axis;  ///< 1-based; model default when absent
  std::optional<Side> top;
  bool charged = false;
  int bins = 20;
  std::string out = "out";
  SolverConfig solver = default_solver();
  std::vector<int> refine_grids{17, 33, 65};
  Vec3 a{0.0, 0.0, 1.0};
  std::vector<double> L{8.0, 16.0, 32.0};
  adm::AdmOptions adm;
  double band_constant = 10.0;

  /// Library defaults except for the linearization and the delta schedule,
  /// which are tightened so that regularization error sits below O(h^2).
  static SolverConfig default_solver() {
    SolverConfig c;
    c.linearization = Linearization::Newton;
    c.delta_min = 1e-9;
    c.delta_factor = 0.1;
    return c;
  }

  void check() const {
    for (int n : grid)
      if (n < 5) throw InputError("grid needs at least 5 nodes per axis");
    if (axis && (*axis < 1 || *axis > 3)) throw InputError("axis must be 1, 2 or 3");
    if (bins < 4) throw InputError("bins must be at least 4");
    for (int n : refine_grids)
      if (n < 5) throw InputError("refinement grids need at least 5 nodes per axis");
    for (double l : L)
      if (!(l > 0.0)) throw InputError("L values must be positive");
    const double an = std::sqrt(dot(a, a));
    if (std::abs(an - 1.0) > 1e-12) throw InputError("direction a must be a unit vector");
    solver.check();
  }
};

inline const std::vector<std::pair<std::string, std::string>>& model_catalog() {
  static const std::vector<std::pair<std::string, std::string>> c{
      {"euclidean", "flat cube, k = 0"},
      {"hyperbolic", "dx^2 + e^{2x}(dy^2 + dz^2), k = g, on [0,1]^3"},
      {"minkowski-graph", "graph t = epsilon z^2 in Minkowski space"},
      {"schwarzschild", "isotropic time-symmetric slice of mass m"},
      {"mp", "Majumdar-Papapetrou slice, U = 1 + q/|x - x0|, E = d log U"},
      {"uniform-field", "flat cube with a constant electric field"},
  };
  return c;
}

namespace detail {

inline Vec3 vec3(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence() || n.size() != 3) throw InputError("config key '" + key + "' must be a list of 3 numbers");
  return {n[0].as<double>(), n[1].as<double>(), n[2].as<double>()};
}

inline Side side(const std::string& s) {
  if (s == "low") return Side::Low;
  if (s == "high") return Side::High;
  throw InputError("top must be 'low' or 'high', got '" + s + "'");
}

inline Profile::Kind profile_kind(const std::string& s) {
  if (s == "bump") return Profile::Kind::Bump;
  if (s == "paraboloid") return Profile::Kind::Paraboloid;
  if (s == "gaussian") return Profile::Kind::Gaussian;
  throw InputError("unknown perturbation profile '" + s + "'");
}

}  // namespace detail

/// Merge a YAML document into `cfg`. Unknown top-level keys are rejected.
inline void apply_yaml(RunConfig& cfg, const YAML::Node& root) {
  static const std::vector<std::string> known{"model", "grid", "axis", "top", "charged", "bins", "out",
                                              "solver", "refine", "adm", "verify"};
  if (!root.IsMap()) throw InputError("config must be a mapping");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw InputError("unknown config key '" + key + "'");
  }
  try {
    if (const auto m = root["model"]) {
      if (m.IsScalar()) {
        cfg.model.name = m.as<std::string>();
      } else {
        if (m["name"]) cfg.model.name = m["name"].as<std::string>();
        if (m["mass"]) cfg.model.mass = m["mass"].as<double>();
        if (m["charge"]) cfg.model.charge = m["charge"].as<double>();
        if (m["center"]) cfg.model.center = detail::vec3(m["center"], "model.center");
        if (m["epsilon"]) cfg.model.epsilon = m["epsilon"].as<double>();
        if (m["field"]) cfg.model.field = detail::vec3(m["field"], "model.field");
        if (const auto b = m["box"]) cfg.model.box = Box{detail::vec3(b["lo"], "box.lo"), detail::vec3(b["hi"], "box.hi")};
        if (const auto p = m["perturbation"]) {
          auto& ps = cfg.model.perturbation;
          if (p["amplitude"]) ps.amplitude = p["amplitude"].as<double>();
          if (p["profile"]) ps.profile.kind = detail::profile_kind(p["profile"].as<std::string>());
          if (p["center"]) ps.profile.center = detail::vec3(p["center"], "perturbation.center");
          if (p["width"]) ps.profile.width = p["width"].as<double>();
          if (p["weight"]) ps.profile.weight = p["weight"].as<double>();
        }
      }
    }
    if (const auto g = root["grid"]) {
      if (g.IsSequence()) {
        if (g.size() != 3) throw InputError("grid must be one integer or a list of 3");
        cfg.grid = {g[0].as<int>(), g[1].as<int>(), g[2].as<int>()};
      } else {
        const int n = g.as<int>();
        cfg.grid = {n, n, n};
      }
    }
    if (root["axis"]) cfg.axis = root["axis"].as<int>();
    if (root["top"]) cfg.top = detail::side(root["top"].as<std::string>());
    if (root["charged"]) cfg.charged = root["charged"].as<bool>();
    if (root["bins"]) cfg.bins = root["bins"].as<int>();
    if (root["out"]) cfg.out = root["out"].as<std::string>();
    if (const auto s = root["solver"]) {
      auto& c = cfg.solver;
      if (s["delta0"]) c.delta0 = s["delta0"].as<double>();
      if (s["delta_min"]) c.delta_min = s["delta_min"].as<double>();
      if (s["delta_factor"]) c.delta_factor = s["delta_factor"].as<double>();
      if (s["tol"]) c.tol = s["tol"].as<double>();
      if (s["max_iter"]) c.max_iter = s["max_iter"].as<int>();
      if (s["omega"]) c.omega = s["omega"].as<double>();
      if (s["linear_tol"]) c.linear_tol = s["linear_tol"].as<double>();
      if (s["linearization"]) {
        const auto v = s["linearization"].as<std::string>();
        if (v == "newton") c.linearization = Linearization::Newton;
        else if (v == "picard") c.linearization = Linearization::Picard;
        else throw InputError("linearization must be 'newton' or 'picard'");
      }
    }
    if (const auto r = root["refine"])
      if (r["grids"]) cfg.refine_grids = r["grids"].as<std::vector<int>>();
    if (const auto a = root["adm"]) {
      if (a["a"]) cfg.a = detail::vec3(a["a"], "adm.a");
      if (a["L"]) cfg.L = a["L"].as<std::vector<double>>();
      if (a["spacing"]) cfg.adm.spacing = a["spacing"].as<double>();
      if (a["edge_measure"]) {
        const auto v = a["edge_measure"].as<std::string>();
        if (v == "metric") cfg.adm.edge_measure = adm::EdgeMeasure::Metric;
        else if (v == "euclidean") cfg.adm.edge_measure = adm::EdgeMeasure::Euclidean;
        else throw InputError("edge_measure must be 'metric' or 'euclidean'");
      }
    }
    if (const auto v = root["verify"])
      if (v["band_constant"]) cfg.band_constant = v["band_constant"].as<double>();
  } catch (const YAML::Exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
}

inline RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  try {
    apply_yaml(cfg, YAML::LoadFile(path));
  } catch (const YAML::Exception& e) {
    throw InputError("cannot read config '" + path + "': " + e.what());
  }
  return cfg;
}

/// The model the config describes, with its perturbation applied.
inline Model make_model(const RunConfig& cfg) {
  const ModelSpec& s = cfg.model;
  Model m;
  if (s.name == "euclidean") m = euclidean_cube(s.box.value_or(Box::unit()));
  else if (s.name == "hyperbolic") m = hyperbolic_prism(s.box.value_or(Box::unit()));
  else if (s.name == "minkowski-graph")
    m = minkowski_graph(s.box.value_or(Box::unit()), HeightProfile{HeightProfile::Kind::Quadratic, s.epsilon});
  else if (s.name == "schwarzschild") m = schwarzschild_slice(s.mass, s.box.value_or(Box{{1, 1, 1}, {2, 2, 2}}));
  else if (s.name == "mp") m = mp_slice(s.charge, s.center, s.box.value_or(Box::unit()));
  else if (s.name == "uniform-field") m = uniform_field(s.field, s.box.value_or(Box::unit()));
  else throw InputError("unknown model '" + s.name + "' (see 'models list')");
  if (s.perturbation.amplitude != 0.0) {
    Profile p = s.perturbation.profile;
    p.box = m.box;
    m = perturb(m, ProfileSum{{p}}, s.perturbation.amplitude);
  }
  return m;
}

/// Dirichlet axis and orientation: explicit values win, otherwise the model's
/// natural choice (hyperbolic: x1 with u = 1 at x1 = 0; others: x3, u = 1 on top).
inline MixedBVP make_bvp(const RunConfig& cfg) {
  MixedBVP b;
  const bool hyp = cfg.model.name == "hyperbolic";
  b.axis = cfg.axis ? *cfg.axis - 1 : (hyp ? 0 : 2);
  b.top_side = cfg.top ? *cfg.top : (hyp ? Side::Low : Side::High);
  b.drift = cfg.charged ? DriftKind::Charged : DriftKind::Spacetime;
  return b;
}

/// Closed-form solution for the configured problem, if one is known.
inline std::optional<std::function<double(const Vec3&)>> reference(const RunConfig& cfg, const Model& model) {
  if (cfg.model.perturbation.amplitude != 0.0) return std::nullopt;
  const MixedBVP b = make_bvp(cfg);
  std::map<std::string, double> p{{"epsilon", cfg.model.epsilon}};
  if (cfg.model.name == "uniform-field") {
    for (int c = 0; c < 3; ++c)
      if (c != b.axis && cfg.model.field[c] != 0.0) return std::nullopt;
    p["field"] = cfg.model.field[b.axis];
  }
  return reference_solution(cfg.model.name, model.box, b, p);
}

}  // namespace dihedral::cli

#endif  // DIHEDRAL_CLI_CONFIG_HPP
