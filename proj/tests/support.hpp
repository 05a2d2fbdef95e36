// Closed forms used as oracles by the test suites, written out by hand
// rather than taken from the library.

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dihedral/cli/commands.hpp"

namespace oracle {

using namespace dihedral;

inline const double e = std::numbers::e;

// hyperbolic prism, u = 1 at x1 = 0, u = 0 at x1 = 1
inline double hyp_u(double x) { return (e - std::exp(x)) / (e - 1.0); }
inline double hyp_du(double x) { return -std::exp(x) / (e - 1.0); }

// graph t = eps z^2
inline double graph_u(double z, double eps = 0.2) { return (z - eps * z * z) / (1.0 - eps); }

// u'' = c u' on [0,1], u(0) = 0, u(1) = 1
inline double field_u(double z, double c) { return (std::exp(c * z) - 1.0) / (std::exp(c) - 1.0); }
inline double field_du(double z, double c) { return c * std::exp(c * z) / (std::exp(c) - 1.0); }
inline double field_ddu(double z, double c) { return c * c * std::exp(c * z) / (std::exp(c) - 1.0); }

// Majumdar-Papapetrou: U = 1 + q/|x - x0|
struct MP {
  double q = 1.0;
  Vec3 x0{0.5, 0.5, -1.0};
  double U(const Vec3& x) const {
    const Vec3 d = x - x0;
    return 1.0 + q / std::sqrt(dot(d, d));
  }
  Vec3 dlogU(const Vec3& x) const {
    const Vec3 d = x - x0;
    const double r = std::sqrt(dot(d, d));
    return (-q / (r * r * r) / U(x)) * d;
  }
  // |E|_g^2 with g = U^2 delta
  double E2(const Vec3& x) const {
    const Vec3 v = dlogU(x);
    return dot(v, v) / (U(x) * U(x));
  }
};

// scalar curvature of e^{2f} delta in three dimensions
inline double conformal_R(double f, const Vec3& df, double lapf) {
  return -std::exp(-2.0 * f) * (4.0 * lapf + 2.0 * dot(df, df));
}

inline double sup_error(const dihedral::ScalarField& f, const std::function<double(const Vec3&)>& exact) {
  const auto& g = f.grid();
  double m = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) m = std::max(m, std::abs(f[n] - exact(g.position(g.ijk(n)))));
  return m;
}

inline double sup_abs(const dihedral::ScalarField& f) { return dihedral::sup_norm(f); }

inline double order(double e1, double e2) { return std::log2(e1 / e2); }

inline dihedral::SolverConfig newton_config() { return dihedral::cli::RunConfig::default_solver(); }

// Numeric columns of a whitespace table, comment lines skipped.
inline std::vector<std::vector<double>> read_table(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      try {
        row.push_back(std::stod(tok));
      } catch (...) {
        row.push_back(std::nan(""));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("dihedral-test-" + name);
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace oracle
