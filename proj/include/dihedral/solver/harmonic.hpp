#ifndef DIHEDRAL_SOLVER_HARMONIC_HPP
#define DIHEDRAL_SOLVER_HARMONIC_HPP

// Spacetime-harmonic and charged-harmonic solves on the box.
//
//   G_delta(u) = Lap u + K (sqrt(delta^2 + |du|^2) - delta),   K = tr_g k
//   charged:     Lap u - <E, du>
//
// Each outer step solves the correction equation L x = -G(u_n) with x = 0
// on the Dirichlet faces and updates u_{n+1} = u_n + omega x. With the
// Picard linearization L is the Laplacian alone (the gradient term is
// lagged); with Newton the linearized gradient term enters L as a drift.

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dihedral/bvp.hpp"
#include "dihedral/geometry.hpp"
#include "dihedral/solver/krylov.hpp"

namespace dihedral {

enum class Linearization { Picard, Newton };
enum class InitialGuess { Linear, Zero };

struct SolverConfig {
  double delta0 = 0.1;
  double delta_min = 1e-4;
  double delta_factor = 0.5;
  double tol = 1e-10;
  int max_iter = 200;
  double omega = 1.0;
  double omega_min = 1.0 / 1024.0;
  double linear_tol = 1e-12;
  Linearization linearization = Linearization::Picard;
  InitialGuess guess = InitialGuess::Linear;

  void check() const {
    if (!(delta_min > 0.0) || !(delta_min <= delta0))
      throw InputError("solver config needs 0 < delta_min <= delta0");
    if (!(delta_factor > 0.0 && delta_factor < 1.0))
      throw InputError("delta reduction factor must lie in (0,1)");
    if (!(tol > 0.0) || !(linear_tol > 0.0)) throw InputError("solver tolerances must be positive");
    if (!(omega > 0.0 && omega <= 1.0)) throw InputError("damping must lie in (0,1]");
    if (max_iter < 1) throw InputError("max_iter must be positive");
  }

  /// The regularization parameters visited, ending at delta_min.
  std::vector<double> schedule() const {
    std::vector<double> out;
    for (double d = delta0;; d *= delta_factor) {
      if (d <= delta_min * (1.0 + 1e-12)) {
        out.push_back(delta_min);
        break;
      }
      out.push_back(d);
    }
    return out;
  }
};

/// One record per outer iteration.
struct IterationRecord {
  double delta = 0.0;
  int iteration = 0;
  double residual = 0.0;  ///< sup |G(u)| after the step
  double update = 0.0;    ///< sup |u_{n+1} - u_n|
  double omega = 1.0;
  int linear_iterations = 0;
};

struct StageSummary {
  double delta = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double min_grad = 0.0;
  double drift = 0.0;  ///< sup |u_delta - u_previous stage|
  std::vector<double> residual_history;
};

struct SolutionBundle {
  ScalarField u;
  ScalarField grad_mag;
  double min_grad = 0.0;
  std::vector<StageSummary> stages;
  std::vector<IterationRecord> log;
  int total_iterations = 0;
};

/// Outer-iteration failure; carries the last iterate and the log so callers
/// can keep the diagnostics.
class SolveFailure : public NonConvergenceError {
 public:
  SolveFailure(const std::string& what, SolutionBundle partial)
      : NonConvergenceError(what), partial_(std::make_shared<SolutionBundle>(std::move(partial))) {}
  const SolutionBundle& partial() const noexcept { return *partial_; }

 private:
  std::shared_ptr<SolutionBundle> partial_;
};

namespace solver {

/// Pointwise ingredients of the discrete problem.
struct Problem {
  MixedBVP bvp;
  StencilLevel level;          ///< linear part (Laplacian plus fixed drift)
  std::vector<Sym3> ginv;
  std::vector<double> K;       ///< mean curvature of the slice, tr_g k
  bool gradient_term = false;  ///< spacetime nonlinearity present
};

inline Problem build_problem(const InitialData& data, const MixedBVP& bvp) {
  bvp.check();
  validate(data);
  const Grid& grid = data.grid;
  const std::size_t N = grid.size();
  Problem P;
  P.bvp = bvp;
  StencilLevel& L = P.level;
  for (int a = 0; a < 3; ++a) {
    L.n[a] = grid.n(a);
    L.h[a] = grid.h(a);
    L.A[a].resize(N);
  }
  L.dirichlet_axis = bvp.axis;
  L.q.resize(N);
  P.ginv.resize(N);
  P.K.assign(N, 0.0);

  const bool charged = bvp.drift == DriftKind::Charged;
  if (charged && !data.electric) throw InputError("charged solve needs an electric field");
  const bool weighted = charged && data.electric_potential.has_value();
  double href = 0.0;
  if (weighted) href = (*data.electric_potential)[0];

  for (std::size_t n = 0; n < N; ++n) {
    const Sym3 gi = inverse(data.g[n]);
    P.ginv[n] = gi;
    // Lap u - <dh, du> = (e^h / sqrt g) d_i(e^-h sqrt g g^ij d_j u)
    const double rho = weighted ? std::exp(-((*data.electric_potential)[n] - href)) : 1.0;
    const double q = rho * std::sqrt(det(data.g[n]));
    L.q[n] = q;
    for (int a = 0; a < 3; ++a) L.A[a][n] = q * gi(a, a);
    if (gi(0, 1) != 0.0 || gi(0, 2) != 0.0 || gi(1, 2) != 0.0) L.cross = true;
    if (bvp.drift == DriftKind::Spacetime) P.K[n] = trace(gi, data.k[n]);
  }
  if (L.cross) {
    for (int c = 0; c < 3; ++c) L.C[c].resize(N);
    for (std::size_t n = 0; n < N; ++n) {
      L.C[0][n] = L.q[n] * P.ginv[n](0, 1);
      L.C[1][n] = L.q[n] * P.ginv[n](0, 2);
      L.C[2][n] = L.q[n] * P.ginv[n](1, 2);
    }
  }
  if (charged && !weighted) {
    L.has_drift = true;
    for (int a = 0; a < 3; ++a) L.drift[a].resize(N);
    for (std::size_t n = 0; n < N; ++n) {
      const Vec3 up = raise(P.ginv[n], (*data.electric)[n]);
      for (int a = 0; a < 3; ++a) L.drift[a][n] = -up[a];
    }
  }
  if (bvp.drift == DriftKind::Spacetime)
    for (double k : P.K)
      if (k != 0.0) {
        P.gradient_term = true;
        break;
      }
  L.finalize();
  return P;
}

/// Central differences with mirror ghosts on the Neumann faces, one-sided
/// second order on the Dirichlet faces.
inline Vec3 mirrored_gradient(const StencilLevel& L, const double* u, int i, int j, int k) {
  const std::array<int, 3> c{i, j, k};
  const std::size_t p = L.index(i, j, k);
  Vec3 g{};
  for (int a = 0; a < 3; ++a) {
    const std::size_t s = L.stride(a);
    const double h = L.h[a];
    if (a == L.dirichlet_axis && c[a] == 0) {
      g[a] = (-3.0 * u[p] + 4.0 * u[p + s] - u[p + 2 * s]) / (2.0 * h);
    } else if (a == L.dirichlet_axis && c[a] == L.n[a] - 1) {
      g[a] = (3.0 * u[p] - 4.0 * u[p - s] + u[p - 2 * s]) / (2.0 * h);
    } else if (c[a] == 0 || c[a] == L.n[a] - 1) {
      g[a] = 0.0;
    } else {
      g[a] = (u[p + s] - u[p - s]) / (2.0 * h);
    }
  }
  return g;
}

/// Discrete G_delta(u) at equation nodes; zero on Dirichlet nodes.
inline std::vector<double> evaluate(const Problem& P, const std::vector<double>& u, double delta) {
  const StencilLevel& L = P.level;
  std::vector<double> G(L.size(), 0.0);
  for (int k = 0; k < L.n[2]; ++k)
    for (int j = 0; j < L.n[1]; ++j)
      for (int i = 0; i < L.n[0]; ++i) {
        if (L.is_dirichlet(i, j, k)) continue;
        const std::size_t p = L.index(i, j, k);
        const auto t = L.terms(u.data(), i, j, k);
        double v = t.flux / L.q[p] + t.bgrad;
        if (P.gradient_term && P.K[p] != 0.0) {
          const Vec3 du = mirrored_gradient(L, u.data(), i, j, k);
          const double s2 = contract(P.ginv[p], du, du);
          v += P.K[p] * (std::sqrt(delta * delta + s2) - delta);
        }
        G[p] = v;
      }
  return G;
}

/// Linearization of the gradient term at u as a drift b^a.
inline void set_newton_drift(const Problem& P, const std::vector<double>& u, double delta, StencilLevel& L) {
  const std::size_t N = L.size();
  const bool had = P.level.has_drift;
  L.has_drift = true;
  for (int a = 0; a < 3; ++a) {
    if (had) L.drift[a] = P.level.drift[a];
    else L.drift[a].assign(N, 0.0);
  }
  for (int k = 0; k < L.n[2]; ++k)
    for (int j = 0; j < L.n[1]; ++j)
      for (int i = 0; i < L.n[0]; ++i) {
        const std::size_t p = L.index(i, j, k);
        if (P.K[p] == 0.0 || L.is_dirichlet(i, j, k)) continue;
        const Vec3 du = mirrored_gradient(L, u.data(), i, j, k);
        const Vec3 up = raise(P.ginv[p], du);
        const double s = std::sqrt(delta * delta + dot(du, up));
        if (s == 0.0) continue;
        for (int a = 0; a < 3; ++a) L.drift[a][p] += P.K[p] * up[a] / s;
      }
}

inline double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline LinearStats solve_linear(const StencilLevel& L, const std::vector<double>& b, std::vector<double>& x,
                                double rtol) {
  Multigrid mg(L);
  if (!L.cross && !L.has_drift) return pcg(mg, b, x, rtol);
  return bicgstab(mg, b, x, rtol);
}

inline std::vector<double> initial_guess(const Grid& grid, const MixedBVP& bvp, InitialGuess kind) {
  std::vector<double> u(grid.size(), 0.0);
  const int a = bvp.axis;
  const int n = grid.n(a);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const int c = grid.ijk(p)[a];
    const double s = static_cast<double>(c) / (n - 1);
    const double lin = bvp.top_side == Side::High ? s : 1.0 - s;
    if (c == 0 || c == n - 1 || kind == InitialGuess::Linear) u[p] = lin;
  }
  return u;
}

}  // namespace solver

inline ScalarField gradient_magnitude(const InitialData& data, const ScalarField& u) {
  const CoVectorField du = fd::gradient(u);
  ScalarField out(data.grid);
  for (std::size_t n = 0; n < data.grid.size(); ++n) out[n] = conorm(inverse(data.g[n]), du[n]);
  return out;
}

namespace solver {
inline SolutionBundle partial_bundle(const InitialData& data, const std::vector<double>& u, SolutionBundle b) {
  b.u = ScalarField(data.grid, u);
  b.grad_mag = gradient_magnitude(data, b.u);
  b.min_grad = *std::min_element(b.grad_mag.values().begin(), b.grad_mag.values().end());
  return b;
}
}  // namespace solver

/// Outer iteration shared by both equations.
inline SolutionBundle solve_harmonic(const InitialData& data, const MixedBVP& bvp, const SolverConfig& cfg,
                                     const ScalarField* start = nullptr) {
  cfg.check();
  solver::Problem P = solver::build_problem(data, bvp);
  const Grid& grid = data.grid;
  const solver::StencilLevel& L0 = P.level;

  std::vector<double> u = solver::initial_guess(grid, bvp, cfg.guess);
  if (start) {
    if (!(start->grid() == grid)) throw InputError("initial guess lives on a different grid");
    for (std::size_t p = 0; p < grid.size(); ++p)
      if (!L0.is_dirichlet(grid.ijk(p)[0], grid.ijk(p)[1], grid.ijk(p)[2])) u[p] = (*start)[p];
  }

  double hmin = std::min({grid.h(0), grid.h(1), grid.h(2)});
  const double noise = 1e3 * std::numeric_limits<double>::epsilon() / (hmin * hmin);
  const std::vector<double> deltas = P.gradient_term ? cfg.schedule() : std::vector<double>{0.0};

  SolutionBundle out;
  std::vector<double> previous;
  for (double delta : deltas) {
    StageSummary stage;
    stage.delta = delta;
    double omega = cfg.omega;
    std::vector<double> G = solver::evaluate(P, u, delta);
    double rnorm = solver::sup_abs(G);
    stage.residual_history.push_back(rnorm);
    bool converged = false;
    std::vector<double> rhs(u.size()), x, trial(u.size());
    for (int it = 1; it <= cfg.max_iter; ++it) {
      solver::StencilLevel newton;
      const solver::StencilLevel* Lp = &L0;
      if (cfg.linearization == Linearization::Newton && P.gradient_term) {
        newton = L0;
        solver::set_newton_drift(P, u, delta, newton);
        Lp = &newton;
      }
      for (std::size_t p = 0; p < u.size(); ++p) rhs[p] = L0.w[p] * L0.q[p] * G[p];
      const solver::LinearStats ls = solver::solve_linear(*Lp, rhs, x, cfg.linear_tol);
      std::vector<double> Gt;
      double tnorm = 0.0;
      while (true) {
        for (std::size_t p = 0; p < u.size(); ++p) trial[p] = u[p] + omega * x[p];
        Gt = solver::evaluate(P, trial, delta);
        tnorm = solver::sup_abs(Gt);
        if (tnorm <= rnorm || rnorm <= noise) break;
        omega *= 0.5;
        if (omega < cfg.omega_min) {
          std::ostringstream os;
          os << "outer iteration diverged at delta = " << delta << ", iteration " << it
             << ": residual " << rnorm << " -> " << tnorm << " with damping below " << cfg.omega_min;
          throw SolveFailure(os.str(), solver::partial_bundle(data, u, std::move(out)));
        }
      }
      const double update = omega * solver::sup_abs(x);
      u.swap(trial);
      G = std::move(Gt);
      rnorm = tnorm;
      stage.residual_history.push_back(rnorm);
      out.log.push_back({delta, it, rnorm, update, omega, ls.iterations});
      stage.iterations = it;
      if (update <= cfg.tol) {
        converged = true;
        break;
      }
      omega = std::min(cfg.omega, 2.0 * omega);
    }
    stage.residual = rnorm;
    if (!converged) {
      std::ostringstream os;
      os << "no convergence at delta = " << delta << " after " << cfg.max_iter
         << " iterations; last residual " << rnorm << ", last update " << out.log.back().update;
      out.stages.push_back(std::move(stage));
      throw SolveFailure(os.str(), solver::partial_bundle(data, u, std::move(out)));
    }
    ScalarField uf(grid, u);
    const ScalarField gm = gradient_magnitude(data, uf);
    stage.min_grad = *std::min_element(gm.values().begin(), gm.values().end());
    if (!previous.empty()) {
      double d = 0.0;
      for (std::size_t p = 0; p < u.size(); ++p) d = std::max(d, std::abs(u[p] - previous[p]));
      stage.drift = d;
    }
    previous = u;
    out.total_iterations += stage.iterations;
    out.stages.push_back(std::move(stage));
  }
  out.u = ScalarField(grid, std::move(u));
  out.grad_mag = gradient_magnitude(data, out.u);
  out.min_grad = *std::min_element(out.grad_mag.values().begin(), out.grad_mag.values().end());
  return out;
}

inline SolutionBundle solve_spacetime_harmonic(const InitialData& data, MixedBVP bvp, const SolverConfig& cfg,
                                               const ScalarField* start = nullptr) {
  bvp.drift = DriftKind::Spacetime;
  return solve_harmonic(data, bvp, cfg, start);
}

inline SolutionBundle solve_charged_harmonic(const InitialData& data, MixedBVP bvp, const SolverConfig& cfg,
                                             const ScalarField* start = nullptr) {
  if (!data.electric) throw InputError("charged solve needs an electric field");
  bvp.drift = DriftKind::Charged;
  return solve_harmonic(data, bvp, cfg, start);
}

/// Pointwise discrete G_delta(u) (or the charged operator) on the nodes that
/// carry an equation; zero on the Dirichlet faces.
inline ScalarField residual(const InitialData& data, const ScalarField& u, const MixedBVP& bvp, double delta) {
  const solver::Problem P = solver::build_problem(data, bvp);
  std::vector<double> uv(u.values().begin(), u.values().end());
  return ScalarField(data.grid, solver::evaluate(P, uv, delta));
}

/// Covariant Hessian nabla nabla u from finite differences.
inline SymTensorField covariant_hessian(const ScalarField& u, const ConnectionField& gamma) {
  const CoVectorField du = fd::gradient(u);
  SymTensorField out = fd::second_derivatives(u);
  for (std::size_t n = 0; n < out.size(); ++n)
    for (int k = 0; k < 3; ++k) out[n] = out[n] - du[n][k] * gamma[n].gamma[k];
  return out;
}

/// nabla nabla u + |du| k.
inline SymTensorField spacetime_hessian(const InitialData& data, const ScalarField& u,
                                        const ConnectionField& gamma) {
  SymTensorField out = covariant_hessian(u, gamma);
  const CoVectorField du = fd::gradient(u);
  for (std::size_t n = 0; n < out.size(); ++n)
    out[n] = out[n] + conorm(inverse(data.g[n]), du[n]) * data.k[n];
  return out;
}

inline SymTensorField spacetime_hessian(const InitialData& data, const ScalarField& u) {
  return spacetime_hessian(data, u, christoffel(data));
}

/// nabla nabla u + E (x) du + du (x) E - <E, du> g.
inline SymTensorField charged_hessian(const InitialData& data, const ScalarField& u,
                                      const ConnectionField& gamma) {
  if (!data.electric) throw InputError("charged Hessian needs an electric field");
  SymTensorField out = covariant_hessian(u, gamma);
  const CoVectorField du = fd::gradient(u);
  for (std::size_t n = 0; n < out.size(); ++n) {
    const Vec3& E = (*data.electric)[n];
    out[n] = out[n] + sym_outer(E, du[n]) - contract(inverse(data.g[n]), E, du[n]) * data.g[n];
  }
  return out;
}

inline SymTensorField charged_hessian(const InitialData& data, const ScalarField& u) {
  return charged_hessian(data, u, christoffel(data));
}

/// Pointwise g-norm of a symmetric tensor field.
inline ScalarField tensor_norm(const InitialData& data, const SymTensorField& t) {
  ScalarField out(data.grid);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = norm(inverse(data.g[n]), t[n]);
  return out;
}

}  // namespace dihedral

#endif  // DIHEDRAL_SOLVER_HARMONIC_HPP
