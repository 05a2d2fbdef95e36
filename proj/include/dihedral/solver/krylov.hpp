#ifndef DIHEDRAL_SOLVER_KRYLOV_HPP
#define DIHEDRAL_SOLVER_KRYLOV_HPP

#include <cmath>
#include <sstream>
#include <vector>

#include "dihedral/errors.hpp"
#include "dihedral/solver/multigrid.hpp"

namespace dihedral::solver {

struct LinearStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

namespace detail {
inline double dotp(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
inline double norm2(const std::vector<double>& a) { return std::sqrt(dotp(a, a)); }

// Accept a solve that stalled at roundoff; refuse one that never got going.
inline void stalled(const char* method, double rel) {
  if (rel <= 1e-6) return;
  std::ostringstream os;
  os << method << " stagnated at relative residual " << rel;
  throw NonConvergenceError(os.str());
}
}  // namespace detail

/// Multigrid-preconditioned conjugate gradients for symmetric S.
inline LinearStats pcg(Multigrid& mg, const std::vector<double>& b, std::vector<double>& x, double rtol,
                       int max_iter = 1000) {
  const StencilLevel& S = mg.finest();
  const std::size_t N = b.size();
  x.assign(N, 0.0);
  const double bnorm = detail::norm2(b);
  LinearStats st;
  if (bnorm == 0.0) return st;
  std::vector<double> r = b, z, p, Ap(N);
  mg.precondition(r, z);
  p = z;
  double rz = detail::dotp(r, z);
  double best = 1.0;
  int since_best = 0;
  for (int it = 1; it <= max_iter; ++it) {
    S.apply(p, Ap);
    const double pAp = detail::dotp(p, Ap);
    if (!(pAp > 0.0)) break;
    const double alpha = rz / pAp;
    for (std::size_t i = 0; i < N; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    st.iterations = it;
    st.relative_residual = detail::norm2(r) / bnorm;
    if (st.relative_residual <= rtol) return st;
    if (st.relative_residual < 0.9 * best) {
      best = st.relative_residual;
      since_best = 0;
    } else if (++since_best > 50) {
      break;
    }
    mg.precondition(r, z);
    const double rz_new = detail::dotp(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < N; ++i) p[i] = z[i] + beta * p[i];
  }
  detail::stalled("PCG", st.relative_residual);
  return st;
}

/// Right-preconditioned BiCGSTAB for the non-symmetric stages.
inline LinearStats bicgstab(Multigrid& mg, const std::vector<double>& b, std::vector<double>& x, double rtol,
                            int max_iter = 1000) {
  const StencilLevel& S = mg.finest();
  const std::size_t N = b.size();
  x.assign(N, 0.0);
  const double bnorm = detail::norm2(b);
  LinearStats st;
  if (bnorm == 0.0) return st;
  std::vector<double> r = b, r0 = b, p(N, 0.0), v(N, 0.0), s(N), t(N), ph, sh;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double best = 1.0;
  int since_best = 0;
  for (int it = 1; it <= max_iter; ++it) {
    const double rho_new = detail::dotp(r0, r);
    if (rho_new == 0.0) break;
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t i = 0; i < N; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    mg.precondition(p, ph);
    S.apply(ph, v);
    const double r0v = detail::dotp(r0, v);
    if (r0v == 0.0) break;
    alpha = rho / r0v;
    for (std::size_t i = 0; i < N; ++i) s[i] = r[i] - alpha * v[i];
    st.iterations = it;
    if (detail::norm2(s) / bnorm <= rtol) {
      for (std::size_t i = 0; i < N; ++i) x[i] += alpha * ph[i];
      st.relative_residual = detail::norm2(s) / bnorm;
      return st;
    }
    mg.precondition(s, sh);
    S.apply(sh, t);
    const double tt = detail::dotp(t, t);
    omega = tt > 0.0 ? detail::dotp(t, s) / tt : 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      x[i] += alpha * ph[i] + omega * sh[i];
      r[i] = s[i] - omega * t[i];
    }
    st.relative_residual = detail::norm2(r) / bnorm;
    if (st.relative_residual <= rtol) return st;
    if (omega == 0.0) break;
    if (st.relative_residual < 0.9 * best) {
      best = st.relative_residual;
      since_best = 0;
    } else if (++since_best > 50) {
      break;
    }
  }
  detail::stalled("BiCGSTAB", st.relative_residual);
  return st;
}

}  // namespace dihedral::solver

#endif  // DIHEDRAL_SOLVER_KRYLOV_HPP
