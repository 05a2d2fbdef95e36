#ifndef DIHEDRAL_SOLVER_STENCIL_HPP
#define DIHEDRAL_SOLVER_STENCIL_HPP

// Matrix-free flux-form operator
//
//   L x = (1/q) d_i(A^ij d_j x) + b^i d_i x,   A^ij = q g^ij,
//
// on a node-centered grid. Nodes on the two faces normal to the Dirichlet
// axis carry no equation; the other four faces use mirror ghosts. The
// weighted form S = -diag(w q) L, with w the trapezoid cell weights, is
// symmetric when b = 0 and A is diagonal.

#include <algorithm>
#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace dihedral::solver {

struct StencilLevel {
  std::array<int, 3> n{};
  std::array<double, 3> h{};
  int dirichlet_axis = 2;

  std::array<std::vector<double>, 3> A;      ///< q g^aa at nodes
  std::array<std::vector<double>, 3> C;      ///< q g^ab for (01, 02, 12); empty if diagonal
  std::array<std::vector<double>, 3> drift;  ///< b^a at nodes; empty if none
  std::vector<double> q;
  std::vector<double> w;
  std::vector<double> diag;
  bool cross = false;
  bool has_drift = false;

  std::size_t size() const noexcept { return static_cast<std::size_t>(n[0]) * n[1] * n[2]; }
  std::size_t stride(int a) const noexcept {
    return a == 0 ? 1 : (a == 1 ? static_cast<std::size_t>(n[0]) : static_cast<std::size_t>(n[0]) * n[1]);
  }
  std::size_t index(int i, int j, int k) const noexcept {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n[0]) * (j + static_cast<std::size_t>(n[1]) * k);
  }
  bool is_dirichlet(int i, int j, int k) const noexcept {
    const int c = dirichlet_axis == 0 ? i : (dirichlet_axis == 1 ? j : k);
    return c == 0 || c == n[dirichlet_axis] - 1;
  }

  /// Fills w and diag from the coefficient arrays.
  void finalize() {
    const std::size_t N = size();
    w.assign(N, 0.0);
    diag.assign(N, 1.0);
    for (int k = 0; k < n[2]; ++k)
      for (int j = 0; j < n[1]; ++j)
        for (int i = 0; i < n[0]; ++i) {
          const std::array<int, 3> c{i, j, k};
          const std::size_t p = index(i, j, k);
          double wp = 1.0;
          for (int a = 0; a < 3; ++a) wp *= (c[a] == 0 || c[a] == n[a] - 1) ? 0.5 * h[a] : h[a];
          w[p] = wp;
          if (is_dirichlet(i, j, k)) continue;
          double d = 0.0;
          for (int a = 0; a < 3; ++a) {
            const std::size_t s = stride(a);
            const std::size_t pp = c[a] < n[a] - 1 ? p + s : p - s;
            const std::size_t pm = c[a] > 0 ? p - s : p + s;
            d += (A[a][pp] + 2.0 * A[a][p] + A[a][pm]) * 0.5 / (h[a] * h[a]);
          }
          diag[p] = wp * d;
        }
  }

  struct Terms {
    double flux;   ///< d_i(A^ij d_j x)
    double bgrad;  ///< b^i d_i x
  };

  Terms terms(const double* x, int i, int j, int k) const noexcept {
    const std::array<int, 3> c{i, j, k};
    const std::size_t p = index(i, j, k);
    std::array<std::size_t, 3> pp{}, pm{};
    double flux = 0.0;
    for (int a = 0; a < 3; ++a) {
      const std::size_t s = stride(a);
      pp[a] = c[a] < n[a] - 1 ? p + s : p - s;
      pm[a] = c[a] > 0 ? p - s : p + s;
      const double ap = 0.5 * (A[a][p] + A[a][pp[a]]);
      const double am = 0.5 * (A[a][p] + A[a][pm[a]]);
      flux += (ap * (x[pp[a]] - x[p]) - am * (x[p] - x[pm[a]])) / (h[a] * h[a]);
    }
    if (cross) flux += cross_terms(x, c);
    double bgrad = 0.0;
    if (has_drift)
      for (int a = 0; a < 3; ++a) bgrad += drift[a][p] * (x[pp[a]] - x[pm[a]]) / (2.0 * h[a]);
    return {flux, bgrad};
  }

  /// (S x)_p; identity on Dirichlet rows.
  double row(const double* x, int i, int j, int k) const noexcept {
    const std::size_t p = index(i, j, k);
    if (is_dirichlet(i, j, k)) return x[p];
    const Terms t = terms(x, i, j, k);
    return -w[p] * (t.flux + q[p] * t.bgrad);
  }

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    y.resize(size());
    for (int k = 0; k < n[2]; ++k)
      for (int j = 0; j < n[1]; ++j)
        for (int i = 0; i < n[0]; ++i) y[index(i, j, k)] = row(x.data(), i, j, k);
  }

  /// Gauss-Seidel sweep on S x = b, forward or backward.
  void gauss_seidel(std::vector<double>& x, const std::vector<double>& b, bool forward) const {
    const int n0 = n[0], n1 = n[1], n2 = n[2];
    auto visit = [&](int i, int j, int k) {
      if (is_dirichlet(i, j, k)) return;
      const std::size_t p = index(i, j, k);
      x[p] += (b[p] - row(x.data(), i, j, k)) / diag[p];
    };
    if (forward) {
      for (int k = 0; k < n2; ++k)
        for (int j = 0; j < n1; ++j)
          for (int i = 0; i < n0; ++i) visit(i, j, k);
    } else {
      for (int k = n2 - 1; k >= 0; --k)
        for (int j = n1 - 1; j >= 0; --j)
          for (int i = n0 - 1; i >= 0; --i) visit(i, j, k);
    }
  }

 private:
  static constexpr int pair_index(int a, int b) noexcept { return a + b - 1; }

  // Neighbor of c along axis a in direction d (+1/-1), mirrored at the box;
  // returns the coordinate and whether a reflection happened.
  std::pair<int, bool> step(int ca, int a, int d) const noexcept {
    const int t = ca + d;
    if (t < 0) return {-t, true};
    if (t > n[a] - 1) return {2 * (n[a] - 1) - t, true};
    return {t, false};
  }

  double cross_terms(const double* x, const std::array<int, 3>& c) const noexcept {
    double acc = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        const auto& coef = C[pair_index(std::min(a, b), std::max(a, b))];
        // d_a (C^ab d_b x)
        double val = 0.0;
        for (int d : {1, -1}) {
          auto [ta, ra] = step(c[a], a, d);
          std::array<int, 3> q0 = c;
          q0[a] = ta;
          const double cab = coef[index(q0[0], q0[1], q0[2])] * (ra ? -1.0 : 1.0);
          std::array<int, 3> qp = q0, qm = q0;
          qp[b] = step(c[b], b, 1).first;
          qm[b] = step(c[b], b, -1).first;
          const double db = (x[index(qp[0], qp[1], qp[2])] - x[index(qm[0], qm[1], qm[2])]) / (2.0 * h[b]);
          val += d * cab * db;
        }
        acc += val / (2.0 * h[a]);
      }
    return acc;
  }
};

inline int coarse_size(int n) { return (n + 1) / 2; }

inline bool can_coarsen(const StencilLevel& L) {
  for (int a = 0; a < 3; ++a)
    if (L.n[a] < 5 || (L.n[a] - 1) % 2 != 0) return false;
  return true;
}

/// Rediscretization on the grid with every other node; coefficients injected.
inline StencilLevel coarsen(const StencilLevel& f) {
  StencilLevel c;
  for (int a = 0; a < 3; ++a) {
    c.n[a] = coarse_size(f.n[a]);
    c.h[a] = 2.0 * f.h[a];
  }
  c.dirichlet_axis = f.dirichlet_axis;
  c.cross = f.cross;
  c.has_drift = f.has_drift;
  const std::size_t N = c.size();
  auto inject = [&](const std::vector<double>& src) {
    std::vector<double> out(N);
    for (int k = 0; k < c.n[2]; ++k)
      for (int j = 0; j < c.n[1]; ++j)
        for (int i = 0; i < c.n[0]; ++i) out[c.index(i, j, k)] = src[f.index(2 * i, 2 * j, 2 * k)];
    return out;
  };
  for (int a = 0; a < 3; ++a) {
    c.A[a] = inject(f.A[a]);
    if (f.cross) c.C[a] = inject(f.C[a]);
    if (f.has_drift) c.drift[a] = inject(f.drift[a]);
  }
  c.q = inject(f.q);
  c.finalize();
  return c;
}

/// Trilinear interpolation from coarse to fine, added to `fine`.
inline void prolong_add(const StencilLevel& c, const std::vector<double>& xc, const StencilLevel& f,
                        std::vector<double>& xf) {
  for (int k = 0; k < f.n[2]; ++k)
    for (int j = 0; j < f.n[1]; ++j)
      for (int i = 0; i < f.n[0]; ++i) {
        const int I[2] = {i / 2, (i + 1) / 2};
        const int J[2] = {j / 2, (j + 1) / 2};
        const int K[2] = {k / 2, (k + 1) / 2};
        const int ni = (i % 2) ? 2 : 1, nj = (j % 2) ? 2 : 1, nk = (k % 2) ? 2 : 1;
        const double wgt = 1.0 / (ni * nj * nk);
        double s = 0.0;
        for (int a = 0; a < ni; ++a)
          for (int b = 0; b < nj; ++b)
            for (int d = 0; d < nk; ++d) s += xc[c.index(I[a], J[b], K[d])];
        xf[f.index(i, j, k)] += wgt * s;
      }
}

/// Transpose of trilinear interpolation.
inline void restrict_transpose(const StencilLevel& f, const std::vector<double>& rf, const StencilLevel& c,
                               std::vector<double>& rc) {
  rc.assign(c.size(), 0.0);
  for (int k = 0; k < f.n[2]; ++k)
    for (int j = 0; j < f.n[1]; ++j)
      for (int i = 0; i < f.n[0]; ++i) {
        const int I[2] = {i / 2, (i + 1) / 2};
        const int J[2] = {j / 2, (j + 1) / 2};
        const int K[2] = {k / 2, (k + 1) / 2};
        const int ni = (i % 2) ? 2 : 1, nj = (j % 2) ? 2 : 1, nk = (k % 2) ? 2 : 1;
        const double v = rf[f.index(i, j, k)] / (ni * nj * nk);
        for (int a = 0; a < ni; ++a)
          for (int b = 0; b < nj; ++b)
            for (int d = 0; d < nk; ++d) rc[c.index(I[a], J[b], K[d])] += v;
      }
  for (int k = 0; k < c.n[2]; ++k)
    for (int j = 0; j < c.n[1]; ++j)
      for (int i = 0; i < c.n[0]; ++i)
        if (c.is_dirichlet(i, j, k)) rc[c.index(i, j, k)] = 0.0;
}

}  // namespace dihedral::solver

#endif  // DIHEDRAL_SOLVER_STENCIL_HPP
