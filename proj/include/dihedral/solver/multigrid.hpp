#ifndef DIHEDRAL_SOLVER_MULTIGRID_HPP
#define DIHEDRAL_SOLVER_MULTIGRID_HPP

#include <vector>

#include "dihedral/solver/stencil.hpp"

namespace dihedral::solver {

/// Geometric V-cycle: forward Gauss-Seidel before, backward after, so the
/// cycle is a symmetric linear operator whenever S is.
class Multigrid {
 public:
  explicit Multigrid(StencilLevel finest, int pre = 2, int post = 2) : pre_(pre), post_(post) {
    levels_.push_back(std::move(finest));
    while (can_coarsen(levels_.back())) levels_.push_back(coarsen(levels_.back()));
    const std::size_t nc = levels_.back().size();
    coarse_sweeps_ = nc <= 1000 ? 40 : 2;
    work_.resize(levels_.size());
  }

  const StencilLevel& finest() const noexcept { return levels_.front(); }
  std::size_t depth() const noexcept { return levels_.size(); }

  /// z = M^{-1} r with zero initial guess.
  void precondition(const std::vector<double>& r, std::vector<double>& z) {
    z.assign(r.size(), 0.0);
    cycle(0, r, z);
  }

 private:
  struct Work {
    std::vector<double> res, rc, xc;
  };

  void cycle(std::size_t l, const std::vector<double>& b, std::vector<double>& x) {
    const StencilLevel& L = levels_[l];
    if (l + 1 == levels_.size()) {
      for (int s = 0; s < coarse_sweeps_; ++s) {
        L.gauss_seidel(x, b, true);
        L.gauss_seidel(x, b, false);
      }
      return;
    }
    for (int s = 0; s < pre_; ++s) L.gauss_seidel(x, b, true);
    Work& w = work_[l];
    L.apply(x, w.res);
    for (std::size_t p = 0; p < w.res.size(); ++p) w.res[p] = b[p] - w.res[p];
    const StencilLevel& C = levels_[l + 1];
    restrict_transpose(L, w.res, C, w.rc);
    w.xc.assign(C.size(), 0.0);
    cycle(l + 1, w.rc, w.xc);
    prolong_add(C, w.xc, L, x);
    for (int s = 0; s < post_; ++s) L.gauss_seidel(x, b, false);
  }

  std::vector<StencilLevel> levels_;
  std::vector<Work> work_;
  int pre_;
  int post_;
  int coarse_sweeps_ = 40;
};

}  // namespace dihedral::solver

#endif  // DIHEDRAL_SOLVER_MULTIGRID_HPP
