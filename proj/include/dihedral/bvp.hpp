#ifndef DIHEDRAL_BVP_HPP
#define DIHEDRAL_BVP_HPP

#include "dihedral/grid.hpp"

namespace dihedral {

enum class DriftKind { None, Spacetime, Charged };

/// Mixed boundary value problem on the box: u = 1 on the top face, u = 0 on
/// the bottom face, zero conormal flux on the four side faces.
struct MixedBVP {
  int axis = 2;
  Side top_side = Side::High;
  DriftKind drift = DriftKind::Spacetime;

  Face top() const noexcept { return Face{axis, top_side}; }
  Face bottom() const noexcept {
    return Face{axis, top_side == Side::High ? Side::Low : Side::High};
  }
  bool is_dirichlet(Face f) const noexcept { return f.axis == axis; }
  bool is_side(Face f) const noexcept { return f.axis != axis; }

  void check() const {
    if (axis < 0 || axis > 2) throw InputError("BVP axis must be 0, 1 or 2");
  }
};

}  // namespace dihedral

#endif  // DIHEDRAL_BVP_HPP
