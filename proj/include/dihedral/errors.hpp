#ifndef DIHEDRAL_ERRORS_HPP
#define DIHEDRAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dihedral {

/// Rejected input: malformed grids, non-SPD metrics, parameters outside a
/// model's domain.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// An iterative solve failed to reach its tolerance.
class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dihedral

#endif  // DIHEDRAL_ERRORS_HPP
