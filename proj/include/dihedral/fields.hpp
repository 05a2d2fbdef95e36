#ifndef DIHEDRAL_FIELDS_HPP
#define DIHEDRAL_FIELDS_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dihedral/grid.hpp"
#include "dihedral/tensor.hpp"

namespace dihedral {

/// Per-node values of type T on a grid.
template <class T>
class Field {
 public:
  using value_type = T;

  Field() = default;
  explicit Field(const Grid& grid, const T& fill = T{}) : grid_(grid), values_(grid.size(), fill) {}
  Field(const Grid& grid, std::vector<T> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw InputError("field size does not match grid");
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  const T& operator[](std::size_t i) const noexcept { return values_[i]; }
  T& operator[](std::size_t i) noexcept { return values_[i]; }
  const T& at(int i, int j, int k) const noexcept { return values_[grid_.index(i, j, k)]; }
  T& at(int i, int j, int k) noexcept { return values_[grid_.index(i, j, k)]; }

  std::span<const T> values() const noexcept { return values_; }
  std::span<T> values() noexcept { return values_; }
  std::vector<T>& storage() noexcept { return values_; }

  /// Fill from a function of position.
  template <class F>
  static Field sample(const Grid& grid, F&& f) {
    Field out(grid);
    for (int k = 0; k < grid.n(2); ++k)
      for (int j = 0; j < grid.n(1); ++j)
        for (int i = 0; i < grid.n(0); ++i) out.at(i, j, k) = f(grid.position(i, j, k));
    return out;
  }

 private:
  Grid grid_;
  std::vector<T> values_;
};

enum class Variance { Covariant, Contravariant };

using ScalarField = Field<double>;
using SymTensorField = Field<Sym3>;

/// One-form or vector field; `variance` records which.
class CoVectorField : public Field<Vec3> {
 public:
  CoVectorField() = default;
  explicit CoVectorField(const Grid& grid, Variance v = Variance::Covariant)
      : Field<Vec3>(grid), variance(v) {}
  CoVectorField(Field<Vec3> f, Variance v = Variance::Covariant)
      : Field<Vec3>(std::move(f)), variance(v) {}

  Variance variance = Variance::Covariant;
};

/// Levi-Civita connection coefficients at a node: gamma[k](i, j) = Gamma^k_ij.
struct Connection {
  std::array<Sym3, 3> gamma{};
};

inline Connection operator+(const Connection& a, const Connection& b) noexcept {
  Connection r;
  for (int k = 0; k < 3; ++k) r.gamma[k] = a.gamma[k] + b.gamma[k];
  return r;
}
inline Connection operator*(double s, const Connection& a) noexcept {
  Connection r;
  for (int k = 0; k < 3; ++k) r.gamma[k] = s * a.gamma[k];
  return r;
}

using ConnectionField = Field<Connection>;

inline bool all_finite(const ScalarField& f) {
  for (double v : f.values())
    if (!std::isfinite(v)) return false;
  return true;
}

inline double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double sup_norm(const ScalarField& f) { return sup_norm(f.values()); }

inline ScalarField map(const ScalarField& f, const std::function<double(double)>& op) {
  ScalarField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = op(f[i]);
  return out;
}

}  // namespace dihedral

#endif  // DIHEDRAL_FIELDS_HPP
