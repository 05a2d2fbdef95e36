#ifndef DIHEDRAL_INITIAL_DATA_HPP
#define DIHEDRAL_INITIAL_DATA_HPP

#include <optional>
#include <sstream>

#include "dihedral/fields.hpp"
#include "dihedral/finite_difference.hpp"

namespace dihedral {

/// An initial data set (g, k) on a grid, optionally augmented by an electric
/// one-form. When the electric field is exact, `electric_potential` carries a
/// function h with electric = dh; the charged solver uses it to build a
/// symmetric operator.
struct InitialData {
  Grid grid;
  SymTensorField g;
  SymTensorField k;
  std::optional<CoVectorField> electric;
  std::optional<ScalarField> electric_potential;

  bool has_electric() const noexcept { return electric.has_value(); }
};

/// sup |div_g E| using the flux form (1/sqrt g) d_i(sqrt g g^ij E_j).
inline double electric_divergence_sup(const InitialData& data) {
  if (!data.electric) return 0.0;
  const Grid& grid = data.grid;
  Field<Vec3> flux(grid);
  ScalarField sqrtg(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    sqrtg[n] = std::sqrt(det(data.g[n]));
    flux[n] = sqrtg[n] * raise(inverse(data.g[n]), (*data.electric)[n]);
  }
  double worst = 0.0;
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) {
        const std::array<int, 3> ijk{i, j, k};
        double div = 0.0;
        for (int a = 0; a < 3; ++a) div += fd::d1(flux, ijk, a)[a];
        worst = std::max(worst, std::abs(div / sqrtg.at(i, j, k)));
      }
  return worst;
}

/// Tolerance used when checking discretization-level identities of supplied
/// data (divergence-free electric field, potential consistency).
inline double data_identity_tolerance(const InitialData& data) {
  double emax = 0.0;
  if (data.electric)
    for (std::size_t n = 0; n < data.grid.size(); ++n)
      emax = std::max(emax, conorm(inverse(data.g[n]), (*data.electric)[n]));
  return 10.0 * data.grid.max_spacing() * (1.0 + emax) * (1.0 + emax);
}

/// Tolerance on sup |curl E|. Central differences of a closed smooth field
/// leave an O(h^2) curl.
inline double closedness_tolerance(const InitialData& data) {
  const double h = data.grid.max_spacing();
  return h * data_identity_tolerance(data);
}

/// Validates an initial data set; throws InputError on failure.
inline void validate(const InitialData& data) {
  const Grid& grid = data.grid;
  if (!(data.g.grid() == grid) || !(data.k.grid() == grid))
    throw InputError("metric and extrinsic curvature must live on the data grid");
  for (std::size_t n = 0; n < grid.size(); ++n) {
    for (double c : data.g[n].c)
      if (!std::isfinite(c)) throw InputError("metric has non-finite components");
    for (double c : data.k[n].c)
      if (!std::isfinite(c)) throw InputError("extrinsic curvature has non-finite components");
    if (!is_positive_definite(data.g[n])) {
      const auto ijk = grid.ijk(n);
      std::ostringstream os;
      os << "metric is not positive definite at node (" << ijk[0] << "," << ijk[1] << ","
         << ijk[2] << ")";
      throw InputError(os.str());
    }
  }
  if (data.electric_potential && !data.electric)
    throw InputError("electric potential given without an electric field");
  if (data.electric) {
    if (!(data.electric->grid() == grid)) throw InputError("electric field grid mismatch");
    if (data.electric->variance != Variance::Covariant)
      throw InputError("electric field must be stored as a one-form");
    for (std::size_t n = 0; n < grid.size(); ++n)
      for (double c : (*data.electric)[n])
        if (!std::isfinite(c)) throw InputError("electric field has non-finite components");
    const double tol = data_identity_tolerance(data);
    const double div = electric_divergence_sup(data);
    if (div > tol) {
      std::ostringstream os;
      os << "electric field is not divergence free: sup|div E| = " << div << " > " << tol;
      throw InputError(os.str());
    }
    if (data.electric_potential) {
      const CoVectorField dh = fd::gradient(*data.electric_potential);
      double worst = 0.0;
      for (std::size_t n = 0; n < grid.size(); ++n)
        for (int a = 0; a < 3; ++a)
          worst = std::max(worst, std::abs(dh[n][a] - (*data.electric)[n][a]));
      if (worst > tol) throw InputError("electric field differs from the gradient of its potential");
    }
  }
}

/// Builds and validates an initial data set.
inline InitialData make_initial_data(SymTensorField g, SymTensorField k,
                                     std::optional<CoVectorField> electric = std::nullopt,
                                     std::optional<ScalarField> potential = std::nullopt) {
  InitialData data{g.grid(), std::move(g), std::move(k), std::move(electric), std::move(potential)};
  validate(data);
  return data;
}

}  // namespace dihedral

#endif  // DIHEDRAL_INITIAL_DATA_HPP
