#ifndef DIHEDRAL_MODELS_HPP
#define DIHEDRAL_MODELS_HPP

// Closed-form model initial data sets. Each model is a set of pointwise
// evaluators; `sample` turns one into grid data. Derivatives are never
// supplied, so every geometric quantity downstream goes through the finite
// difference path.

#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dihedral/bvp.hpp"
#include "dihedral/initial_data.hpp"

namespace dihedral {

struct Box {
  Vec3 lo{0, 0, 0};
  Vec3 hi{1, 1, 1};

  static Box unit() { return Box{}; }
  static Box centered(double half_width) {
    return Box{{-half_width, -half_width, -half_width}, {half_width, half_width, half_width}};
  }
  bool contains(const Vec3& x) const noexcept {
    for (int a = 0; a < 3; ++a)
      if (x[a] < lo[a] || x[a] > hi[a]) return false;
    return true;
  }
  /// Euclidean distance from x to the closed box.
  double distance(const Vec3& x) const noexcept {
    double s = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double d = std::max({lo[a] - x[a], 0.0, x[a] - hi[a]});
      s += d * d;
    }
    return std::sqrt(s);
  }
  void check() const {
    for (int a = 0; a < 3; ++a)
      if (!(hi[a] > lo[a])) throw InputError("box extents must satisfy lo < hi");
  }
  Grid grid(int n) const { return Grid({n, n, n}, lo, hi); }
};

/// A smooth scalar profile with closed-form gradient and Laplacian, used for
/// conformal perturbations.
struct Profile {
  enum class Kind { Bump, Paraboloid, Gaussian };
  Kind kind = Kind::Bump;
  Vec3 center{0.5, 0.5, 0.5};
  double width = 0.25;
  double weight = 1.0;
  Box box;  ///< support box for Kind::Bump

  double value(const Vec3& x) const {
    switch (kind) {
      case Kind::Bump: {
        double p = 1.0;
        for (int a = 0; a < 3; ++a) {
          const double s = std::sin(std::numbers::pi * xi(x, a));
          p *= s * s;
        }
        return weight * p;
      }
      case Kind::Paraboloid: {
        const Vec3 d = x - center;
        return -weight * dot(d, d) / (width * width);
      }
      case Kind::Gaussian: {
        const Vec3 d = x - center;
        return weight * std::exp(-dot(d, d) / (width * width));
      }
    }
    return 0.0;
  }

  Vec3 gradient(const Vec3& x) const {
    switch (kind) {
      case Kind::Bump: {
        Vec3 s{}, ds{};
        for (int a = 0; a < 3; ++a) {
          const double arg = std::numbers::pi * xi(x, a);
          const double L = box.hi[a] - box.lo[a];
          s[a] = std::sin(arg) * std::sin(arg);
          ds[a] = 2.0 * std::sin(arg) * std::cos(arg) * std::numbers::pi / L;
        }
        return weight * Vec3{ds[0] * s[1] * s[2], s[0] * ds[1] * s[2], s[0] * s[1] * ds[2]};
      }
      case Kind::Paraboloid:
        return (-2.0 * weight / (width * width)) * (x - center);
      case Kind::Gaussian:
        return (-2.0 / (width * width) * value(x)) * (x - center);
    }
    return {};
  }

  double laplacian(const Vec3& x) const {
    switch (kind) {
      case Kind::Bump: {
        Vec3 s{}, dds{};
        for (int a = 0; a < 3; ++a) {
          const double arg = std::numbers::pi * xi(x, a);
          const double L = box.hi[a] - box.lo[a];
          s[a] = std::sin(arg) * std::sin(arg);
          dds[a] = 2.0 * std::cos(2.0 * arg) * (std::numbers::pi / L) * (std::numbers::pi / L);
        }
        return weight * (dds[0] * s[1] * s[2] + s[0] * dds[1] * s[2] + s[0] * s[1] * dds[2]);
      }
      case Kind::Paraboloid:
        return -6.0 * weight / (width * width);
      case Kind::Gaussian: {
        const Vec3 d = x - center;
        const double w2 = width * width;
        return value(x) * (4.0 * dot(d, d) / (w2 * w2) - 6.0 / w2);
      }
    }
    return 0.0;
  }

 private:
  double xi(const Vec3& x, int a) const { return (x[a] - box.lo[a]) / (box.hi[a] - box.lo[a]); }
};

/// Sum of profiles.
struct ProfileSum {
  std::vector<Profile> terms;
  double value(const Vec3& x) const {
    double s = 0.0;
    for (const auto& p : terms) s += p.value(x);
    return s;
  }
  Vec3 gradient(const Vec3& x) const {
    Vec3 s{};
    for (const auto& p : terms) s += p.gradient(x);
    return s;
  }
  double laplacian(const Vec3& x) const {
    double s = 0.0;
    for (const auto& p : terms) s += p.laplacian(x);
    return s;
  }
};

/// Height function of a graph t = f(x^3) in Minkowski space.
struct HeightProfile {
  enum class Kind { Quadratic, Linear };
  Kind kind = Kind::Quadratic;
  double epsilon = 0.2;

  double f(double z) const { return kind == Kind::Quadratic ? epsilon * z * z : epsilon * z; }
  double df(double z) const { return kind == Kind::Quadratic ? 2.0 * epsilon * z : epsilon; }
  double ddf(double) const { return kind == Kind::Quadratic ? 2.0 * epsilon : 0.0; }
};

struct Model {
  std::string name;
  Box box;
  std::function<Sym3(const Vec3&)> metric;
  std::function<Sym3(const Vec3&)> extrinsic;
  std::function<Vec3(const Vec3&)> electric;     ///< empty when absent
  std::function<double(const Vec3&)> potential;  ///< electric = d potential, when known
  bool asymptotically_flat = false;
  /// Returns false where the closed form is singular or undefined.
  std::function<bool(const Vec3&)> defined_at = [](const Vec3&) { return true; };
};

inline Sym3 zero_tensor(const Vec3&) { return Sym3{}; }

inline Model euclidean_cube(const Box& box = Box::unit()) {
  box.check();
  Model m;
  m.name = "euclidean";
  m.box = box;
  m.metric = [](const Vec3&) { return Sym3::identity(); };
  m.extrinsic = zero_tensor;
  m.asymptotically_flat = true;
  return m;
}

/// g = (dx1)^2 + e^{2 x1}((dx2)^2 + (dx3)^2), k = g.
inline Model hyperbolic_prism(const Box& box = Box::unit()) {
  box.check();
  for (int a = 0; a < 3; ++a)
    if (box.lo[a] < 0.0 || box.hi[a] > 1.0)
      throw InputError("hyperbolic prism box must lie within [0,1]^3");
  Model m;
  m.name = "hyperbolic";
  m.box = box;
  m.metric = [](const Vec3& x) {
    const double e = std::exp(2.0 * x[0]);
    return Sym3::diagonal(1.0, e, e);
  };
  m.extrinsic = m.metric;
  return m;
}

/// Spacelike graph t = f(x^3) in Minkowski space: g = delta - df (x) df,
/// k = Hess f / sqrt(1 - |df|^2). Flipping the sign of k exchanges the roles
/// of theta_+ and theta_-.
inline Model minkowski_graph(const Box& box = Box::unit(), HeightProfile f = {}) {
  box.check();
  const double zs[] = {box.lo[2], box.hi[2], 0.0};
  for (double z : zs) {
    if ((z < box.lo[2] || z > box.hi[2])) continue;
    if (std::abs(f.df(z)) >= 1.0) throw InputError("graph slope must stay below 1 on the box");
  }
  Model m;
  m.name = "minkowski-graph";
  m.box = box;
  m.metric = [f](const Vec3& x) {
    Sym3 g = Sym3::identity();
    const double s = f.df(x[2]);
    g(2, 2) -= s * s;
    return g;
  };
  m.extrinsic = [f](const Vec3& x) {
    Sym3 k;
    const double s = f.df(x[2]);
    k(2, 2) = f.ddf(x[2]) / std::sqrt(1.0 - s * s);
    return k;
  };
  return m;
}

/// Time-symmetric Schwarzschild slice in isotropic coordinates.
inline Model schwarzschild_slice(double mass, const Box& box) {
  box.check();
  if (!(mass > 0.0)) throw InputError("Schwarzschild mass must be positive");
  if (box.distance({0, 0, 0}) <= 0.0) throw InputError("Schwarzschild box must exclude r = 0");
  Model m;
  m.name = "schwarzschild";
  m.box = box;
  m.metric = [mass](const Vec3& x) {
    const double r = std::sqrt(dot(x, x));
    const double psi = 1.0 + mass / (2.0 * r);
    const double p4 = psi * psi * psi * psi;
    return Sym3::diagonal(p4, p4, p4);
  };
  m.extrinsic = zero_tensor;
  m.asymptotically_flat = true;
  m.defined_at = [](const Vec3& x) { return dot(x, x) > 0.0; };
  return m;
}

/// Majumdar-Papapetrou time slice: g = U^2 delta, E = d log U,
/// U = 1 + q / |x - x0|.
inline Model mp_slice(double charge, const Vec3& center, const Box& box = Box::unit()) {
  box.check();
  const double dist = box.distance(center);
  if (dist <= 0.0) throw InputError("charge center must lie strictly outside the box");
  if (1.0 + charge / dist <= 0.0) throw InputError("MP potential U vanishes on the box");
  Model m;
  m.name = "mp";
  m.box = box;
  auto U = [charge, center](const Vec3& x) {
    const Vec3 d = x - center;
    return 1.0 + charge / std::sqrt(dot(d, d));
  };
  m.metric = [U](const Vec3& x) {
    const double u = U(x);
    return Sym3::diagonal(u * u, u * u, u * u);
  };
  m.extrinsic = zero_tensor;
  m.electric = [U, charge, center](const Vec3& x) {
    const Vec3 d = x - center;
    const double r = std::sqrt(dot(d, d));
    return (-charge / (r * r * r * U(x))) * d;
  };
  m.potential = [U](const Vec3& x) { return std::log(U(x)); };
  m.asymptotically_flat = true;
  m.defined_at = [center](const Vec3& x) {
    const Vec3 d = x - center;
    return dot(d, d) > 0.0;
  };
  return m;
}

/// Flat data with a constant electric one-form.
inline Model uniform_field(const Vec3& field, const Box& box = Box::unit()) {
  box.check();
  Model m;
  m.name = "uniform-field";
  m.box = box;
  m.metric = [](const Vec3&) { return Sym3::identity(); };
  m.extrinsic = zero_tensor;
  m.electric = [field](const Vec3&) { return field; };
  m.potential = [field](const Vec3& x) { return dot(field, x); };
  return m;
}

/// g -> e^{2 eps phi} g and k -> k + eps s.
inline Model perturb(const Model& base, ProfileSum phi, double eps,
                     std::function<Sym3(const Vec3&)> s = {}) {
  if (eps == 0.0) return base;
  Model m = base;
  m.name = base.name + "+perturbed";
  auto g0 = base.metric;
  m.metric = [g0, phi, eps](const Vec3& x) { return std::exp(2.0 * eps * phi.value(x)) * g0(x); };
  if (s) {
    auto k0 = base.extrinsic;
    m.extrinsic = [k0, s, eps](const Vec3& x) { return k0(x) + eps * s(x); };
  }
  return m;
}

/// Samples a model on a grid and validates the result.
inline InitialData sample(const Model& model, const Grid& grid) {
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i)
        if (!model.defined_at(grid.position(i, j, k)))
          throw InputError("model '" + model.name + "' is singular on the grid");
  auto g = SymTensorField::sample(grid, model.metric);
  auto kk = SymTensorField::sample(grid, model.extrinsic);
  std::optional<CoVectorField> e;
  std::optional<ScalarField> h;
  if (model.electric) e = CoVectorField(Field<Vec3>::sample(grid, model.electric));
  if (model.potential) h = ScalarField::sample(grid, model.potential);
  return make_initial_data(std::move(g), std::move(kk), std::move(e), std::move(h));
}

inline InitialData sample(const Model& model, int n) { return sample(model, model.box.grid(n)); }

/// Data-level perturbation for file-loaded fields.
inline InitialData perturb(const InitialData& data, const ScalarField& phi, double eps,
                           const SymTensorField* s = nullptr) {
  InitialData out = data;
  for (std::size_t n = 0; n < data.grid.size(); ++n) {
    out.g[n] = std::exp(2.0 * eps * phi[n]) * data.g[n];
    if (s) out.k[n] = data.k[n] + eps * (*s)[n];
  }
  validate(out);
  return out;
}

/// Closed-form solution of the mixed BVP where one is known.
inline std::optional<std::function<double(const Vec3&)>> reference_solution(
    const std::string& model_name, const Box& box, const MixedBVP& bvp,
    const std::map<std::string, double>& params = {}) {
  const int a = bvp.axis;
  const double lo = box.lo[a], hi = box.hi[a];
  const bool rising = bvp.top_side == Side::High;
  auto orient = [rising](double s) { return rising ? s : 1.0 - s; };
  auto param = [&params](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (model_name == "euclidean" ||
      (model_name == "mp" && bvp.drift == DriftKind::Charged)) {
    return [=](const Vec3& x) { return orient((x[a] - lo) / (hi - lo)); };
  }
  if (model_name == "hyperbolic" && a == 0 && bvp.drift == DriftKind::Spacetime) {
    // u'' + 2u' + 3|u'| = 0; decreasing solutions satisfy u'' = u'.
    if (rising) {
      return [=](const Vec3& x) {
        return (std::exp(-5.0 * lo) - std::exp(-5.0 * x[0])) / (std::exp(-5.0 * lo) - std::exp(-5.0 * hi));
      };
    }
    return [=](const Vec3& x) {
      return (std::exp(hi) - std::exp(x[0])) / (std::exp(hi) - std::exp(lo));
    };
  }
  if (model_name == "minkowski-graph" && a == 2 && rising && bvp.drift == DriftKind::Spacetime) {
    const HeightProfile f{HeightProfile::Kind::Quadratic, param("epsilon", 0.2)};
    // u' proportional to 1 - f'
    auto zeta = [f](double z) { return z - f.f(z); };
    return [=](const Vec3& x) { return (zeta(x[2]) - zeta(lo)) / (zeta(hi) - zeta(lo)); };
  }
  if (model_name == "uniform-field" && bvp.drift == DriftKind::Charged) {
    const double c = param("field", 0.0);
    if (c == 0.0) return [=](const Vec3& x) { return orient((x[a] - lo) / (hi - lo)); };
    // u'' - c u' = 0 along the axis with the field aligned to it
    if (!rising) return std::nullopt;
    return [=](const Vec3& x) {
      return (std::exp(c * (x[a] - lo)) - 1.0) / (std::exp(c * (hi - lo)) - 1.0);
    };
  }
  return std::nullopt;
}

}  // namespace dihedral

#endif  // DIHEDRAL_MODELS_HPP
