#pragma once

#include <catprob/channel.hpp>
#include <catprob/disintegration.hpp>
#include <catprob/error.hpp>
#include <catprob/tolerance.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

namespace catprob {

/// Disjoint wire groups X, Y, Z of one joint state. Z may be empty, which
/// asks for plain independence of X and Y.
struct WireGroups {
  Mask x;
  Mask y;
  Mask z;

  void validate(std::size_t wires) const {
    x.require_length(wires);
    y.require_length(wires);
    z.require_length(wires);
    if (x.empty() || y.empty()) throw ValidationError("independence query needs nonempty X and Y groups");
    if (!x.disjoint(y) || !x.disjoint(z) || !y.disjoint(z)) throw ValidationError("wire groups overlap");
  }

  WireGroups swapped() const { return {y, x, z}; }
};

/// The equivalent characterisations of X ⟂ Y | Z checked by ci_formulation.
enum class CiFormulation {
  CondFactor,  ///< ω[X,Y|Z] ≡ (ω[X|Z] ⊗ ω[Y|Z]) ∘ copy w.r.t. ω_Z
  Factorize3,  ///< ω_XYZ = (ω[X|Z] ⊗ ω[Y|Z] ⊗ id) ∘ copy₃ ∘ ω_Z
  DropY,       ///< ω[X|Y,Z] ≡ ω[X|Z] ∘ (discard ⊗ id) w.r.t. ω_YZ
  FactorPair,  ///< ω_XYZ = (ω[X|Z] ⊗ id_YZ) after copying Z out of ω_YZ
};

/// X ⟂ Y | Z: decided by P(x,y|z) = P(x|z) P(y|z) on every z of mass above
/// eps, written division-free as |ω(x,y,z) ω(z) − ω(x,z) ω(y,z)| ≤ eps ω(z)².
inline bool cond_indep(const State& s, const WireGroups& g, double eps = kCiEps) {
  g.validate(s.space().wires());
  const auto xs = g.x.selected();
  const auto ys = g.y.selected();
  const auto zs = g.z.selected();
  std::vector<std::size_t> order = xs;
  order.insert(order.end(), ys.begin(), ys.end());
  order.insert(order.end(), zs.begin(), zs.end());
  const State xyz = project(s, order);
  const std::size_t nx = s.space().select(xs).size();
  const std::size_t ny = s.space().select(ys).size();
  const std::size_t nz = s.space().select(zs).size();
  auto at = [&](std::size_t x, std::size_t y, std::size_t z) { return xyz[(x * ny + y) * nz + z]; };

  std::vector<double> pz(nz, 0.0), pxz(nx * nz, 0.0), pyz(ny * nz, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      for (std::size_t z = 0; z < nz; ++z) {
        const double w = at(x, y, z);
        pz[z] += w;
        pxz[x * nz + z] += w;
        pyz[y * nz + z] += w;
      }
    }
  }
  for (std::size_t z = 0; z < nz; ++z) {
    if (pz[z] <= eps) continue;
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        const double lhs = at(x, y, z) * pz[z];
        const double rhs = pxz[x * nz + z] * pyz[y * nz + z];
        if (std::abs(lhs - rhs) > eps * pz[z] * pz[z]) return false;
      }
    }
  }
  return true;
}

namespace detail {

inline std::vector<std::size_t> concat(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Identity on a prefix and a suffix of wires around a middle channel.
inline Channel sandwich(const ProductSpace& before, const Channel& middle, const ProductSpace& after) {
  return tensor(tensor(identity(before), middle), identity(after));
}

}  // namespace detail

/// Evaluates one of the equivalent formulations of X ⟂ Y | Z numerically.
/// State equalities are checked in L∞ within eps; channel equalities as
/// almost-equality with respect to the conditioning marginal.
inline bool ci_formulation(const State& s, const WireGroups& g, CiFormulation which, double eps = kCiEps) {
  g.validate(s.space().wires());
  const auto xs = g.x.selected();
  const auto ys = g.y.selected();
  const auto zs = g.z.selected();
  const ProductSpace& sp = s.space();
  const ProductSpace x = sp.select(xs), y = sp.select(ys), z = sp.select(zs);
  using detail::concat;
  using detail::conditional;
  constexpr auto fill = FillPolicy::Uniform;

  const auto x_given_z = conditional(s, zs, xs, fill);
  const auto y_given_z = conditional(s, zs, ys, fill);
  const State& omega_z = x_given_z.base;
  const State xyz = project(s, concat(concat(xs, ys), zs));

  switch (which) {
    case CiFormulation::CondFactor: {
      const auto xy_given_z = conditional(s, zs, concat(xs, ys), fill);
      const Channel product = compose(tensor(x_given_z.channel, y_given_z.channel), copier(z));
      return almost_equal(xy_given_z.channel, product, omega_z, eps);
    }
    case CiFormulation::Factorize3: {
      // Z ↦ Z⊗Z⊗Z, then X and Y drawn from the first two copies.
      const Channel copy3 = compose(tensor(copier(z), identity(z)), copier(z));
      const Channel draw = tensor(tensor(x_given_z.channel, y_given_z.channel), identity(z));
      const State rebuilt = state_transform(compose(draw, copy3), omega_z);
      return linf_distance(xyz, rebuilt) <= eps;
    }
    case CiFormulation::DropY: {
      const auto x_given_yz = conditional(s, concat(ys, zs), xs, fill);
      const Channel via_z = compose(x_given_z.channel, tensor(discarder(y), identity(z)));
      return almost_equal(x_given_yz.channel, via_z, x_given_yz.base, eps);
    }
    case CiFormulation::FactorPair: {
      const State omega_yz = project(s, concat(ys, zs));
      // Y⊗Z → Y⊗Z⊗Z → Y⊗Z⊗X, then move X to the front.
      const Channel split = detail::sandwich(y, copier(z), ProductSpace::unit());
      const Channel draw = detail::sandwich(y * z, x_given_z.channel, ProductSpace::unit());
      const State yzx = state_transform(compose(draw, split), omega_yz);
      std::vector<std::size_t> to_xyz;
      for (std::size_t i = 0; i < x.wires(); ++i) to_xyz.push_back(y.wires() + z.wires() + i);
      for (std::size_t i = 0; i < y.wires() + z.wires(); ++i) to_xyz.push_back(i);
      return linf_distance(xyz, permute_wires(yzx, to_xyz)) <= eps;
    }
  }
  throw ValidationError("unknown independence formulation");
}

}  // namespace catprob
