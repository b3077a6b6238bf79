#pragma once

#include <catprob/channel.hpp>
#include <catprob/disintegration.hpp>
#include <catprob/error.hpp>
#include <catprob/space.hpp>
#include <catprob/tolerance.hpp>

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace catprob {

/// Nonnegative finite function on a space; a predicate when bounded by 1.
class Effect {
 public:
  Effect(ProductSpace space, std::vector<double> values) : space_(std::move(space)), values_(std::move(values)) {
    if (values_.size() != space_.size()) {
      throw DimensionError("effect on " + space_.describe() + " needs " + std::to_string(space_.size()) +
                           " values, got " + std::to_string(values_.size()));
    }
    detail::check_weights(values_, "effect");
  }

  const ProductSpace& space() const noexcept { return space_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_.at(i); }

  friend bool operator==(const Effect&, const Effect&) = default;

 private:
  ProductSpace space_;
  std::vector<double> values_;
};

/// The truth effect 𝟙.
inline Effect truth(const ProductSpace& space) { return Effect(space, std::vector<double>(space.size(), 1.0)); }

/// Indicator 1_B of the points satisfying `member`.
inline Effect indicator(const ProductSpace& space, const std::function<bool(std::size_t)>& member) {
  std::vector<double> v(space.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = member(i) ? 1.0 : 0.0;
  return Effect(space, std::move(v));
}

/// Pointwise product p & q.
inline Effect operator*(const Effect& p, const Effect& q) {
  require_same(p.space(), q.space(), "effect product");
  std::vector<double> v(p.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = p[i] * q[i];
  return Effect(p.space(), std::move(v));
}

/// σ ⊨ p = Σ_x σ(x) · p(x).
inline Scalar validity(const State& s, const Effect& p) {
  require_same(s.space(), p.space(), "validity");
  double v = 0.0;
  for (std::size_t i = 0; i < p.values().size(); ++i) v += s[i] * p[i];
  return Scalar(v);
}

/// Rescales σ to mass one.
inline State normalize(const SubState& s, double eps = kDefaultEps) {
  const double m = s.mass();
  if (!(m > eps)) throw MathError("cannot normalise a state of mass " + std::to_string(m));
  return scale(s, 1.0 / m);
}

/// σ|p(x) = σ(x) · p(x) / (σ ⊨ p).
inline State condition(const State& s, const Effect& p, double eps = kDefaultEps) {
  const double v = validity(s, p).value();
  if (!(v > eps)) throw MathError("conditioning undefined: validity " + std::to_string(v) + " is zero");
  std::vector<double> w(s.weights().size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = s[i] * p[i] / v;
  return State(s.space(), std::move(w));
}

/// c*(q) = q ∘ c, i.e. x ↦ Σ_y c(x)(y) · q(y).
inline Effect predicate_transform(const Channel& c, const Effect& q) {
  require_same(c.cod(), q.space(), "predicate_transform");
  std::vector<double> v(c.dom().size(), 0.0);
  for (std::size_t x = 0; x < v.size(); ++x) {
    for (std::size_t y = 0; y < c.cod().size(); ++y) v[x] += c(x, y) * q[y];
  }
  return Effect(c.dom(), std::move(v));
}

/// 𝟙 ⊗ q on left ⊗ Y.
inline Effect weaken(const Effect& q, const ProductSpace& left) {
  const std::size_t nl = left.size();
  const std::size_t nq = q.space().size();
  std::vector<double> v(nl * nq);
  for (std::size_t x = 0; x < nl; ++x) {
    for (std::size_t y = 0; y < nq; ++y) v[x * nq + y] = q[y];
  }
  return Effect(left * q.space(), std::move(v));
}

/// Extends p, given on the listed wires of `full`, to all of `full` by
/// ignoring the other wires; weaken() is the case of trailing wires.
inline Effect lift(const Effect& p, const ProductSpace& full, std::span<const std::size_t> wires) {
  require_same(full.select(wires), p.space(), "lift");
  std::vector<double> v(full.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = p[full.project(i, wires)];
  return Effect(full, std::move(v));
}

/// Whether q inverts p on the support of σ: p(x) · q(x) = 1 wherever σ(x) > eps.
inline bool almost_inverts(const Effect& p, const Effect& q, const State& s, double eps = kDefaultEps) {
  require_same(p.space(), q.space(), "almost_inverts");
  require_same(p.space(), s.space(), "almost_inverts");
  for (std::size_t i = 0; i < s.weights().size(); ++i) {
    if (s[i] > eps && std::abs(p[i] * q[i] - 1.0) > eps) return false;
  }
  return true;
}

/// The three routes to the X-marginal of ω conditioned on an effect on Y.
enum class CrossoverPath {
  Backward,           ///< ω₁ | c₁*(q), with c₁ : X → Y extracted from ω
  JointThenMarginal,  ///< (ω | 𝟙⊗q) marginalised to X
  Forward,            ///< (c₂)∗(ω₂ | q), with c₂ : Y → X extracted from ω
};

/// ω is bipartite on X⊗Y with X the first `x_wires` wires; q lives on Y.
inline State crossover(const State& joint, const Effect& q, CrossoverPath path, std::size_t x_wires = 1,
                       double eps = kDefaultEps) {
  const std::size_t n = joint.space().wires();
  if (x_wires == 0 || x_wires >= n) throw ValidationError("crossover needs a bipartite state");
  std::vector<std::size_t> xs(x_wires), ys(n - x_wires);
  for (std::size_t i = 0; i < n; ++i) (i < x_wires ? xs[i] : ys[i - x_wires]) = i;
  require_same(joint.space().select(ys), q.space(), "crossover effect");
  const ProductSpace x = joint.space().select(xs);

  const double v = validity(joint, weaken(q, x)).value();
  if (!(v > eps)) throw MathError("crossover undefined: validity " + std::to_string(v) + " is zero");

  Mask x_mask = Mask::none(n);
  for (auto i : xs) x_mask = x_mask | Mask::of(n, {i});
  switch (path) {
    case CrossoverPath::Backward: {
      const auto d = disintegrate(joint, x_mask);
      return condition(d.base, predicate_transform(d.channel, q), eps);
    }
    case CrossoverPath::JointThenMarginal:
      return marginal(condition(joint, weaken(q, x), eps), x_mask);
    case CrossoverPath::Forward: {
      const auto d = disintegrate(joint, x_mask.complement());
      return state_transform(d.channel, condition(d.base, q, eps));
    }
  }
  throw ValidationError("unknown crossover path");
}

}  // namespace catprob
