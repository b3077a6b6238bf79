#pragma once

#include <catprob/channel.hpp>
#include <catprob/effects.hpp>
#include <catprob/error.hpp>
#include <catprob/space.hpp>
#include <catprob/tolerance.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

namespace catprob {

inline double gaussian_density(double mean, double stddev, double x) {
  if (!(stddev > 0.0) || !std::isfinite(stddev)) throw ValidationError("gaussian stddev must be positive");
  const double z = (x - mean) / stddev;
  return std::exp(-0.5 * z * z) / (stddev * std::sqrt(2.0 * std::numbers::pi));
}

/// Composite Simpson rule with `n` (even) subintervals on [lo, hi].
template <typename F>
double quadrature(F&& f, double lo, double hi, std::size_t n = 1024) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw ValidationError("quadrature needs lo < hi");
  if (n < 2 || n % 2 != 0) throw ValidationError("simpson quadrature needs an even number of subintervals");
  const double h = (hi - lo) / static_cast<double>(n);
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double v = f(lo + static_cast<double>(i) * h);
    (i % 2 ? odd : even) += v;
  }
  return h / 3.0 * (f(lo) + f(hi) + 4.0 * odd + 2.0 * even);
}

/// Reference measure against which likelihoods are densities.
struct LebesgueInterval {
  double lo;
  double hi;
};
struct CountingFinite {
  Space space;
};
using ReferenceMeasure = std::variant<LebesgueInterval, CountingFinite>;

/// Half-width of the effective support of a Gaussian, in standard deviations.
inline constexpr double kGaussianSupport = 8.0;

struct Gaussian {
  double mean;
  double stddev;

  double operator()(double x) const { return gaussian_density(mean, stddev, x); }
  LebesgueInterval support() const {
    return {mean - kGaussianSupport * stddev, mean + kGaussianSupport * stddev};
  }
};

/// Piecewise-linear density through (xs[i], ys[i]), zero outside [xs.front(), xs.back()].
struct PiecewiseLinear {
  std::vector<double> xs;
  std::vector<double> ys;

  PiecewiseLinear(std::vector<double> knots, std::vector<double> values) : xs(std::move(knots)), ys(std::move(values)) {
    if (xs.size() < 2 || xs.size() != ys.size()) throw ValidationError("piecewise-linear density needs ≥ 2 matching knots");
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (!(xs[i - 1] < xs[i])) throw ValidationError("piecewise-linear knots must increase");
    }
    for (double y : ys) {
      if (!(y >= 0.0) || !std::isfinite(y)) throw ValidationError("piecewise-linear density must be nonnegative");
    }
  }

  double operator()(double x) const {
    if (x < xs.front() || x > xs.back()) return 0.0;
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.end()) return ys.back();
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + t * (ys[i] - ys[i - 1]);
  }

  /// Trapezoid integral, exact for this representation.
  double integral() const {
    double s = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) s += 0.5 * (ys[i - 1] + ys[i]) * (xs[i] - xs[i - 1]);
    return s;
  }

  LebesgueInterval support() const { return {xs.front(), xs.back()}; }
};

using Density = std::variant<Gaussian, PiecewiseLinear>;

inline double evaluate(const Density& d, double x) {
  return std::visit([x](const auto& f) { return f(x); }, d);
}

inline LebesgueInterval support(const Density& d) {
  return std::visit([](const auto& f) { return f.support(); }, d);
}

/// Integral of a density over its effective support.
inline double total_mass(const Density& d, std::size_t n = 1024) {
  if (const auto* pl = std::get_if<PiecewiseLinear>(&d)) return pl->integral();
  const auto& g = std::get<Gaussian>(d);
  const auto s = g.support();
  return quadrature(g, s.lo, s.hi, n);
}

/// A channel from a finite space to the real line, given by one density per
/// input label against Lebesgue measure.
class DensityFamily {
 public:
  DensityFamily(Space input, std::vector<Density> densities, double tol = 1e-6)
      : input_(std::move(input)), densities_(std::move(densities)) {
    if (densities_.size() != input_.size()) {
      throw DimensionError("density family over '" + input_.name() + "' needs " + std::to_string(input_.size()) +
                           " densities, got " + std::to_string(densities_.size()));
    }
    for (std::size_t i = 0; i < densities_.size(); ++i) {
      const double m = total_mass(densities_[i]);
      if (std::abs(m - 1.0) > tol) {
        throw ValidationError("density for '" + input_.label(i) + "' integrates to " + std::to_string(m));
      }
    }
    LebesgueInterval r = catprob::support(densities_.front());
    for (const auto& d : densities_) {
      const auto s = catprob::support(d);
      r.lo = std::min(r.lo, s.lo);
      r.hi = std::max(r.hi, s.hi);
    }
    reference_ = r;
  }

  const Space& input_space() const noexcept { return input_; }
  const Density& density(std::size_t i) const { return densities_.at(i); }
  std::size_t size() const noexcept { return densities_.size(); }
  const LebesgueInterval& reference() const noexcept { return reference_; }

  double operator()(std::size_t input, double y) const { return evaluate(densities_.at(input), y); }

 private:
  Space input_;
  std::vector<Density> densities_;
  LebesgueInterval reference_{};
};

/// A single observed feature value: a label for discrete features, a real for densities.
using ObservedValue = std::variant<std::string, double>;

/// Maps (class index, observed value) to a nonnegative likelihood.
class FeatureEvaluator {
 public:
  /// Discrete feature: row lookup in a causal channel P → F (counting reference).
  explicit FeatureEvaluator(Channel c) : impl_(std::move(c)) {
    const auto& ch = std::get<Channel>(impl_);
    if (ch.dom().wires() != 1 || ch.cod().wires() != 1) {
      throw DimensionError("discrete feature channel must map one wire to one wire");
    }
  }
  explicit FeatureEvaluator(DensityFamily d) : impl_(std::move(d)) {}

  bool is_discrete() const noexcept { return std::holds_alternative<Channel>(impl_); }

  const Space& class_space() const {
    if (const auto* c = std::get_if<Channel>(&impl_)) return c->dom().wire(0);
    return std::get<DensityFamily>(impl_).input_space();
  }

  ReferenceMeasure reference() const {
    if (const auto* c = std::get_if<Channel>(&impl_)) return CountingFinite{c->cod().wire(0)};
    return std::get<DensityFamily>(impl_).reference();
  }

  const Channel* channel() const noexcept { return std::get_if<Channel>(&impl_); }
  const DensityFamily* density_family() const noexcept { return std::get_if<DensityFamily>(&impl_); }

  double operator()(std::size_t cls, const ObservedValue& obs) const {
    if (const auto* c = std::get_if<Channel>(&impl_)) {
      const auto* label = std::get_if<std::string>(&obs);
      if (!label) throw ValidationError("discrete feature '" + c->cod().wire(0).name() + "' needs a label");
      return (*c)(cls, c->cod().wire(0).index_of(*label));
    }
    const auto* value = std::get_if<double>(&obs);
    const auto& d = std::get<DensityFamily>(impl_);
    if (!value) throw ValidationError("density feature over '" + d.input_space().name() + "' needs a number");
    return d(cls, *value);
  }

 private:
  std::variant<Channel, DensityFamily> impl_;
};

/// Posterior over the prior's space given point observations, one per
/// feature: proportional to prior(p) · ∏ᵢ ℓᵢ(p, obsᵢ).
inline State likelihood_invert(const State& prior, std::span<const FeatureEvaluator> features,
                               std::span<const ObservedValue> observation, double eps = kDefaultEps) {
  if (prior.space().wires() != 1) throw DimensionError("likelihood_invert needs a prior on a single wire");
  if (!prior.is_causal(eps)) throw ValidationError("likelihood_invert needs a causal prior");
  if (features.size() != observation.size()) {
    throw ValidationError("observation has " + std::to_string(observation.size()) + " values for " +
                          std::to_string(features.size()) + " features");
  }
  const Space& p = prior.space().wire(0);
  for (const auto& f : features) {
    if (!(f.class_space() == p)) throw DimensionError("feature is not indexed by '" + p.name() + "'");
  }
  std::vector<double> w(p.size());
  double total = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    double v = prior[c];
    for (std::size_t i = 0; i < features.size(); ++i) v *= features[i](c, observation[i]);
    w[c] = v;
    total += v;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw MathError("every class has zero likelihood for this observation");
  }
  for (auto& v : w) v /= total;
  return State(prior.space(), std::move(w));
}

/// Pointwise reciprocal where p > support_eps, zero elsewhere.
inline Effect almost_inverse(const Effect& p, double support_eps = kDefaultEps) {
  std::vector<double> v(p.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = p[i] > support_eps ? 1.0 / p[i] : 0.0;
  return Effect(p.space(), std::move(v));
}

/// Discrete channel input → bins, bin mass by Simpson over `bins` equal bins of [lo, hi].
/// Bin labels are "b0", "b1", ...; bin_of() maps a real value back to its bin.
class Discretization {
 public:
  Discretization(const DensityFamily& family, double lo, double hi, std::size_t bins, std::size_t per_bin = 8)
      : lo_(lo), hi_(hi), bins_(bins), channel_(build(family, lo, hi, bins, per_bin)) {}

  const Channel& channel() const noexcept { return channel_; }
  double width() const noexcept { return (hi_ - lo_) / static_cast<double>(bins_); }

  std::string bin_of(double y) const {
    if (y < lo_ || y > hi_) throw ValidationError("value outside the discretised interval");
    auto b = static_cast<std::size_t>((y - lo_) / width());
    return "b" + std::to_string(std::min(b, bins_ - 1));
  }

 private:
  static Channel build(const DensityFamily& family, double lo, double hi, std::size_t bins, std::size_t per_bin) {
    if (bins == 0) throw ValidationError("discretisation needs at least one bin");
    std::vector<std::string> labels(bins);
    for (std::size_t b = 0; b < bins; ++b) labels[b] = "b" + std::to_string(b);
    const Space out(family.input_space().name() + "_bins", std::move(labels));
    const double h = (hi - lo) / static_cast<double>(bins);
    std::vector<double> e(family.size() * bins);
    for (std::size_t c = 0; c < family.size(); ++c) {
      double row = 0.0;
      for (std::size_t b = 0; b < bins; ++b) {
        const double a = lo + static_cast<double>(b) * h;
        const double m = quadrature([&](double y) { return family(c, y); }, a, a + h, per_bin);
        e[c * bins + b] = m;
        row += m;
      }
      // Tail mass outside [lo, hi] is dropped; renormalise to keep the channel causal.
      for (std::size_t b = 0; b < bins; ++b) e[c * bins + b] /= row;
    }
    return Channel(ProductSpace(family.input_space()), ProductSpace(out), std::move(e));
  }

  double lo_;
  double hi_;
  std::size_t bins_;
  Channel channel_;
};

}  // namespace catprob
