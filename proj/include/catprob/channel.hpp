#pragma once

#include <catprob/error.hpp>
#include <catprob/space.hpp>
#include <catprob/tolerance.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace catprob {

namespace detail {

inline void check_weights(std::span<const double> w, std::string_view what) {
  for (double v : w) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError(std::string(what) + " has a negative or non-finite entry");
    }
  }
}

}  // namespace detail

/// Nonnegative weight table over a product space.
///
/// Weights need not sum to one, so a State also serves as a multiset
/// (unnormalised distribution); operations that need a probability
/// distribution check is_causal() themselves.
class State {
 public:
  State(ProductSpace space, std::vector<double> weights)
      : space_(std::move(space)), weights_(std::move(weights)) {
    if (weights_.size() != space_.size()) {
      throw DimensionError("state over " + space_.describe() + " needs " + std::to_string(space_.size()) +
                           " weights, got " + std::to_string(weights_.size()));
    }
    detail::check_weights(weights_, "state");
  }

  const ProductSpace& space() const noexcept { return space_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](std::size_t i) const { return weights_.at(i); }
  double at(std::span<const std::string> labels) const { return weights_[space_.index_of(labels)]; }

  double mass() const noexcept {
    double m = 0.0;
    for (double v : weights_) m += v;
    return m;
  }

  bool is_causal(double eps = kDefaultEps) const noexcept { return std::abs(mass() - 1.0) <= eps; }

  /// Exact (bitwise) equality of spaces and weights.
  friend bool operator==(const State&, const State&) = default;

 private:
  ProductSpace space_;
  std::vector<double> weights_;
};

/// Unnormalised state; the same representation, named where arbitrary mass is expected.
using SubState = State;

/// For every point of `dom`, a weight table over `cod`. Stored row-major.
class Channel {
 public:
  Channel(ProductSpace dom, ProductSpace cod, std::vector<double> entries)
      : dom_(std::move(dom)), cod_(std::move(cod)), entries_(std::move(entries)) {
    if (entries_.size() != dom_.size() * cod_.size()) {
      throw DimensionError("channel " + dom_.describe() + " → " + cod_.describe() + " needs " +
                           std::to_string(dom_.size() * cod_.size()) + " entries, got " +
                           std::to_string(entries_.size()));
    }
    detail::check_weights(entries_, "channel");
  }

  /// Build from a row generator `row(x)` returning a State over `cod`.
  template <typename RowFn>
  static Channel from_rows(const ProductSpace& dom, const ProductSpace& cod, RowFn&& row) {
    std::vector<double> e;
    e.reserve(dom.size() * cod.size());
    for (std::size_t x = 0; x < dom.size(); ++x) {
      State s = row(x);
      require_same(s.space(), cod, "channel row");
      e.insert(e.end(), s.weights().begin(), s.weights().end());
    }
    return Channel(dom, cod, std::move(e));
  }

  const ProductSpace& dom() const noexcept { return dom_; }
  const ProductSpace& cod() const noexcept { return cod_; }
  std::span<const double> entries() const noexcept { return entries_; }

  double operator()(std::size_t x, std::size_t y) const { return entries_[x * cod_.size() + y]; }

  std::span<const double> row(std::size_t x) const {
    if (x >= dom_.size()) throw DimensionError("channel input index out of range");
    return std::span<const double>(entries_).subspan(x * cod_.size(), cod_.size());
  }

  State row_state(std::size_t x) const {
    auto r = row(x);
    return State(cod_, std::vector<double>(r.begin(), r.end()));
  }

  State at(std::span<const std::string> input) const { return row_state(dom_.index_of(input)); }

  bool is_causal(double eps = kDefaultEps) const noexcept {
    const std::size_t n = cod_.size();
    for (std::size_t x = 0; x < dom_.size(); ++x) {
      double s = 0.0;
      for (std::size_t y = 0; y < n; ++y) s += entries_[x * n + y];
      if (std::abs(s - 1.0) > eps) return false;
    }
    return true;
  }

  friend bool operator==(const Channel&, const Channel&) = default;

 private:
  ProductSpace dom_;
  ProductSpace cod_;
  std::vector<double> entries_;
};

/// Endomap of the tensor unit: a nonnegative real.
class Scalar {
 public:
  explicit Scalar(double v) : value_(v) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("scalar must be finite and nonnegative");
  }
  double value() const noexcept { return value_; }
  explicit operator double() const noexcept { return value_; }

 private:
  double value_;
};

inline bool is_causal(const State& s, double eps = kDefaultEps) { return s.is_causal(eps); }
inline bool is_causal(const Channel& c, double eps = kDefaultEps) { return c.is_causal(eps); }

// ---------------------------------------------------------------------------
// States and channels as one another.

inline Channel as_channel(const State& s) {
  return Channel(ProductSpace::unit(), s.space(), std::vector<double>(s.weights().begin(), s.weights().end()));
}

inline State as_state(const Channel& c) {
  if (!c.dom().is_unit()) throw DimensionError("channel from " + c.dom().describe() + " is not a state");
  return c.row_state(0);
}

// ---------------------------------------------------------------------------
// Structural maps.

inline Channel identity(const ProductSpace& x) {
  const std::size_t n = x.size();
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
  return Channel(x, x, std::move(e));
}

/// x ↦ 1|x,x⟩.
inline Channel copier(const ProductSpace& x) {
  const std::size_t n = x.size();
  std::vector<double> e(n * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n * n + i * n + i] = 1.0;
  return Channel(x, x * x, std::move(e));
}

/// x ↦ 1|∗⟩.
inline Channel discarder(const ProductSpace& x) {
  return Channel(x, ProductSpace::unit(), std::vector<double>(x.size(), 1.0));
}

/// (a, b) ↦ 1|b, a⟩.
inline Channel swap(const ProductSpace& a, const ProductSpace& b) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t n = na * nb;
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) e[(i * nb + j) * n + (j * na + i)] = 1.0;
  }
  return Channel(a * b, b * a, std::move(e));
}

/// Deterministic channel rearranging wires: output wire k is input wire order[k].
/// `order` must be a permutation of the wires of `x`.
inline Channel permutation(const ProductSpace& x, std::span<const std::size_t> order) {
  if (order.size() != x.wires()) throw DimensionError("wire permutation has wrong length");
  std::vector<bool> used(order.size(), false);
  for (auto w : order) {
    if (w >= order.size() || used[w]) throw ValidationError("wire order is not a permutation");
    used[w] = true;
  }
  const ProductSpace y = x.select(order);
  const std::size_t n = x.size();
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + x.project(i, order)] = 1.0;
  return Channel(x, y, std::move(e));
}

/// g ∘ f, matrix product of row-stochastic tables.
inline Channel compose(const Channel& g, const Channel& f) {
  require_same(f.cod(), g.dom(), "compose");
  const std::size_t nx = f.dom().size();
  const std::size_t ny = f.cod().size();
  const std::size_t nz = g.cod().size();
  std::vector<double> e(nx * nz, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      const double fxy = f(x, y);
      if (fxy == 0.0) continue;
      for (std::size_t z = 0; z < nz; ++z) e[x * nz + z] += fxy * g(y, z);
    }
  }
  return Channel(f.dom(), g.cod(), std::move(e));
}

/// Parallel composition: (f ⊗ g)(x, z)(y, w) = f(x)(y) · g(z)(w).
inline Channel tensor(const Channel& f, const Channel& g) {
  const std::size_t nx = f.dom().size(), ny = f.cod().size();
  const std::size_t nz = g.dom().size(), nw = g.cod().size();
  std::vector<double> e(nx * nz * ny * nw);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t z = 0; z < nz; ++z) {
      const std::size_t row = (x * nz + z) * ny * nw;
      for (std::size_t y = 0; y < ny; ++y) {
        for (std::size_t w = 0; w < nw; ++w) e[row + y * nw + w] = f(x, y) * g(z, w);
      }
    }
  }
  return Channel(f.dom() * g.dom(), f.cod() * g.cod(), std::move(e));
}

inline State tensor(const State& a, const State& b) { return as_state(tensor(as_channel(a), as_channel(b))); }

/// c∗(σ)(y) = Σ_x c(x)(y) · σ(x).
inline State state_transform(const Channel& c, const State& s) {
  require_same(c.dom(), s.space(), "state_transform");
  return as_state(compose(c, as_channel(s)));
}

/// The state with wires rearranged so that output wire k is wire order[k] of `s`.
inline State permute_wires(const State& s, std::span<const std::size_t> order) {
  return state_transform(permutation(s.space(), order), s);
}

/// Entrywise scaling by a nonnegative scalar.
inline State scale(const State& s, double k) {
  std::vector<double> w(s.weights().begin(), s.weights().end());
  for (auto& v : w) v *= k;
  return State(s.space(), std::move(w));
}

// ---------------------------------------------------------------------------
// Constructors.

inline State point_state(const ProductSpace& space, std::span<const std::string> labels) {
  std::vector<double> w(space.size(), 0.0);
  w[space.index_of(labels)] = 1.0;
  return State(space, std::move(w));
}

inline State point_state(const ProductSpace& space, std::initializer_list<std::string> labels) {
  std::vector<std::string> v(labels);
  return point_state(space, std::span<const std::string>(v));
}

inline State uniform_state(const ProductSpace& space) {
  return State(space, std::vector<double>(space.size(), 1.0 / static_cast<double>(space.size())));
}

/// Empirical distribution: each distinct row gets (its count) / N.
inline State state_from_rows(const ProductSpace& space, std::span<const std::vector<std::string>> rows) {
  if (rows.empty()) throw ValidationError("cannot build a state from an empty row set");
  std::vector<std::size_t> counts(space.size(), 0);
  for (const auto& r : rows) ++counts[space.index_of(r)];
  const double n = static_cast<double>(rows.size());
  std::vector<double> w(space.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(counts[i]) / n;
  return State(space, std::move(w));
}

// ---------------------------------------------------------------------------
// Distances.

inline double linf_distance(const State& a, const State& b) {
  require_same(a.space(), b.space(), "linf_distance");
  double d = 0.0;
  for (std::size_t i = 0; i < a.weights().size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double linf_distance(const Channel& a, const Channel& b) {
  require_same(a.dom(), b.dom(), "linf_distance");
  require_same(a.cod(), b.cod(), "linf_distance");
  double d = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) d = std::max(d, std::abs(a.entries()[i] - b.entries()[i]));
  return d;
}

}  // namespace catprob
