#pragma once

#include <catprob/channel.hpp>
#include <catprob/error.hpp>
#include <catprob/space.hpp>
#include <catprob/tolerance.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace catprob {

/// One bit per wire of a joint state; selects wires by position.
class Mask {
 public:
  Mask() = default;
  explicit Mask(std::vector<bool> bits) : bits_(std::move(bits)) {}

  static Mask none(std::size_t n) { return Mask(std::vector<bool>(n, false)); }
  static Mask all(std::size_t n) { return Mask(std::vector<bool>(n, true)); }
  static Mask of(std::size_t n, std::initializer_list<std::size_t> wires) {
    Mask m = none(n);
    for (auto w : wires) m.bits_.at(w) = true;
    return m;
  }

  /// Parses "1,0,1,0,0". Whitespace around bits is ignored.
  static Mask parse(std::string_view text) {
    std::vector<bool> bits;
    std::size_t pos = 0;
    std::size_t field = 1;
    while (true) {
      const std::size_t comma = text.find(',', pos);
      std::string_view tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
      const std::size_t tb = tok.find_first_not_of(" \t");
      const std::size_t te = tok.find_last_not_of(" \t");
      tok = tb == std::string_view::npos ? std::string_view{} : tok.substr(tb, te - tb + 1);
      if (tok == "1") {
        bits.push_back(true);
      } else if (tok == "0") {
        bits.push_back(false);
      } else {
        throw ValidationError("invalid mask '" + std::string(text) + "': field " + std::to_string(field) +
                              " (column " + std::to_string(pos + 1) + ") must be 0 or 1");
      }
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
      ++field;
    }
    return Mask(std::move(bits));
  }

  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_.at(i); }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (bool b : bits_) n += b;
    return n;
  }
  bool empty() const noexcept { return count() == 0; }

  /// Positions of the set bits, ascending.
  std::vector<std::size_t> selected() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) out.push_back(i);
    }
    return out;
  }

  Mask complement() const {
    std::vector<bool> b(bits_.size());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = !bits_[i];
    return Mask(std::move(b));
  }

  friend Mask operator|(const Mask& a, const Mask& b) {
    a.require_length(b.size());
    std::vector<bool> r(a.bits_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.bits_[i] || b.bits_[i];
    return Mask(std::move(r));
  }

  bool disjoint(const Mask& other) const {
    require_length(other.size());
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i] && other.bits_[i]) return false;
    }
    return true;
  }

  /// This mask read only at the positions set in `within`.
  Mask restrict_to(const Mask& within) const {
    require_length(within.size());
    std::vector<bool> r;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (within.bits_[i]) r.push_back(bits_[i]);
    }
    return Mask(std::move(r));
  }

  void require_length(std::size_t wires) const {
    if (bits_.size() != wires) {
      throw DimensionError("mask " + to_string() + " has " + std::to_string(bits_.size()) + " bits, expected " +
                           std::to_string(wires));
    }
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (i) s += ',';
      s += bits_[i] ? '1' : '0';
    }
    return s;
  }

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  std::vector<bool> bits_;
};

/// What a conditional channel returns on inputs of zero base mass.
enum class FillPolicy { Uniform, Error };

/// A channel from the conditioning wires to the remaining wires together
/// with the marginal on the conditioning wires.
struct Disintegration {
  Channel channel;
  State base;
  FillPolicy fill = FillPolicy::Uniform;
};

/// Marginal onto the listed wires, in the listed order.
inline State project(const State& s, std::span<const std::size_t> wires) {
  const ProductSpace target = s.space().select(wires);
  std::vector<double> w(target.size(), 0.0);
  for (std::size_t i = 0; i < s.space().size(); ++i) w[s.space().project(i, wires)] += s[i];
  return State(target, std::move(w));
}

/// ω[m]: sums out the wires whose bit is 0, keeping the rest in order.
inline State marginal(const State& s, const Mask& m) {
  m.require_length(s.space().wires());
  const auto keep = m.selected();
  return project(s, keep);
}

/// σ ▷ c: the joint state (x, y) ↦ σ(x) · c(x)(y) on X⊗Y.
inline State integrate(const State& s, const Channel& c) {
  require_same(c.dom(), s.space(), "integrate");
  const std::size_t nx = s.space().size();
  const std::size_t ny = c.cod().size();
  std::vector<double> w(nx * ny);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) w[x * ny + y] = c(x, y) * s[x];
  }
  return State(s.space() * c.cod(), std::move(w));
}

namespace detail {

/// Conditional channel of the wires `out` given the wires `in` (each in the
/// listed order); `in` may be empty, giving the marginal as a state-channel.
inline Disintegration conditional(const State& s, std::span<const std::size_t> in, std::span<const std::size_t> out,
                                  FillPolicy fill) {
  std::vector<std::size_t> order(in.begin(), in.end());
  order.insert(order.end(), out.begin(), out.end());
  const State joint = project(s, order);
  const ProductSpace dom = s.space().select(in);
  const ProductSpace cod = s.space().select(out);
  const std::size_t nx = dom.size();
  const std::size_t ny = cod.size();
  std::vector<double> base(nx, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) base[x] += joint[x * ny + y];
  }
  std::vector<double> e(nx * ny);
  for (std::size_t x = 0; x < nx; ++x) {
    if (base[x] > 0.0) {
      for (std::size_t y = 0; y < ny; ++y) e[x * ny + y] = joint[x * ny + y] / base[x];
    } else if (fill == FillPolicy::Uniform) {
      for (std::size_t y = 0; y < ny; ++y) e[x * ny + y] = 1.0 / static_cast<double>(ny);
    } else {
      const auto labels = dom.labels_at(x);
      std::string t;
      for (const auto& l : labels) t += (t.empty() ? "" : ",") + l;
      throw MathError("zero-mass input (" + t + ") cannot be disintegrated under the error fill policy");
    }
  }
  return {Channel(dom, cod, std::move(e)), State(dom, std::move(base)), fill};
}

}  // namespace detail

/// Splits ω into the marginal on the input wires (bit 1) and the channel
/// from those wires to the output wires (bit 0), so that
/// integrate(base, channel) reproduces ω with inputs moved to the front.
/// Zero-mass inputs get a uniform row, or raise under FillPolicy::Error.
inline Disintegration disintegrate(const State& s, const Mask& inputs, FillPolicy fill = FillPolicy::Uniform) {
  inputs.require_length(s.space().wires());
  const std::size_t k = inputs.count();
  if (k == 0 || k == inputs.size()) {
    throw ValidationError("disintegration mask " + inputs.to_string() + " must mark some but not all wires as inputs");
  }
  const auto in = inputs.selected();
  const auto out = inputs.complement().selected();
  return detail::conditional(s, in, out, fill);
}

/// Wire order that puts the inputs of `inputs` first, then the outputs.
inline std::vector<std::size_t> inputs_first_order(const Mask& inputs) {
  auto order = inputs.selected();
  const auto out = inputs.complement().selected();
  order.insert(order.end(), out.begin(), out.end());
  return order;
}

/// base ▷ channel; equals ω with its wires in inputs_first_order.
inline State reconstruct(const Disintegration& d) { return integrate(d.base, d.channel); }

/// ω[out | in]: marginalise to out ∨ in, then condition on the in-wires.
/// The channel's domain lists the in-wires and its codomain the out-wires,
/// each in original left-to-right order.
inline Channel extract(const State& s, const Mask& out, const Mask& in, FillPolicy fill = FillPolicy::Uniform) {
  out.require_length(s.space().wires());
  in.require_length(s.space().wires());
  if (out.empty() || in.empty()) throw ValidationError("extract needs nonempty output and input masks");
  if (!out.disjoint(in)) throw ValidationError("extract masks " + out.to_string() + " and " + in.to_string() + " overlap");
  const Mask both = out | in;
  return disintegrate(marginal(s, both), in.restrict_to(both), fill).channel;
}

/// Bayesian inversion d : Y → X of c : X → Y with respect to the prior σ:
/// d(y)(x) = c(x)(y) σ(x) / c∗(σ)(y), with uniform rows where c∗(σ)(y) = 0.
inline Channel bayes_invert(const State& prior, const Channel& c, double eps = kDefaultEps) {
  require_same(c.dom(), prior.space(), "bayes_invert");
  if (!prior.is_causal(eps)) throw ValidationError("bayes_invert needs a causal prior");
  if (!c.is_causal(eps)) throw ValidationError("bayes_invert needs a causal channel");
  const std::size_t nx = c.dom().size();
  const std::size_t ny = c.cod().size();
  std::vector<double> e(ny * nx);
  for (std::size_t y = 0; y < ny; ++y) {
    double pred = 0.0;
    for (std::size_t x = 0; x < nx; ++x) pred += c(x, y) * prior[x];
    for (std::size_t x = 0; x < nx; ++x) {
      e[y * nx + x] = pred > 0.0 ? c(x, y) * prior[x] / pred : 1.0 / static_cast<double>(nx);
    }
  }
  return Channel(c.cod(), c.dom(), std::move(e));
}

/// Disintegration of a bipartite ω on X⊗Y (X = the first `x_wires` wires)
/// obtained as π₂ ∘ d, where d inverts the projection π₁ along ω.
inline Channel invert_via_projection(const State& joint, std::size_t x_wires = 1) {
  const ProductSpace& sp = joint.space();
  if (x_wires == 0 || x_wires >= sp.wires()) throw ValidationError("invert_via_projection needs a bipartite state");
  if (!joint.is_causal()) throw ValidationError("invert_via_projection needs a causal state");
  std::vector<std::size_t> xs(x_wires), ys(sp.wires() - x_wires);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = i;
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = x_wires + i;
  const ProductSpace x = sp.select(xs);
  const ProductSpace y = sp.select(ys);
  const Channel first = tensor(identity(x), discarder(y));
  const Channel second = tensor(discarder(x), identity(y));
  return compose(second, bayes_invert(joint, first));
}

/// c ≡σ d: rows agree within eps wherever σ has mass above eps.
inline bool almost_equal(const Channel& c, const Channel& d, const State& s, double eps = kDefaultEps) {
  require_same(c.dom(), d.dom(), "almost_equal");
  require_same(c.cod(), d.cod(), "almost_equal");
  require_same(c.dom(), s.space(), "almost_equal");
  for (std::size_t x = 0; x < c.dom().size(); ++x) {
    if (s[x] <= eps) continue;
    for (std::size_t y = 0; y < c.cod().size(); ++y) {
      if (std::abs(c(x, y) - d(x, y)) > eps) return false;
    }
  }
  return true;
}

/// Whether ω on X⊗Y has marginals σ on X and τ on Y, within eps.
inline bool is_coupling(const State& joint, const State& s, const State& t, double eps = kDefaultEps) {
  const std::size_t nx = s.space().wires();
  const std::size_t ny = t.space().wires();
  require_same(joint.space(), s.space() * t.space(), "is_coupling");
  Mask left = Mask::none(nx + ny);
  for (std::size_t i = 0; i < nx; ++i) left = left | Mask::of(nx + ny, {i});
  return linf_distance(marginal(joint, left), s) <= eps && linf_distance(marginal(joint, left.complement()), t) <= eps;
}

}  // namespace catprob
