#pragma once

#include <catprob/error.hpp>

#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace catprob {

/// A finite, labeled set: the type of a single wire.
///
/// Label order is fixed at construction and defines the index of each point.
class Space {
 public:
  Space(std::string name, std::vector<std::string> labels)
      : name_(std::move(name)), labels_(std::move(labels)) {
    if (labels_.empty()) {
      throw ValidationError("space '" + name_ + "' has no labels");
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& l : labels_) {
      if (!seen.insert(l).second) {
        throw ValidationError("space '" + name_ + "' has duplicate label '" + l + "'");
      }
    }
  }

  const std::string& name() const noexcept { return name_; }
  std::span<const std::string> labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  std::optional<std::size_t> find(std::string_view label) const noexcept {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] == label) return i;
    }
    return std::nullopt;
  }

  std::size_t index_of(std::string_view label) const {
    if (auto i = find(label)) return *i;
    throw ValidationError("unknown label '" + std::string(label) + "' in space '" + name_ + "'");
  }

  friend bool operator==(const Space&, const Space&) = default;

 private:
  std::string name_;
  std::vector<std::string> labels_;
};

/// Ordered tensor product of spaces. The empty product is the tensor unit,
/// which has exactly one point.
///
/// Points are indexed mixed-radix with the leftmost wire most significant.
class ProductSpace {
 public:
  ProductSpace() = default;
  ProductSpace(Space s) : factors_{std::move(s)} {}  // NOLINT: a wire is a one-factor product
  explicit ProductSpace(std::vector<Space> factors) : factors_(std::move(factors)) {}

  static ProductSpace unit() { return {}; }

  std::size_t wires() const noexcept { return factors_.size(); }
  bool is_unit() const noexcept { return factors_.empty(); }
  const Space& wire(std::size_t i) const { return factors_.at(i); }
  std::span<const Space> factors() const noexcept { return factors_; }

  std::size_t size() const noexcept {
    std::size_t n = 1;
    for (const auto& f : factors_) n *= f.size();
    return n;
  }

  std::size_t index(std::span<const std::size_t> coords) const {
    if (coords.size() != factors_.size()) {
      throw DimensionError("tuple has " + std::to_string(coords.size()) + " components, space has " +
                           std::to_string(factors_.size()) + " wires");
    }
    std::size_t idx = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (coords[i] >= factors_[i].size()) {
        throw DimensionError("coordinate out of range on wire '" + factors_[i].name() + "'");
      }
      idx = idx * factors_[i].size() + coords[i];
    }
    return idx;
  }

  std::vector<std::size_t> coords(std::size_t index) const {
    std::vector<std::size_t> c(factors_.size());
    for (std::size_t i = factors_.size(); i-- > 0;) {
      c[i] = index % factors_[i].size();
      index /= factors_[i].size();
    }
    return c;
  }

  std::size_t index_of(std::span<const std::string> labels) const {
    if (labels.size() != factors_.size()) {
      throw DimensionError("tuple has " + std::to_string(labels.size()) + " labels, space " +
                           describe() + " has " + std::to_string(factors_.size()) + " wires");
    }
    std::vector<std::size_t> c(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) c[i] = factors_[i].index_of(labels[i]);
    return index(c);
  }

  std::vector<std::string> labels_at(std::size_t index) const {
    auto c = coords(index);
    std::vector<std::string> out;
    out.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out.push_back(factors_[i].label(c[i]));
    return out;
  }

  /// Sub-product keeping the listed wires in the listed order.
  ProductSpace select(std::span<const std::size_t> wires) const {
    std::vector<Space> f;
    f.reserve(wires.size());
    for (auto w : wires) f.push_back(factors_.at(w));
    return ProductSpace(std::move(f));
  }

  /// Index in select(wires) of the point `index` of this space.
  std::size_t project(std::size_t index, std::span<const std::size_t> wires) const {
    auto c = coords(index);
    std::size_t idx = 0;
    for (auto w : wires) idx = idx * factors_[w].size() + c[w];
    return idx;
  }

  /// Human-readable wire list, e.g. "Outlook⊗Play" or "I".
  std::string describe() const {
    if (factors_.empty()) return "I";
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += "⊗";
      s += factors_[i].name();
    }
    return s;
  }

  friend ProductSpace operator*(const ProductSpace& a, const ProductSpace& b) {
    std::vector<Space> f(a.factors_.begin(), a.factors_.end());
    f.insert(f.end(), b.factors_.begin(), b.factors_.end());
    return ProductSpace(std::move(f));
  }

  friend bool operator==(const ProductSpace&, const ProductSpace&) = default;

 private:
  std::vector<Space> factors_;
};

inline void require_same(const ProductSpace& a, const ProductSpace& b, std::string_view what) {
  if (!(a == b)) {
    throw DimensionError(std::string(what) + ": space mismatch " + a.describe() + " vs " + b.describe());
  }
}

}  // namespace catprob
