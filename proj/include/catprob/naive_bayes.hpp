#pragma once

#include <catprob/channel.hpp>
#include <catprob/data_table.hpp>
#include <catprob/disintegration.hpp>
#include <catprob/error.hpp>
#include <catprob/likelihood.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace catprob {

/// Gaussian parameters for one (feature, class) pair, written as
/// "feature=temperature;class=y;mean=73;stddev=6.2".
struct GaussianSpec {
  std::string feature;
  std::string cls;
  double mean = 0.0;
  double stddev = 1.0;

  static GaussianSpec parse(std::string_view text) {
    GaussianSpec g;
    bool have[4] = {false, false, false, false};
    for (const auto& field : detail::split(text, ';')) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw ValidationError("gaussian spec field '" + field + "' lacks '='");
      const auto key = detail::trim(field.substr(0, eq));
      const auto val = detail::trim(field.substr(eq + 1));
      auto number = [&]() {
        const auto v = detail::parse_real(val);
        if (!v) throw ValidationError("gaussian spec: '" + key + "' needs a number, got '" + val + "'");
        return *v;
      };
      if (key == "feature") {
        g.feature = val;
        have[0] = true;
      } else if (key == "class") {
        g.cls = val;
        have[1] = true;
      } else if (key == "mean") {
        g.mean = number();
        have[2] = true;
      } else if (key == "stddev") {
        g.stddev = number();
        have[3] = true;
      } else {
        throw ValidationError("gaussian spec: unknown key '" + key + "'");
      }
    }
    if (!(have[0] && have[1] && have[2] && have[3])) {
      throw ValidationError("gaussian spec '" + std::string(text) + "' needs feature, class, mean and stddev");
    }
    if (!(g.stddev > 0.0)) throw ValidationError("gaussian spec: stddev must be positive");
    return g;
  }
};

struct FitOptions {
  bool hybrid = false;
  /// Parameters injected directly instead of fitted; only used in hybrid mode.
  std::vector<GaussianSpec> gaussians;
};

/// Class prior plus one likelihood per feature column.
struct NaiveBayesModel {
  Space classes;
  State prior;
  std::vector<std::string> features;
  std::vector<FeatureEvaluator> evaluators;
  bool hybrid = false;
};

namespace detail {

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

/// Sample mean and (n − 1) standard deviation.
inline Gaussian fit_gaussian(std::span<const double> xs, const std::string& what) {
  if (xs.size() < 2) throw ValidationError("cannot fit a gaussian to fewer than two values for " + what);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  if (!(sd > 0.0)) throw ValidationError("zero spread when fitting a gaussian for " + what);
  return {mean, sd};
}

/// The multi-way copier X → X^⊗k.
inline Channel copy_n(const ProductSpace& x, std::size_t k) {
  Channel c = identity(x);
  for (std::size_t i = 1; i < k; ++i) c = compose(tensor(c, identity(x)), copier(x));
  return c;
}

}  // namespace detail

inline NaiveBayesModel naive_bayes_fit(const DataTable& table, std::string_view class_column,
                                       const FitOptions& opts = {}) {
  const std::size_t cls = table.column_index(class_column);
  const Column& cc = table.column(cls);
  if (cc.numeric) throw ValidationError("class column '" + cc.name + "' is numeric");
  if (table.columns().size() < 2) throw ValidationError("naive Bayes needs at least one feature column");

  const State joint = table.state();
  const std::size_t n = table.columns().size();
  const Mask class_mask = Mask::of(n, {cls});
  State prior = marginal(joint, class_mask);
  for (std::size_t k = 0; k < cc.space.size(); ++k) {
    if (prior[k] == 0.0) throw ValidationError("class '" + cc.space.label(k) + "' has no rows");
  }

  NaiveBayesModel m{cc.space, prior, {}, {}, opts.hybrid};
  for (std::size_t f = 0; f < n; ++f) {
    if (f == cls) continue;
    const Column& col = table.column(f);
    std::vector<const GaussianSpec*> injected(cc.space.size(), nullptr);
    bool any_injected = false;
    if (opts.hybrid) {
      for (const auto& g : opts.gaussians) {
        if (!detail::iequals(g.feature, col.name)) continue;
        injected[cc.space.index_of(g.cls)] = &g;
        any_injected = true;
      }
    }
    m.features.push_back(col.name);
    if (opts.hybrid && (any_injected || col.numeric)) {
      std::vector<Density> ds;
      for (std::size_t k = 0; k < cc.space.size(); ++k) {
        if (injected[k]) {
          ds.emplace_back(Gaussian{injected[k]->mean, injected[k]->stddev});
          continue;
        }
        if (!col.numeric) {
          throw ValidationError("no gaussian parameters for feature '" + col.name + "', class '" +
                                cc.space.label(k) + "'");
        }
        const auto all = table.values(f);
        std::vector<double> xs;
        for (std::size_t r = 0; r < all.size(); ++r) {
          if (table.rows()[r][cls] == cc.space.label(k)) xs.push_back(all[r]);
        }
        ds.emplace_back(detail::fit_gaussian(xs, col.name + " | " + cc.space.label(k)));
      }
      m.evaluators.emplace_back(DensityFamily(cc.space, std::move(ds)));
    } else {
      m.evaluators.emplace_back(extract(joint, Mask::of(n, {f}), class_mask));
    }
  }
  return m;
}

/// Converts observation text cells to typed values for each feature.
inline std::vector<ObservedValue> parse_observation(const NaiveBayesModel& m, std::span<const std::string> cells) {
  if (cells.size() != m.features.size()) {
    throw ValidationError("observation has " + std::to_string(cells.size()) + " values, model has " +
                          std::to_string(m.features.size()) + " features");
  }
  std::vector<ObservedValue> obs;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (m.evaluators[i].is_discrete()) {
      obs.emplace_back(cells[i]);
    } else {
      const auto v = detail::parse_real(cells[i]);
      if (!v) throw ValidationError("feature '" + m.features[i] + "' needs a number, got '" + cells[i] + "'");
      obs.emplace_back(*v);
    }
  }
  return obs;
}

/// d = (d₁ ⊗ … ⊗ d_k) ∘ copy: the tupled channel from the class to all discrete features.
inline Channel tupled_channel(const NaiveBayesModel& m) {
  if (m.evaluators.empty()) throw ValidationError("model has no features");
  std::optional<Channel> all;
  for (const auto& e : m.evaluators) {
    const Channel* c = e.channel();
    if (!c) throw ValidationError("tupling needs every feature to be discrete");
    all = all ? tensor(*all, *c) : *c;
  }
  return compose(*all, detail::copy_n(ProductSpace(m.classes), m.evaluators.size()));
}

/// Bayesian inversion of the tupled channel along the prior: features → class.
inline Channel inversion_channel(const NaiveBayesModel& m) { return bayes_invert(m.prior, tupled_channel(m)); }

inline State naive_bayes_classify(const NaiveBayesModel& m, std::span<const std::string> cells) {
  const auto obs = parse_observation(m, cells);
  if (m.hybrid) return likelihood_invert(m.prior, m.evaluators, obs);
  const Channel d = tupled_channel(m);
  const std::size_t at = d.cod().index_of(cells);
  if (state_transform(d, m.prior)[at] == 0.0) throw MathError("observation has zero probability under every class");
  return bayes_invert(m.prior, d).row_state(at);
}

}  // namespace catprob
