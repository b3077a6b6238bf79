#pragma once

// Random generators, worked-example fixtures and brute-force oracles shared
// by the unit and acceptance suites. The oracles work on raw index arithmetic
// rather than the library's compose/project/disintegrate paths.

#include <catprob/catprob.hpp>

#include <cstddef>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace catprob::testing {

using Rng = std::mt19937_64;

inline Space make_space(const std::string& name, std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(name + std::to_string(i));
  return Space(name, std::move(labels));
}

/// Product of `wires` spaces with sizes drawn from [1, max_size].
inline ProductSpace random_product(Rng& rng, std::size_t wires, std::size_t max_size, const std::string& prefix = "X") {
  std::uniform_int_distribution<std::size_t> size(1, max_size);
  std::vector<Space> f;
  for (std::size_t i = 0; i < wires; ++i) f.push_back(make_space(prefix + std::to_string(i), size(rng)));
  return ProductSpace(std::move(f));
}

/// Flat Dirichlet weights; each entry is zeroed with probability `zero_prob`
/// (at least one entry is kept).
inline std::vector<double> random_simplex(Rng& rng, std::size_t n, double zero_prob = 0.0) {
  std::exponential_distribution<double> e(1.0);
  std::bernoulli_distribution zero(zero_prob);
  std::vector<double> w(n);
  double s = 0.0;
  for (auto& v : w) {
    v = zero(rng) ? 0.0 : e(rng);
    s += v;
  }
  if (s == 0.0) {
    w[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = 1.0;
    s = 1.0;
  }
  for (auto& v : w) v /= s;
  return w;
}

inline State random_state(Rng& rng, const ProductSpace& sp, double zero_prob = 0.0) {
  return State(sp, random_simplex(rng, sp.size(), zero_prob));
}

inline Channel random_channel(Rng& rng, const ProductSpace& dom, const ProductSpace& cod, double zero_prob = 0.0) {
  std::vector<double> e;
  for (std::size_t x = 0; x < dom.size(); ++x) {
    auto r = random_simplex(rng, cod.size(), zero_prob);
    e.insert(e.end(), r.begin(), r.end());
  }
  return Channel(dom, cod, std::move(e));
}

inline Effect random_effect(Rng& rng, const ProductSpace& sp, double hi = 1.0) {
  std::uniform_real_distribution<double> u(0.0, hi);
  std::vector<double> v(sp.size());
  for (auto& x : v) x = u(rng);
  return Effect(sp, std::move(v));
}

// ---------------------------------------------------------------------------
// Disease and mood fixture.

inline Space mood_space() { return Space("M", {"m", "~m"}); }
inline Space disease_space() { return Space("D", {"d", "~d"}); }
inline Space test_space() { return Space("2", {"t", "f"}); }

/// ω = 0.05|m,d⟩ + 0.4|m,~d⟩ + 0.5|~m,d⟩ + 0.05|~m,~d⟩.
inline State disease_mood() {
  return State(ProductSpace({mood_space(), disease_space()}), {0.05, 0.4, 0.5, 0.05});
}

/// s(d) = 9/10|t⟩ + 1/10|f⟩, s(~d) = 1/20|t⟩ + 19/20|f⟩.
inline Channel disease_test() {
  return Channel(disease_space(), test_space(), {0.9, 0.1, 0.05, 0.95});
}

inline Effect tt() { return Effect(test_space(), {1.0, 0.0}); }

inline std::string data_path(const std::string& file) { return std::string(CATPROB_DATA_DIR) + "/" + file; }

/// |got − want| ≤ tol, with 1e-12 slack for exact values lying on the
/// tolerance boundary (e.g. 0.4825 against a printed 0.482 ± 5e-4).
inline bool near_printed(double got, double want, double tol) { return std::abs(got - want) <= tol + 1e-12; }

// ---------------------------------------------------------------------------
// Oracles.

/// Naive triple loop over raw row-major tables.
inline std::vector<double> oracle_matmul(const std::vector<double>& a, const std::vector<double>& b, std::size_t n,
                                         std::size_t m, std::size_t k) {
  std::vector<double> c(n * k, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < m; ++l) c[i * k + j] += a[i * m + l] * b[l * k + j];
  return c;
}

/// Mixed-radix digits of `index` for the given radices, leftmost most significant.
inline std::vector<std::size_t> digits(std::size_t index, const std::vector<std::size_t>& radix) {
  std::vector<std::size_t> d(radix.size());
  for (std::size_t i = radix.size(); i-- > 0;) {
    d[i] = index % radix[i];
    index /= radix[i];
  }
  return d;
}

inline std::vector<std::size_t> radices(const ProductSpace& sp) {
  std::vector<std::size_t> r;
  for (const auto& f : sp.factors()) r.push_back(f.size());
  return r;
}

/// P(out = o | in = i) by summing over all tuples of ω; returns NaN where P(in = i) = 0.
inline double oracle_conditional(const State& s, const std::vector<std::size_t>& out_wires,
                                 const std::vector<std::size_t>& out_vals, const std::vector<std::size_t>& in_wires,
                                 const std::vector<std::size_t>& in_vals) {
  const auto r = radices(s.space());
  double joint = 0.0, base = 0.0;
  for (std::size_t i = 0; i < s.space().size(); ++i) {
    const auto d = digits(i, r);
    bool in_ok = true, out_ok = true;
    for (std::size_t k = 0; k < in_wires.size(); ++k) in_ok = in_ok && d[in_wires[k]] == in_vals[k];
    for (std::size_t k = 0; k < out_wires.size(); ++k) out_ok = out_ok && d[out_wires[k]] == out_vals[k];
    if (in_ok) base += s[i];
    if (in_ok && out_ok) joint += s[i];
  }
  return base > 0.0 ? joint / base : std::numeric_limits<double>::quiet_NaN();
}

/// Sums ω over all coordinates not in `keep`.
inline std::vector<double> oracle_marginal(const State& s, const std::vector<std::size_t>& keep) {
  const auto r = radices(s.space());
  std::size_t n = 1;
  for (auto w : keep) n *= r[w];
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < s.space().size(); ++i) {
    const auto d = digits(i, r);
    std::size_t idx = 0;
    for (auto w : keep) idx = idx * r[w] + d[w];
    out[idx] += s[i];
  }
  return out;
}

}  // namespace catprob::testing
