#pragma once

#include <catprob/channel.hpp>
#include <catprob/effects.hpp>
#include <catprob/likelihood.hpp>
#include <catprob/naive_bayes.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace catprob {

/// Fixed-point with trailing zeros trimmed: 0.450 → "0.45", 1.000 → "1".
inline std::string format_number(double v, int precision = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

inline std::string join_labels(std::span<const std::string> labels, std::string_view sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) s += sep;
    s += labels[i];
  }
  return s;
}

/// Ket notation, e.g. "0.205|y⟩ + 0.795|n⟩". Single-wire states list every
/// point; multi-wire states omit points of weight exactly zero.
inline std::string render_ket(const State& s, int precision = 3) {
  std::string out;
  const bool show_zeros = s.space().wires() <= 1;
  for (std::size_t i = 0; i < s.space().size(); ++i) {
    if (!show_zeros && s[i] == 0.0) continue;
    if (!out.empty()) out += " + ";
    out += format_number(s[i], precision) + "|" + join_labels(s.space().labels_at(i)) + "⟩";
  }
  return out.empty() ? "0" : out;
}

/// One line per input: "y ↦ 0.222|s⟩ + 0.444|o⟩ + 0.333|r⟩".
inline std::string render_channel(const Channel& c, int precision = 3) {
  std::ostringstream os;
  for (std::size_t x = 0; x < c.dom().size(); ++x) {
    const auto labels = c.dom().labels_at(x);
    os << (labels.empty() ? std::string("*") : join_labels(labels)) << " ↦ " << render_ket(c.row_state(x), precision)
       << '\n';
  }
  return os.str();
}

inline std::string render_effect(const Effect& p, int precision = 3) {
  std::string out;
  for (std::size_t i = 0; i < p.space().size(); ++i) {
    if (!out.empty()) out += ", ";
    out += join_labels(p.space().labels_at(i)) + " ↦ " + format_number(p[i], precision);
  }
  return out;
}

inline nlohmann::json wires_json(const ProductSpace& sp) {
  auto j = nlohmann::json::array();
  for (const auto& w : sp.factors()) j.push_back(w.name());
  return j;
}

/// {"wires": [...], "labels": [[...], ...], "weights": [...]}
inline nlohmann::json to_json(const State& s) {
  nlohmann::json j;
  j["wires"] = wires_json(s.space());
  j["labels"] = nlohmann::json::array();
  for (std::size_t i = 0; i < s.space().size(); ++i) j["labels"].push_back(s.space().labels_at(i));
  j["weights"] = std::vector<double>(s.weights().begin(), s.weights().end());
  return j;
}

inline nlohmann::json to_json(const Channel& c) {
  nlohmann::json j;
  j["dom"] = wires_json(c.dom());
  j["cod"] = wires_json(c.cod());
  j["rows"] = nlohmann::json::array();
  for (std::size_t x = 0; x < c.dom().size(); ++x) {
    auto row = to_json(c.row_state(x));
    row["input"] = c.dom().labels_at(x);
    j["rows"].push_back(std::move(row));
  }
  return j;
}

/// Plain-text dump of a fitted model.
inline std::string render_model(const NaiveBayesModel& m, int precision = 3) {
  std::ostringstream os;
  os << "class " << m.classes.name() << "\n";
  os << "prior " << render_ket(m.prior, precision) << "\n";
  for (std::size_t i = 0; i < m.features.size(); ++i) {
    const auto& e = m.evaluators[i];
    if (const Channel* c = e.channel()) {
      os << "feature " << m.features[i] << " discrete\n";
      std::istringstream rows(render_channel(*c, precision));
      for (std::string line; std::getline(rows, line);) os << "  " << line << "\n";
    } else {
      os << "feature " << m.features[i] << " gaussian\n";
      const DensityFamily& d = *e.density_family();
      for (std::size_t k = 0; k < d.size(); ++k) {
        const auto& g = std::get<Gaussian>(d.density(k));
        os << "  " << m.classes.label(k) << " ↦ mean=" << format_number(g.mean, precision)
           << " stddev=" << format_number(g.stddev, precision) << "\n";
      }
    }
  }
  return os.str();
}

}  // namespace catprob
