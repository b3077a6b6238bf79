#pragma once

#include <catprob/channel.hpp>
#include <catprob/data_table.hpp>
#include <catprob/disintegration.hpp>
#include <catprob/effects.hpp>
#include <catprob/error.hpp>
#include <catprob/independence.hpp>
#include <catprob/naive_bayes.hpp>
#include <catprob/render.hpp>

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace catprob {

enum class OutputFormat { Ket, Json };

/// Everything one CLI invocation asks for.
struct QuerySpec {
  std::string command;
  std::string input;
  std::string mask;
  std::string out_mask;
  std::string in_mask;
  std::string effect;
  std::string effect_mask;
  std::string x, y, z;
  std::string class_column;
  std::string observation;
  std::string at;
  std::string path = "all";
  std::string formulation = "i";
  bool hybrid = false;
  std::vector<std::string> gaussians;
  std::string gaussians_file;
  std::optional<double> eps;
  OutputFormat format = OutputFormat::Ket;
  int precision = 3;
};

/// Parses an effect on `space`:
///   ""/"1"/"truth"        the truth effect
///   "{t}" or "{a/b,c/d}"  indicator of the listed points
///   "t:1,f:0"             explicit values, unlisted points are 0
/// Multi-wire points are written with '/' between labels.
inline Effect parse_effect(std::string_view text, const ProductSpace& space) {
  const std::string t = detail::trim(text);
  if (t.empty() || t == "1" || t == "truth") return truth(space);
  auto point = [&](const std::string& key) {
    const auto labels = detail::split(key, '/');
    return space.index_of(labels);
  };
  if (t.front() == '{') {
    if (t.back() != '}') throw ValidationError("effect '" + t + "': unterminated event");
    std::vector<double> v(space.size(), 0.0);
    const std::string body = t.substr(1, t.size() - 2);
    if (!detail::trim(body).empty()) {
      for (const auto& key : detail::split(body, ',')) v[point(key)] = 1.0;
    }
    return Effect(space, std::move(v));
  }
  std::vector<double> v(space.size(), 0.0);
  std::size_t offset = 0;
  for (const auto& pair : detail::split(t, ',')) {
    const auto colon = pair.rfind(':');
    if (colon == std::string::npos) {
      throw ValidationError("effect '" + t + "': entry '" + pair + "' at column " + std::to_string(offset + 1) +
                            " is not label:value");
    }
    const auto value = detail::parse_real(pair.substr(colon + 1));
    if (!value || *value < 0.0) {
      throw ValidationError("effect '" + t + "': value in '" + pair + "' must be a nonnegative number");
    }
    v[point(detail::trim(pair.substr(0, colon)))] = *value;
    offset += pair.size() + 1;
  }
  return Effect(space, std::move(v));
}

inline std::vector<std::string> parse_tuple(std::string_view text) { return detail::split(text, ','); }

inline CrossoverPath parse_crossover_path(const std::string& p) {
  if (p == "backward") return CrossoverPath::Backward;
  if (p == "joint") return CrossoverPath::JointThenMarginal;
  if (p == "forward") return CrossoverPath::Forward;
  throw ValidationError("unknown crossover path '" + p + "' (backward, joint, forward, all)");
}

inline CiFormulation parse_formulation(const std::string& f) {
  if (f == "i") return CiFormulation::CondFactor;
  if (f == "ii") return CiFormulation::Factorize3;
  if (f == "iii") return CiFormulation::DropY;
  if (f == "iv") return CiFormulation::FactorPair;
  throw ValidationError("unknown formulation '" + f + "' (i, ii, iii, iv, all)");
}

namespace detail {

inline Mask mask_or(const std::string& text, std::size_t wires, const char* flag) {
  if (text.empty()) throw ValidationError(std::string("missing ") + flag);
  Mask m = Mask::parse(text);
  m.require_length(wires);
  return m;
}

/// Empty text means no wires.
inline Mask optional_mask(const std::string& text, std::size_t wires) {
  if (trim(text).empty()) return Mask::none(wires);
  Mask m = Mask::parse(text);
  m.require_length(wires);
  return m;
}

inline std::string emit(const State& s, const QuerySpec& q) {
  if (q.format == OutputFormat::Json) return to_json(s).dump() + "\n";
  return render_ket(s, q.precision) + "\n";
}

inline std::string emit(const Channel& c, const QuerySpec& q) {
  if (!q.at.empty()) return emit(c.at(parse_tuple(q.at)), q);
  if (q.format == OutputFormat::Json) return to_json(c).dump() + "\n";
  return render_channel(c, q.precision);
}

inline FitOptions fit_options(const QuerySpec& q) {
  FitOptions o;
  o.hybrid = q.hybrid;
  for (const auto& g : q.gaussians) o.gaussians.push_back(GaussianSpec::parse(g));
  if (!q.gaussians_file.empty()) {
    std::ifstream in(q.gaussians_file);
    if (!in) throw ValidationError("cannot open '" + q.gaussians_file + "'");
    for (std::string line; std::getline(in, line);) {
      const auto t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      o.gaussians.push_back(GaussianSpec::parse(t));
    }
  }
  if (!o.gaussians.empty()) o.hybrid = true;
  return o;
}

/// Wires selected by `mask` first, then the rest.
inline State front_wires(const State& s, const Mask& m) {
  auto order = m.selected();
  const auto rest = m.complement().selected();
  order.insert(order.end(), rest.begin(), rest.end());
  return permute_wires(s, order);
}

}  // namespace detail

/// Runs one query and returns the rendered result. Throws ValidationError
/// (including DimensionError) for bad input and MathError when the answer
/// does not exist.
inline std::string run_query(const QuerySpec& q) {
  if (q.input.empty()) throw ValidationError("missing input file");
  const double eps = q.eps.value_or(kDefaultEps);

  if (q.command == "fit" || q.command == "classify") {
    const DataTable table = ingest_csv(q.input);
    const std::string cls = q.class_column.empty() ? table.columns().back().name : q.class_column;
    const NaiveBayesModel model = naive_bayes_fit(table, cls, detail::fit_options(q));
    if (q.command == "fit") {
      if (q.format == OutputFormat::Json) {
        nlohmann::json j;
        j["class"] = model.classes.name();
        j["prior"] = to_json(model.prior);
        j["features"] = nlohmann::json::array();
        for (std::size_t i = 0; i < model.features.size(); ++i) {
          nlohmann::json f;
          f["name"] = model.features[i];
          const auto& e = model.evaluators[i];
          if (const Channel* c = e.channel()) {
            f["kind"] = "discrete";
            f["channel"] = to_json(*c);
          } else {
            f["kind"] = "gaussian";
            const auto& d = *e.density_family();
            for (std::size_t k = 0; k < d.size(); ++k) {
              const auto& g = std::get<Gaussian>(d.density(k));
              f["params"][model.classes.label(k)] = {{"mean", g.mean}, {"stddev", g.stddev}};
            }
          }
          j["features"].push_back(std::move(f));
        }
        return j.dump() + "\n";
      }
      return render_model(model, q.precision);
    }
    if (q.observation.empty()) throw ValidationError("classify needs --observation");
    return detail::emit(naive_bayes_classify(model, parse_tuple(q.observation)), q);
  }

  const State omega = load_state(q.input);
  const std::size_t n = omega.space().wires();

  if (q.command == "marginal") {
    return detail::emit(marginal(omega, detail::mask_or(q.mask, n, "--mask")), q);
  }
  if (q.command == "extract") {
    const Mask out = detail::mask_or(q.out_mask, n, "--out-mask");
    const Mask in = detail::mask_or(q.in_mask, n, "--in-mask");
    return detail::emit(extract(omega, out, in), q);
  }
  if (q.command == "invert") {
    // Prior on the in-wires, channel in → out, inverted to out → in.
    const Mask out = detail::mask_or(q.out_mask, n, "--out-mask");
    const Mask in = detail::mask_or(q.in_mask, n, "--in-mask");
    const Channel c = extract(omega, out, in);
    return detail::emit(bayes_invert(marginal(omega, in), c, eps), q);
  }
  if (q.command == "condition") {
    const Mask on = q.effect_mask.empty() ? Mask::all(n) : detail::mask_or(q.effect_mask, n, "--effect-mask");
    const auto wires = on.selected();
    const Effect p = lift(parse_effect(q.effect, omega.space().select(wires)), omega.space(), wires);
    return detail::emit(condition(omega, p, eps), q);
  }
  if (q.command == "crossover") {
    const Mask xm = q.mask.empty() ? Mask::of(n, {0}) : detail::mask_or(q.mask, n, "--mask");
    const State joint = detail::front_wires(omega, xm);
    const std::size_t k = xm.count();
    const Effect e = parse_effect(q.effect, omega.space().select(xm.complement().selected()));
    if (q.path != "all") return detail::emit(crossover(joint, e, parse_crossover_path(q.path), k, eps), q);
    std::string out;
    nlohmann::json j;
    for (const char* p : {"backward", "joint", "forward"}) {
      const State r = crossover(joint, e, parse_crossover_path(p), k, eps);
      if (q.format == OutputFormat::Json) {
        j[p] = to_json(r);
      } else {
        out += std::string(p) + ": " + render_ket(r, q.precision) + "\n";
      }
    }
    return q.format == OutputFormat::Json ? j.dump() + "\n" : out;
  }
  if (q.command == "ci") {
    const WireGroups g{detail::mask_or(q.x, n, "--x"), detail::mask_or(q.y, n, "--y"), detail::optional_mask(q.z, n)};
    const double ci_eps = q.eps.value_or(kCiEps);
    auto verdict = [](bool b) { return std::string(b ? "independent" : "not independent"); };
    if (q.formulation == "all") {
      std::string out;
      nlohmann::json j;
      for (const char* f : {"i", "ii", "iii", "iv"}) {
        const bool b = ci_formulation(omega, g, parse_formulation(f), ci_eps);
        j[f] = b;
        out += std::string(f) + ": " + verdict(b) + "\n";
      }
      return q.format == OutputFormat::Json ? j.dump() + "\n" : out;
    }
    const bool b = q.formulation == "i" ? cond_indep(omega, g, ci_eps)
                                        : ci_formulation(omega, g, parse_formulation(q.formulation), ci_eps);
    if (q.format == OutputFormat::Json) return nlohmann::json{{"independent", b}}.dump() + "\n";
    return verdict(b) + "\n";
  }
  throw ValidationError("unknown command '" + q.command + "'");
}

}  // namespace catprob
